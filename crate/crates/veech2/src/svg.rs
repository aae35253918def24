//! SVG rendering of surfaces and decompositions.
//!
//! Coordinates are converted to floating point here and nowhere else; the
//! picture is for human eyes and nothing downstream reads it back. Each
//! polygon becomes one closed path, glued edge pairs share a color and a
//! numeric label, and an optional cylinder decomposition is drawn as shaded
//! bands with dashed core curves (bands are clipped per level strip in the
//! normalized chart, which is exact for stacked decompositions like the
//! bundled fixtures).

use crate::cylinder::CylinderDecomposition;
use crate::surface::{Surface, Vec2Q};
use std::fmt::Write;

fn pt(v: &Vec2Q) -> (f64, f64) {
    (v.x.to_f64(), v.y.to_f64())
}

fn edge_color(pair: usize) -> String {
    let hue = (pair * 67) % 360;
    format!("hsl({hue}, 70%, 40%)")
}

const BAND_FILLS: [&str; 6] = [
    "rgba(66, 135, 245, 0.25)",
    "rgba(240, 140, 50, 0.25)",
    "rgba(60, 180, 90, 0.25)",
    "rgba(200, 60, 150, 0.25)",
    "rgba(150, 120, 240, 0.25)",
    "rgba(230, 200, 50, 0.25)",
];

/// Clip a float polygon against the half-plane ±y ≥ / ≤ c.
fn clip_half(poly: &[(f64, f64)], c: f64, keep_below: bool) -> Vec<(f64, f64)> {
    let inside = |p: (f64, f64)| if keep_below { p.1 <= c } else { p.1 >= c };
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (ia, ib) = (inside(a), inside(b));
        if ia {
            out.push(a);
        }
        if ia != ib {
            let t = (c - a.1) / (b.1 - a.1);
            out.push((a.0 + t * (b.0 - a.0), c));
        }
    }
    out
}

/// Render a surface, optionally with a cylinder decomposition overlay.
pub fn export_svg(s: &Surface, dec: Option<&CylinderDecomposition>) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in &s.polygons {
        for v in &p.vertices {
            let (x, y) = pt(v);
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    let pad = 0.15 * ((max_x - min_x).max(max_y - min_y)).max(1.0);
    let scale = 120.0;
    // Flip y so the picture is in the usual mathematical orientation.
    let tx = |x: f64| (x - min_x + pad) * scale;
    let ty = |y: f64| (max_y - y + pad) * scale;
    let width = (max_x - min_x + 2.0 * pad) * scale;
    let height = (max_y - min_y + 2.0 * pad) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );

    // Polygon faces.
    for p in &s.polygons {
        let mut d_attr = String::new();
        for (i, v) in p.vertices.iter().enumerate() {
            let (x, y) = pt(v);
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d_attr, "{}{:.4} {:.4} ", cmd, tx(x), ty(y));
        }
        d_attr.push('Z');
        let _ = writeln!(
            out,
            "  <path d=\"{d_attr}\" fill=\"#f4f2ec\" stroke=\"none\"/>"
        );
    }

    // Cylinder bands, in the normalized chart, mapped back for display.
    if let Some(dec) = dec {
        let g = &dec.normalizer;
        let ginv = g.inverse().expect("unimodular");
        for (ci, cyl) in dec.cylinders.iter().enumerate() {
            let lo = dec.bottom_levels()[ci].to_f64();
            let hi = lo + cyl.height.to_f64();
            let fill = BAND_FILLS[ci % BAND_FILLS.len()];
            for p in &s.polygons {
                let norm_poly: Vec<(f64, f64)> = p
                    .vertices
                    .iter()
                    .map(|v| pt(&g.apply(v)))
                    .collect();
                let band = clip_half(&clip_half(&norm_poly, lo, false), hi, true);
                if band.len() < 3 {
                    continue;
                }
                let mut d_attr = String::new();
                for (i, &(nx, ny)) in band.iter().enumerate() {
                    // Map back through the inverse normalizer, in floats.
                    let ax = ginv.a.to_f64() * nx + ginv.b.to_f64() * ny;
                    let ay = ginv.c.to_f64() * nx + ginv.d.to_f64() * ny;
                    let cmd = if i == 0 { 'M' } else { 'L' };
                    let _ = write!(d_attr, "{}{:.4} {:.4} ", cmd, tx(ax), ty(ay));
                }
                d_attr.push('Z');
                let _ = writeln!(
                    out,
                    "  <path class=\"cylinder cylinder-{ci}\" d=\"{d_attr}\" fill=\"{fill}\" stroke=\"none\"/>"
                );
            }
            // Core curve: the mid-level line of the band.
            let mid = 0.5 * (lo + hi);
            for p in &s.polygons {
                let norm_poly: Vec<(f64, f64)> =
                    p.vertices.iter().map(|v| pt(&g.apply(v))).collect();
                let slice = clip_half(&clip_half(&norm_poly, mid - 1e-9, false), mid + 1e-9, true);
                if slice.len() < 2 {
                    continue;
                }
                let xs: Vec<f64> = slice.iter().map(|p| p.0).collect();
                let (x0, x1) = (
                    xs.iter().cloned().fold(f64::INFINITY, f64::min),
                    xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                );
                let map = |nx: f64, ny: f64| {
                    (
                        ginv.a.to_f64() * nx + ginv.b.to_f64() * ny,
                        ginv.c.to_f64() * nx + ginv.d.to_f64() * ny,
                    )
                };
                let (ax0, ay0) = map(x0, mid);
                let (ax1, ay1) = map(x1, mid);
                let _ = writeln!(
                    out,
                    "  <line class=\"core core-{ci}\" x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#333\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>",
                    tx(ax0), ty(ay0), tx(ax1), ty(ay1)
                );
            }
        }
    }

    // Edges, colored by gluing pair, with labels at edge midpoints.
    for (k, &(e1, e2)) in s.gluings.iter().enumerate() {
        let color = edge_color(k);
        for &(pi, ei) in &[e1, e2] {
            let p = &s.polygons[pi];
            let a = p.vertex(ei);
            let b = p.vertex(ei + 1);
            let (ax, ay) = pt(a);
            let (bx, by) = pt(b);
            let _ = writeln!(
                out,
                "  <line class=\"edge pair-{k}\" x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                tx(ax), ty(ay), tx(bx), ty(by)
            );
            let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
            let _ = writeln!(
                out,
                "  <text class=\"label pair-{k}\" x=\"{:.4}\" y=\"{:.4}\" font-size=\"14\" fill=\"{color}\" text-anchor=\"middle\">{k}</text>",
                tx(mx), ty(my) - 4.0
            );
        }
    }

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::presets::unit_torus;

    #[test]
    fn torus_svg_has_one_face_and_two_labels() {
        let svg = export_svg(&unit_torus(), None);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<path").count(), 1);
        // Two gluing pairs, each labeled on both edges.
        assert_eq!(svg.matches("<text").count(), 4);
    }
}
