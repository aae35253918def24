//! Exact horizontal separatrix tracing and cylinder assembly.
//!
//! Works on an already-normalized surface (the direction of interest is
//! horizontal). Every vertex class is treated as a marked point: separatrices
//! start and stop at vertex classes, and all hit tests are exact equality
//! tests in Q(√d) — there is no tolerance anywhere.
//!
//! The combinatorial backbone is the cyclic order of horizontal rays around
//! each vertex class. Between two angularly consecutive horizontal rays the
//! direction sweeps exactly a half turn, so the rays alternate rightward /
//! leftward, and a class of cone angle 2πn carries exactly n of each. Walking
//! the bottom boundary of a cylinder rightward and arriving at a cone along a
//! leftward ray, the boundary continues along the angularly previous ray (the
//! cylinder fills the π-sector above); on a top boundary it continues along
//! the angularly next ray. That turns cylinder assembly into orbit
//! computations over the traced saddle connections.

use crate::qfield::QElem;
use crate::surface::{ccw_open_sector_contains, Surface, SurfaceAnalysis, Vec2Q};
use std::collections::HashMap;

/// One straight piece of a saddle connection, in one polygon chart.
#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub poly: usize,
    pub y: QElem,
    pub x_lo: QElem,
    pub x_hi: QElem,
    /// Traced length of the connection before this piece.
    pub offset: QElem,
}

/// A horizontal saddle connection, traced rightward from a cone prong.
#[derive(Clone, Debug)]
pub(crate) struct Connection {
    pub len: QElem,
    pub segments: Vec<Segment>,
    /// (class, ray index) of the arrival back-ray (a leftward ray).
    pub end_ray: (usize, usize),
}

/// A boundary circle of a cylinder: connections in rightward cyclic order
/// with their start positions along the circle.
#[derive(Clone, Debug)]
pub(crate) struct Circle {
    pub conns: Vec<usize>,
    pub pos: Vec<QElem>,
    pub len: QElem,
}

impl Circle {
    pub fn position_of(&self, conn: usize) -> &QElem {
        let k = self.conns.iter().position(|&c| c == conn).expect("conn on circle");
        &self.pos[k]
    }

    pub fn conn_len(&self, k: usize) -> QElem {
        let next = if k + 1 < self.pos.len() {
            self.pos[k + 1].clone()
        } else {
            self.len.clone()
        };
        next - self.pos[k].clone()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct RawCylinder {
    pub width: QElem,
    pub height: QElem,
    pub bottom: Circle,
    pub top: Circle,
    /// Chart alignment: a point at top-circle position y sits at unrolled
    /// coordinate y + align, where the unrolled coordinate agrees with
    /// bottom-circle positions (everything mod width).
    pub align: QElem,
}

#[derive(Clone, Debug)]
pub(crate) struct RawDecomposition {
    pub conns: Vec<Connection>,
    pub cylinders: Vec<RawCylinder>,
    /// Cylinder index directly above / below each connection.
    pub above: Vec<usize>,
    pub below: Vec<usize>,
}

#[allow(clippy::large_enum_variant)]
pub(crate) enum TraceResult {
    Periodic(RawDecomposition),
    /// Some separatrix exceeded the cap.
    Inconclusive { traced: QElem },
}

struct Ray {
    corner: (usize, usize),
    rightward: bool,
}

pub(crate) fn trace_horizontal(
    surf: &Surface,
    analysis: &SurfaceAnalysis,
    cap: &QElem,
) -> TraceResult {
    let plus_x = Vec2Q::new(QElem::one(), QElem::zero());
    let minus_x = Vec2Q::new(QElem::from_int(-1), QElem::zero());

    // Horizontal rays around every vertex class, in counterclockwise cyclic
    // order. Marked classes of angle 2π participate exactly like cone
    // points: separatrices stop there, so their rays must be part of the
    // circle combinatorics (and on a torus they are the only seeds).
    let seeds: Vec<usize> = (0..analysis.classes.len()).collect();
    let mut rays: HashMap<usize, Vec<Ray>> = HashMap::new();
    for &cls in &seeds {
        let mut list = Vec::new();
        for &(p, i) in &analysis.classes[cls] {
            let poly = &surf.polygons[p];
            let n = poly.len();
            let u = poly.edge_vec(i);
            let w = -poly.edge_vec((i + n - 1) % n);
            let mut here: Vec<bool> = Vec::new(); // rightward flags, in ccw order
            let has_plus = plus_x.same_direction(&u) || ccw_open_sector_contains(&u, &w, &plus_x);
            let has_minus =
                minus_x.same_direction(&u) || ccw_open_sector_contains(&u, &w, &minus_x);
            match (has_plus, has_minus) {
                (true, false) => here.push(true),
                (false, true) => here.push(false),
                (true, true) => {
                    // Order the two rays by counterclockwise angle from u.
                    let plus_first = plus_x.same_direction(&u)
                        || ccw_open_sector_contains(&u, &minus_x, &plus_x);
                    if plus_first {
                        here.push(true);
                        here.push(false);
                    } else {
                        here.push(false);
                        here.push(true);
                    }
                }
                (false, false) => {}
            }
            for r in here {
                list.push(Ray { corner: (p, i), rightward: r });
            }
        }
        debug_assert_eq!(list.len() as u32, 2 * analysis.turns[cls]);
        debug_assert!(
            list.windows(2).all(|w| w[0].rightward != w[1].rightward),
            "horizontal rays must alternate"
        );
        rays.insert(cls, list);
    }

    // Trace one connection per rightward ray.
    let mut conns: Vec<Connection> = Vec::new();
    let mut prong_of: HashMap<(usize, usize), usize> = HashMap::new(); // ray -> conn started
    let mut arrival_of: HashMap<(usize, usize), usize> = HashMap::new(); // ray -> conn ended
    let mut ray_keys: Vec<(usize, usize)> = Vec::new();
    for &cls in &seeds {
        for k in 0..rays[&cls].len() {
            ray_keys.push((cls, k));
        }
    }
    for &(cls, k) in &ray_keys {
        if !rays[&cls][k].rightward {
            continue;
        }
        let (p, i) = rays[&cls][k].corner;
        let conn_id = conns.len();
        let conn = match trace_one(surf, analysis, &rays, (p, i), cap) {
            Some(c) => c,
            None => {
                let traced: QElem = conns
                    .iter()
                    .fold(QElem::zero(), |acc, c| acc + c.len.clone());
                return TraceResult::Inconclusive { traced };
            }
        };
        let prev = arrival_of.insert(conn.end_ray, conn_id);
        debug_assert!(prev.is_none(), "two connections arriving on one ray");
        prong_of.insert((cls, k), conn_id);
        conns.push(conn);
    }

    // Circle successors: arriving at the end ray, a bottom boundary
    // continues on the angularly previous ray, a top boundary on the next.
    let step = |ray: (usize, usize), delta: isize| -> (usize, usize) {
        let n = rays[&ray.0].len() as isize;
        let k = (ray.1 as isize + delta).rem_euclid(n) as usize;
        (ray.0, k)
    };
    let next_bottom: Vec<usize> = conns
        .iter()
        .map(|c| prong_of[&step(c.end_ray, -1)])
        .collect();
    let next_top: Vec<usize> = conns
        .iter()
        .map(|c| prong_of[&step(c.end_ray, 1)])
        .collect();

    let bottom_circles = collect_cycles(&next_bottom, &conns);
    let top_circles = collect_cycles(&next_top, &conns);

    // Pair circles into cylinders with a vertical probe from each bottom
    // circle, which also yields the height and the chart alignment.
    let mut top_circle_of_conn = vec![usize::MAX; conns.len()];
    for (ti, t) in top_circles.iter().enumerate() {
        for &c in &t.conns {
            top_circle_of_conn[c] = ti;
        }
    }
    let registry = SegmentRegistry::build(surf, &conns);
    let mut cylinders = Vec::new();
    let mut above = vec![usize::MAX; conns.len()];
    let mut below = vec![usize::MAX; conns.len()];
    for bottom in bottom_circles {
        let first_conn = &conns[bottom.conns[0]];
        let seg = &first_conn.segments[0];
        let seg_len = seg.x_hi.clone() - seg.x_lo.clone();
        // Probe offsets within the interior of the first traced segment.
        let mut probe = None;
        for denom in 2..66i64 {
            let frac = QElem::from_rat(crate::qfield::Rat::new(1.into(), denom.into()));
            let off = seg_len.clone() * frac;
            let start_x = seg.x_lo.clone() + off.clone();
            match vertical_probe(surf, &registry, seg.poly, &start_x, &seg.y) {
                ProbeResult::Hit { conn, offset, climbed } => {
                    let b = bottom.pos[0].clone() + seg.offset.clone() + off;
                    probe = Some((conn, offset, climbed, b));
                    break;
                }
                ProbeResult::HitVertex => continue,
            }
        }
        let (hit_conn, hit_offset, height, b) =
            probe.expect("vertical probe found a clean offset");
        let ti = top_circle_of_conn[hit_conn];
        let top = top_circles[ti].clone();
        debug_assert_eq!(top.len, bottom.len, "cylinder circles have equal length");
        let t_hit = top.position_of(hit_conn).clone() + hit_offset;
        let align = (b - t_hit).rem_euclid(&bottom.len);
        let ci = cylinders.len();
        for &c in &bottom.conns {
            above[c] = ci;
        }
        for &c in &top.conns {
            below[c] = ci;
        }
        cylinders.push(RawCylinder {
            width: bottom.len.clone(),
            height,
            bottom,
            top,
            align,
        });
    }
    debug_assert!(above.iter().all(|&a| a != usize::MAX));
    debug_assert!(below.iter().all(|&a| a != usize::MAX));

    TraceResult::Periodic(RawDecomposition { conns, cylinders, above, below })
}

fn collect_cycles(next: &[usize], conns: &[Connection]) -> Vec<Circle> {
    let mut seen = vec![false; next.len()];
    let mut out = Vec::new();
    for start in 0..next.len() {
        if seen[start] {
            continue;
        }
        let mut ids = Vec::new();
        let mut c = start;
        loop {
            seen[c] = true;
            ids.push(c);
            c = next[c];
            if c == start {
                break;
            }
        }
        let mut pos = Vec::with_capacity(ids.len());
        let mut acc = QElem::zero();
        for &id in &ids {
            pos.push(acc.clone());
            acc = acc + conns[id].len.clone();
        }
        out.push(Circle { conns: ids, pos, len: acc });
    }
    out
}

/// Trace one separatrix rightward from a cone corner until it hits a vertex
/// class. Returns None if the cap is exceeded.
fn trace_one(
    surf: &Surface,
    analysis: &SurfaceAnalysis,
    rays: &HashMap<usize, Vec<Ray>>,
    start_corner: (usize, usize),
    cap: &QElem,
) -> Option<Connection> {
    let (p0, i0) = start_corner;
    let poly0 = &surf.polygons[p0];
    let u = poly0.edge_vec(i0);
    let plus_x = Vec2Q::new(QElem::one(), QElem::zero());

    // Along-edge separatrix: the connection is the edge itself.
    if plus_x.same_direction(&u) {
        let a = poly0.vertex(i0).clone();
        let len = u.x.clone();
        let end_vertex_corner = surf.partner_of(p0, i0);
        let end_class = analysis.class_of[&end_vertex_corner];
        let end_ray = find_edge_back_ray(surf, rays, end_class, end_vertex_corner);
        let seg = Segment {
            poly: p0,
            y: a.y.clone(),
            x_lo: a.x.clone(),
            x_hi: a.x.clone() + len.clone(),
            offset: QElem::zero(),
        };
        return Some(Connection { len, segments: vec![seg], end_ray });
    }

    let mut segments = Vec::new();
    let mut total = QElem::zero();
    let mut p = p0;
    let mut z = poly0.vertex(i0).clone();
    loop {
        let exit = first_exit_rightward(surf, p, &z);
        let seg_len = exit.x.clone() - z.x.clone();
        segments.push(Segment {
            poly: p,
            y: z.y.clone(),
            x_lo: z.x.clone(),
            x_hi: exit.x.clone(),
            offset: total.clone(),
        });
        total = total + seg_len;
        if total.cmp_exact(cap) == std::cmp::Ordering::Greater {
            return None;
        }
        match exit.kind {
            ExitKind::Vertex(k) => {
                let cls = analysis.class_of[&(p, k)];
                let end_ray = find_interior_back_ray(rays, cls, (p, k));
                return Some(Connection { len: total, segments, end_ray });
            }
            ExitKind::Edge(k, t) => {
                let (p2, j) = surf.partner_of(p, k);
                // Translation taking edge (p,k) onto its partner reversed.
                let shift = surf.polygons[p2].vertex((j + 1) % surf.polygons[p2].len()).clone()
                    - surf.polygons[p].vertex(k).clone();
                let hit = Vec2Q::new(exit.x.clone(), z.y.clone());
                z = hit + shift;
                p = p2;
                let _ = t;
            }
        }
    }
}

/// At the terminal vertex of an along-edge connection, the back-ray points
/// leftward along the glued partner edge, i.e. it is the leftward ray whose
/// corner starts the partner edge.
fn find_edge_back_ray(
    surf: &Surface,
    rays: &HashMap<usize, Vec<Ray>>,
    cls: usize,
    partner_corner: (usize, usize),
) -> (usize, usize) {
    let list = &rays[&cls];
    for (k, ray) in list.iter().enumerate() {
        if ray.rightward {
            continue;
        }
        if ray.corner == partner_corner {
            // Leftward ray along the out-edge of this corner.
            let u = surf.polygons[ray.corner.0].edge_vec(ray.corner.1);
            if u.x.is_negative() && u.y.is_zero() {
                return (cls, k);
            }
        }
    }
    panic!("no back-ray along glued edge");
}

/// The back-ray of a separatrix arriving strictly inside the sector of
/// corner `(p, k)`.
fn find_interior_back_ray(
    rays: &HashMap<usize, Vec<Ray>>,
    cls: usize,
    corner: (usize, usize),
) -> (usize, usize) {
    let list = &rays[&cls];
    for (k, ray) in list.iter().enumerate() {
        if !ray.rightward && ray.corner == corner {
            return (cls, k);
        }
    }
    panic!("no leftward ray at arrival corner");
}

struct Exit {
    x: QElem,
    kind: ExitKind,
}

enum ExitKind {
    Vertex(usize),
    Edge(usize, QElem),
}

/// First boundary contact of the rightward horizontal ray from `z` inside
/// polygon `p`. Exact: vertex hits are exact equality on both coordinates.
fn first_exit_rightward(surf: &Surface, p: usize, z: &Vec2Q) -> Exit {
    let poly = &surf.polygons[p];
    let n = poly.len();
    let mut best: Option<Exit> = None;
    let mut consider = |cand: Exit| {
        let better = match &best {
            None => true,
            Some(b) => cand.x.cmp_exact(&b.x) == std::cmp::Ordering::Less,
        };
        if better {
            best = Some(cand);
        }
    };
    for k in 0..n {
        let v = poly.vertex(k);
        if v.y == z.y && v.x.cmp_exact(&z.x) == std::cmp::Ordering::Greater {
            consider(Exit { x: v.x.clone(), kind: ExitKind::Vertex(k) });
        }
    }
    for k in 0..n {
        let a = poly.vertex(k);
        let b = poly.vertex((k + 1) % n);
        let sa = (a.y.clone() - z.y.clone()).sign();
        let sb = (b.y.clone() - z.y.clone()).sign();
        if sa * sb < 0 {
            let t = (z.y.clone() - a.y.clone()) / (b.y.clone() - a.y.clone());
            let x = a.x.clone() + (b.x.clone() - a.x.clone()) * t.clone();
            if x.cmp_exact(&z.x) == std::cmp::Ordering::Greater {
                consider(Exit { x, kind: ExitKind::Edge(k, t) });
            }
        }
    }
    best.expect("horizontal ray must exit the polygon")
}

/// Per-polygon registry of level pieces (traced segments plus both copies of
/// horizontal edges) used by the vertical probe.
struct SegmentRegistry {
    by_poly: Vec<Vec<LevelPiece>>,
}

#[derive(Clone)]
struct LevelPiece {
    y: QElem,
    x_lo: QElem,
    x_hi: QElem,
    conn: usize,
    /// Connection offset at x_lo.
    off_lo: QElem,
}

impl SegmentRegistry {
    fn build(surf: &Surface, conns: &[Connection]) -> SegmentRegistry {
        let mut by_poly: Vec<Vec<LevelPiece>> = vec![Vec::new(); surf.polygons.len()];
        for (ci, conn) in conns.iter().enumerate() {
            for seg in &conn.segments {
                by_poly[seg.poly].push(LevelPiece {
                    y: seg.y.clone(),
                    x_lo: seg.x_lo.clone(),
                    x_hi: seg.x_hi.clone(),
                    conn: ci,
                    off_lo: seg.offset.clone(),
                });
            }
        }
        // Register the partner copy of along-edge connections: their single
        // segment lives in the polygon above the edge; the copy below is the
        // glued edge in the other chart.
        for (ci, conn) in conns.iter().enumerate() {
            if conn.segments.len() != 1 {
                continue;
            }
            let seg = &conn.segments[0];
            let p = seg.poly;
            let poly = &surf.polygons[p];
            // Find a horizontal +x edge of p exactly matching the segment.
            for k in 0..poly.len() {
                let a = poly.vertex(k);
                let e = poly.edge_vec(k);
                if !(e.y.is_zero() && e.x.is_positive()) {
                    continue;
                }
                if a.y == seg.y && a.x == seg.x_lo && (a.x.clone() + e.x.clone()) == seg.x_hi {
                    let (p2, j) = surf.partner_of(p, k);
                    let poly2 = &surf.polygons[p2];
                    let left = poly2.vertex((j + 1) % poly2.len());
                    by_poly[p2].push(LevelPiece {
                        y: left.y.clone(),
                        x_lo: left.x.clone(),
                        x_hi: left.x.clone() + e.x.clone(),
                        conn: ci,
                        off_lo: QElem::zero(),
                    });
                    break;
                }
            }
        }
        SegmentRegistry { by_poly }
    }
}

#[allow(clippy::large_enum_variant)]
enum ProbeResult {
    Hit { conn: usize, offset: QElem, climbed: QElem },
    /// The probe ran exactly into a polygon vertex; retry at another offset.
    HitVertex,
}

/// Climb vertically from (x, y) in polygon `p` until the next level piece.
fn vertical_probe(
    surf: &Surface,
    registry: &SegmentRegistry,
    mut p: usize,
    x: &QElem,
    y: &QElem,
) -> ProbeResult {
    let mut cx = x.clone();
    let mut cy = y.clone();
    let mut climbed = QElem::zero();
    loop {
        let poly = &surf.polygons[p];
        let n = poly.len();
        // Vertex strike means the offset is unusable.
        for k in 0..n {
            let v = poly.vertex(k);
            if v.x == cx && v.y.cmp_exact(&cy) == std::cmp::Ordering::Greater {
                // Only fatal if it is the first contact; conservatively retry.
                return ProbeResult::HitVertex;
            }
        }
        // Nearest level piece in this polygon.
        let mut best_level: Option<(QElem, usize, QElem)> = None; // (y, conn, offset)
        for piece in &registry.by_poly[p] {
            if piece.y.cmp_exact(&cy) != std::cmp::Ordering::Greater {
                continue;
            }
            let in_range = cx.cmp_exact(&piece.x_lo) != std::cmp::Ordering::Less
                && piece.x_hi.cmp_exact(&cx) != std::cmp::Ordering::Less;
            if !in_range {
                continue;
            }
            let better = match &best_level {
                None => true,
                Some((by, _, _)) => piece.y.cmp_exact(by) == std::cmp::Ordering::Less,
            };
            if better {
                let off = piece.off_lo.clone() + (cx.clone() - piece.x_lo.clone());
                best_level = Some((piece.y.clone(), piece.conn, off));
            }
        }
        // Nearest non-horizontal edge crossing.
        let mut best_edge: Option<(QElem, usize, QElem)> = None; // (y, edge, t)
        for k in 0..n {
            let a = poly.vertex(k);
            let b = poly.vertex((k + 1) % n);
            let sa = (a.x.clone() - cx.clone()).sign();
            let sb = (b.x.clone() - cx.clone()).sign();
            if sa * sb < 0 {
                let t = (cx.clone() - a.x.clone()) / (b.x.clone() - a.x.clone());
                let yc = a.y.clone() + (b.y.clone() - a.y.clone()) * t.clone();
                if yc.cmp_exact(&cy) == std::cmp::Ordering::Greater {
                    let better = match &best_edge {
                        None => true,
                        Some((by, _, _)) => yc.cmp_exact(by) == std::cmp::Ordering::Less,
                    };
                    if better {
                        best_edge = Some((yc, k, t));
                    }
                }
            }
        }
        match (best_level, best_edge) {
            (Some((ly, conn, off)), Some((ey, _, _)))
                if ly.cmp_exact(&ey) != std::cmp::Ordering::Greater =>
            {
                return ProbeResult::Hit { conn, offset: off, climbed: climbed + (ly - cy) };
            }
            (Some((ly, conn, off)), None) => {
                return ProbeResult::Hit { conn, offset: off, climbed: climbed + (ly - cy) };
            }
            (_, Some((ey, k, _t))) => {
                let (p2, j) = surf.partner_of(p, k);
                let shift = surf.polygons[p2].vertex((j + 1) % surf.polygons[p2].len()).clone()
                    - surf.polygons[p].vertex(k).clone();
                climbed = climbed + (ey.clone() - cy.clone());
                cx = cx + shift.x;
                cy = ey + shift.y;
                p = p2;
            }
            (None, None) => panic!("vertical probe escaped the surface"),
        }
    }
}
