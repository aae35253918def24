//! Cylinder machinery: canonical builders for two- and three-cylinder
//! surfaces, exact cylinder decomposition in a given direction, and twist
//! measurement.
//!
//! The builders present each cylinder as a sheared parallelogram: width w
//! along the base, side vector (t, h). With the crate's fixed gluing
//! combinatorics this pins the twist convention exactly; decomposing a built
//! surface in the horizontal direction and measuring twists against the
//! vertical returns the input parameters unchanged, and the invariant
//! identities J_xx = 2·(w₁∧t₁ + w₂∧t₂ + w₁∧w₂), J_xy = 2·(w₁⊗h₁ + w₂⊗h₂)
//! hold for every two-cylinder build (with s, τ in place of h, t for the
//! three-cylinder family).

mod trace;

use crate::qfield::{FieldError, QElem, Rat};
use crate::surface::{Mat2Q, Polygon, Surface, SurfaceError, Vec2Q};
use std::collections::BTreeMap;
use thiserror::Error;

pub(crate) use trace::RawDecomposition;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CylError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("twist direction is parallel to the cylinder direction")]
    ParallelDirections,
    #[error("cylinder widths must satisfy w1 < w2")]
    WidthOrder,
    #[error("widths and heights must be positive")]
    NonPositive,
    #[error("twists must satisfy 0 ≤ t < w")]
    TwistRange,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Width, height and twist of one cylinder. The twist is measured against
/// the decomposition's twist direction and reduced into [0, width).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CylinderData {
    pub width: QElem,
    pub height: QElem,
    pub twist: QElem,
}

/// Derived three-cylinder quantities: with the wide cylinder labeled 3,
/// sᵢ = hᵢ + h₃ and τᵢ = tᵢ + t₃. The three-cylinder equations are stated
/// in these variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct H11Derived {
    pub s1: QElem,
    pub s2: QElem,
    pub tau1: QElem,
    pub tau2: QElem,
}

impl H11Derived {
    /// Combine two narrow cylinders with the wide one.
    pub fn new(c1: &CylinderData, c2: &CylinderData, wide: &CylinderData) -> Self {
        H11Derived {
            s1: c1.height.clone() + wide.height.clone(),
            s2: c2.height.clone() + wide.height.clone(),
            tau1: c1.twist.clone() + wide.twist.clone(),
            tau2: c2.twist.clone() + wide.twist.clone(),
        }
    }
}

/// Which combinatorial diagram the decomposition matched. The slot order of
/// `cylinders` is fixed per pattern.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecompPattern {
    /// One cylinder; anchors at the leftmost cone points.
    Single,
    /// The two-cylinder diagram: slot 0 is the narrow cylinder.
    TwoCylinder,
    /// The three-cylinder diagram: slots 0, 1 are the narrow cylinders
    /// (ordered by width, then height), slot 2 the wide one.
    ThreeCylinder,
    /// Unrecognized diagram; anchors fall back to leftmost cone points.
    Other,
}

/// A completely periodic direction realized as cylinders.
#[derive(Clone, Debug)]
pub struct CylinderDecomposition {
    pub direction: Vec2Q,
    /// Determinant-one matrix sending `direction` to the horizontal.
    pub normalizer: Mat2Q,
    /// Pullback of the vertical: the direction twists are measured against.
    pub twist_direction: Vec2Q,
    pub cylinders: Vec<CylinderData>,
    pub pattern: DecompPattern,
    /// Height of each cylinder's bottom circle in the normalized chart,
    /// aligned with `cylinders`; used for rendering.
    levels: Vec<QElem>,
}

impl CylinderDecomposition {
    /// Bottom-circle level of each cylinder in the normalized chart.
    pub fn bottom_levels(&self) -> &[QElem] {
        &self.levels
    }
}

impl CylinderDecomposition {
    /// Sum of width × height over all cylinders; equals the area of the
    /// normalized surface.
    pub fn total_area(&self) -> QElem {
        self.cylinders.iter().fold(QElem::zero(), |acc, c| {
            acc + c.width.clone() * c.height.clone()
        })
    }
}

/// Result of a bounded decomposition attempt.
#[derive(Clone, Debug)]
#[non_exhaustive]
#[allow(clippy::large_enum_variant)]
pub enum Decomposition {
    Periodic(CylinderDecomposition),
    /// A separatrix exceeded the cap before closing up; nothing is decided.
    Inconclusive { traced: QElem, cap: QElem },
    /// Reserved: an exact witness that the direction is not periodic. The
    /// current tracer never certifies this and reports `Inconclusive`
    /// instead.
    NotPeriodic { witness: Vec2Q },
}

fn require_positive(xs: &[&QElem]) -> Result<(), CylError> {
    for x in xs {
        if x.sign() <= 0 {
            return Err(CylError::NonPositive);
        }
    }
    Ok(())
}

fn require_twist(t: &QElem, w: &QElem) -> Result<(), CylError> {
    if t.sign() < 0 || (w.clone() - t.clone()).sign() <= 0 {
        return Err(CylError::TwistRange);
    }
    Ok(())
}

fn vec2(x: QElem, y: QElem) -> Vec2Q {
    Vec2Q::new(x, y)
}

/// Build the canonical two-cylinder surface with a single cone point of
/// angle 6π: a narrow cylinder (w₁, h₁, t₁) above a wide one (w₂, h₂, t₂),
/// both presented as sheared parallelograms. Returns the surface and a
/// symplectic homology basis as period vectors.
///
/// The postcondition is verified on every call: decomposing horizontally and
/// measuring twists against the vertical returns exactly the inputs.
pub fn build_h2(
    w1: &QElem,
    w2: &QElem,
    h1: &QElem,
    h2: &QElem,
    t1: &QElem,
    t2: &QElem,
) -> Result<(Surface, Vec<(Vec2Q, Vec2Q)>), CylError> {
    require_positive(&[w1, w2, h1, h2])?;
    if (w2.clone() - w1.clone()).sign() <= 0 {
        return Err(CylError::WidthOrder);
    }
    require_twist(t1, w1)?;
    require_twist(t2, w2)?;
    let d = join_field(&[w1, w2, h1, h2, t1, t2])?;

    let zero = QElem::zero;
    // Wide cylinder, with marked points splitting its bottom edge at w1 and
    // its top edge one narrow-width before the right corner.
    let q2 = Polygon::new(vec![
        vec2(zero(), zero()),
        vec2(w1.clone(), zero()),
        vec2(w2.clone(), zero()),
        vec2(w2.clone() + t2.clone(), h2.clone()),
        vec2(t2.clone() + w2.clone() - w1.clone(), h2.clone()),
        vec2(t2.clone(), h2.clone()),
    ]);
    let q1 = Polygon::new(vec![
        vec2(zero(), h2.clone()),
        vec2(w1.clone(), h2.clone()),
        vec2(w1.clone() + t1.clone(), h2.clone() + h1.clone()),
        vec2(t1.clone(), h2.clone() + h1.clone()),
    ]);
    let gluings = vec![
        ((1, 1), (1, 3)), // narrow sides
        ((0, 2), (0, 5)), // wide sides
        ((1, 0), (0, 3)), // narrow bottom ↔ wide top, right arc
        ((1, 2), (0, 0)), // narrow top ↔ wide bottom, left arc
        ((0, 4), (0, 1)), // wide top, left arc ↔ wide bottom, right arc
    ];
    let surface = Surface::new(d, vec![q2, q1], gluings);
    let info = surface.validate()?;
    debug_assert!(info.is_h2(), "builder output must lie in the 6π stratum");

    verify_build(
        &surface,
        &[
            CylinderData { width: w1.clone(), height: h1.clone(), twist: t1.clone() },
            CylinderData { width: w2.clone(), height: h2.clone(), twist: t2.clone() },
        ],
        DecompPattern::TwoCylinder,
    )?;

    let basis = vec![
        (
            vec2(w1.clone(), zero()),
            vec2(t1.clone() + w2.clone(), h1.clone()),
        ),
        (vec2(w2.clone(), zero()), vec2(t2.clone(), h2.clone())),
    ];
    Ok((surface, basis))
}

/// Build the canonical three-cylinder surface with two cone points of angle
/// 4π: narrow cylinders (w₁, h₁, t₁) and (w₂, h₂, t₂) side by side on top of
/// a wide cylinder of width w₃ = w₁ + w₂ with data (h₃, t₃).
#[allow(clippy::too_many_arguments)]
pub fn build_h11(
    w1: &QElem,
    w2: &QElem,
    h1: &QElem,
    h2: &QElem,
    h3: &QElem,
    t1: &QElem,
    t2: &QElem,
    t3: &QElem,
) -> Result<(Surface, Vec<(Vec2Q, Vec2Q)>), CylError> {
    require_positive(&[w1, w2, h1, h2, h3])?;
    let w3 = w1.clone() + w2.clone();
    require_twist(t1, w1)?;
    require_twist(t2, w2)?;
    require_twist(t3, &w3)?;
    let d = join_field(&[w1, w2, h1, h2, h3, t1, t2, t3])?;

    let zero = QElem::zero;
    let q3 = Polygon::new(vec![
        vec2(zero(), zero()),
        vec2(w1.clone(), zero()),
        vec2(w3.clone(), zero()),
        vec2(w3.clone() + t3.clone(), h3.clone()),
        vec2(t3.clone() + w2.clone(), h3.clone()),
        vec2(t3.clone(), h3.clone()),
    ]);
    let q2 = Polygon::new(vec![
        vec2(t3.clone(), h3.clone()),
        vec2(t3.clone() + w2.clone(), h3.clone()),
        vec2(t3.clone() + w2.clone() + t2.clone(), h3.clone() + h2.clone()),
        vec2(t3.clone() + t2.clone(), h3.clone() + h2.clone()),
    ]);
    let q1 = Polygon::new(vec![
        vec2(t3.clone() + w2.clone(), h3.clone()),
        vec2(t3.clone() + w3.clone(), h3.clone()),
        vec2(t3.clone() + w3.clone() + t1.clone(), h3.clone() + h1.clone()),
        vec2(t3.clone() + w2.clone() + t1.clone(), h3.clone() + h1.clone()),
    ]);
    let gluings = vec![
        ((0, 2), (0, 5)), // wide sides
        ((1, 1), (1, 3)), // C2 sides
        ((2, 1), (2, 3)), // C1 sides
        ((1, 0), (0, 4)), // C2 base ↔ wide top, left arc
        ((2, 0), (0, 3)), // C1 base ↔ wide top, right arc
        ((2, 2), (0, 0)), // C1 top ↔ wide bottom, left arc
        ((1, 2), (0, 1)), // C2 top ↔ wide bottom, right arc
    ];
    let surface = Surface::new(d, vec![q3, q2, q1], gluings);
    let info = surface.validate()?;
    debug_assert!(info.is_h11(), "builder output must have two simple zeros");

    verify_build_h11(&surface, w1, w2, h1, h2, h3, t1, t2, t3, &w3)?;

    let s1 = h1.clone() + h3.clone();
    let s2 = h2.clone() + h3.clone();
    let tau1 = t1.clone() + t3.clone();
    let tau2 = t2.clone() + t3.clone();
    let basis = vec![
        (vec2(w1.clone(), zero()), vec2(tau1 + w2.clone(), s1)),
        (vec2(w2.clone(), zero()), vec2(tau2, s2)),
    ];
    Ok((surface, basis))
}

fn join_field(xs: &[&QElem]) -> Result<u64, CylError> {
    let mut d = 0u64;
    for x in xs {
        let xd = x.field_d();
        if xd == 0 {
            continue;
        }
        if d == 0 {
            d = xd;
        } else if d != xd {
            return Err(CylError::Field(FieldError::MixedFields(d, xd)));
        }
    }
    Ok(d)
}

fn verify_build(
    surface: &Surface,
    expected: &[CylinderData],
    pattern: DecompPattern,
) -> Result<(), CylError> {
    let horizontal = vec2(QElem::one(), QElem::zero());
    let dec = match decompose(surface, &horizontal, None)? {
        Decomposition::Periodic(dec) => dec,
        _ => unreachable!("builder surfaces decompose horizontally"),
    };
    assert_eq!(dec.pattern, pattern, "builder diagram mismatch");
    assert_eq!(dec.cylinders, expected, "builder twist round-trip failed");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify_build_h11(
    surface: &Surface,
    w1: &QElem,
    w2: &QElem,
    h1: &QElem,
    h2: &QElem,
    h3: &QElem,
    t1: &QElem,
    t2: &QElem,
    t3: &QElem,
    w3: &QElem,
) -> Result<(), CylError> {
    let horizontal = vec2(QElem::one(), QElem::zero());
    let dec = match decompose(surface, &horizontal, None)? {
        Decomposition::Periodic(dec) => dec,
        _ => unreachable!("builder surfaces decompose horizontally"),
    };
    assert_eq!(dec.pattern, DecompPattern::ThreeCylinder);
    let cyl = |w: &QElem, h: &QElem, t: &QElem| CylinderData {
        width: w.clone(),
        height: h.clone(),
        twist: t.clone(),
    };
    // The two narrow cylinders are interchangeable as labels; swapping them
    // re-anchors the wide cylinder's twist by w2 − w1.
    let l1 = vec![cyl(w1, h1, t1), cyl(w2, h2, t2), cyl(w3, h3, t3)];
    let t3_swapped = (t3.clone() + w2.clone() - w1.clone()).rem_euclid(w3);
    let l2 = vec![cyl(w2, h2, t2), cyl(w1, h1, t1), cyl(w3, h3, &t3_swapped)];
    assert!(
        dec.cylinders == l1 || dec.cylinders == l2,
        "three-cylinder twist round-trip failed: got {:?}",
        dec.cylinders
    );
    Ok(())
}

/// The determinant-one normalizer sending `v` to the horizontal: a shear for
/// non-vertical v, a quarter rotation for vertical v.
pub fn direction_normalizer(v: &Vec2Q) -> Result<Mat2Q, CylError> {
    if v.is_zero() {
        return Err(CylError::ZeroDirection);
    }
    if v.x.is_zero() {
        return Ok(Mat2Q::new(
            QElem::zero(),
            QElem::one(),
            QElem::from_int(-1),
            QElem::zero(),
        ));
    }
    let q = v.y.clone() / v.x.clone();
    Ok(crate::jinvariant::shear_killing_slope(&q))
}

/// Default tracing cap: 100 × the total horizontal extent of all edges of
/// the normalized surface. Desk-scale periodic directions close far below
/// this.
pub fn default_cap(normalized: &Surface) -> QElem {
    let mut acc = QElem::zero();
    for (pi, p) in normalized.polygons.iter().enumerate() {
        for e in 0..p.len() {
            let v = normalized.polygons[pi].edge_vec(e);
            let ax = if v.x.is_negative() { -v.x } else { v.x };
            acc = acc + ax;
        }
    }
    acc * &Rat::from_integer(100.into())
}

/// Decompose `s` in direction `v` by exact separatrix tracing, giving up
/// once any separatrix exceeds `cap` (in horizontal extent of the
/// normalized chart; `None` uses [`default_cap`]).
pub fn decompose(
    s: &Surface,
    v: &Vec2Q,
    cap: Option<&QElem>,
) -> Result<Decomposition, CylError> {
    let g = direction_normalizer(v)?;
    let normalized = s.apply_gl2(&g)?;
    let analysis = normalized.analyze()?;
    let cap = match cap {
        Some(c) => c.clone(),
        None => default_cap(&normalized),
    };
    let raw = match trace::trace_horizontal(&normalized, &analysis, &cap) {
        trace::TraceResult::Periodic(raw) => raw,
        trace::TraceResult::Inconclusive { traced } => {
            return Ok(Decomposition::Inconclusive { traced, cap })
        }
    };
    let (cylinders, pattern, slots) = extract_cylinders(&raw);
    let levels = slots
        .iter()
        .map(|&i| raw.conns[raw.cylinders[i].bottom.conns[0]].segments[0].y.clone())
        .collect();
    let twist_direction = g
        .inverse()
        .expect("normalizer is unimodular")
        .apply(&vec2(QElem::zero(), QElem::one()));
    Ok(Decomposition::Periodic(CylinderDecomposition {
        direction: v.clone(),
        normalizer: g,
        twist_direction,
        cylinders,
        pattern,
        levels,
    }))
}

/// Label cylinders, pick canonical anchors, and reduce the anchor offsets to
/// twists in [0, width). Also returns the raw cylinder index of each slot.
fn extract_cylinders(raw: &RawDecomposition) -> (Vec<CylinderData>, DecompPattern, Vec<usize>) {
    let n = raw.cylinders.len();
    let widths: Vec<&QElem> = raw.cylinders.iter().map(|c| &c.width).collect();

    let make = |idx: usize, anchor: QElem| -> CylinderData {
        let c = &raw.cylinders[idx];
        CylinderData {
            width: c.width.clone(),
            height: c.height.clone(),
            twist: anchor.rem_euclid(&c.width),
        }
    };
    // Anchors for a cylinder whose circles each carry a single cone point.
    let simple_anchor = |idx: usize| -> Option<QElem> {
        let c = &raw.cylinders[idx];
        if c.bottom.conns.len() != 1 || c.top.conns.len() != 1 {
            return None;
        }
        Some(c.top.pos[0].clone() + c.align.clone())
    };
    // Anchors for a wide cylinder against a designated narrow neighbor:
    // start of the bottom arc lying above that neighbor, end of the top arc
    // lying below it.
    let wide_anchor = |idx: usize, narrow: usize| -> Option<QElem> {
        let c = &raw.cylinders[idx];
        let mut beta = None;
        for (k, &conn) in c.bottom.conns.iter().enumerate() {
            if raw.below[conn] == narrow {
                if beta.is_some() {
                    return None;
                }
                beta = Some(c.bottom.pos[k].clone());
            }
        }
        let mut tau = None;
        for (k, &conn) in c.top.conns.iter().enumerate() {
            if raw.above[conn] == narrow {
                if tau.is_some() {
                    return None;
                }
                tau = Some(c.top.pos[k].clone() + c.top.conn_len(k) + c.align.clone());
            }
        }
        Some(tau? - beta?)
    };
    let fallback = |idx: usize| -> QElem {
        let c = &raw.cylinders[idx];
        // Leftmost cone on the top circle in the chart anchored at the
        // bottom circle's leftmost cone (position 0).
        let mut best: Option<QElem> = None;
        for pos in &c.top.pos {
            let x = (pos.clone() + c.align.clone()).rem_euclid(&c.width);
            let better = match &best {
                None => true,
                Some(b) => x.cmp_exact(b) == std::cmp::Ordering::Less,
            };
            if better {
                best = Some(x);
            }
        }
        best.expect("top circle has a cone point")
    };

    if n == 2 {
        let (narrow, wide) = if widths[0].cmp_exact(widths[1]) == std::cmp::Ordering::Less {
            (0, 1)
        } else if widths[1].cmp_exact(widths[0]) == std::cmp::Ordering::Less {
            (1, 0)
        } else {
            return other_pattern(raw, &make, &fallback);
        };
        if let (Some(na), Some(wa)) = (simple_anchor(narrow), wide_anchor(wide, narrow)) {
            return (
                vec![make(narrow, na), make(wide, wa)],
                DecompPattern::TwoCylinder,
                vec![narrow, wide],
            );
        }
        return other_pattern(raw, &make, &fallback);
    }
    if n == 3 {
        // The wide cylinder must be strictly widest.
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| {
            widths[a]
                .cmp_exact(widths[b])
                .then_with(|| raw.cylinders[a].height.cmp_exact(&raw.cylinders[b].height))
                .then(a.cmp(&b))
        });
        let (n1, n2, wide) = (order[0], order[1], order[2]);
        let strictly_widest = widths[n2].cmp_exact(widths[wide]) == std::cmp::Ordering::Less;
        if strictly_widest {
            if let (Some(a1), Some(a2), Some(aw)) =
                (simple_anchor(n1), simple_anchor(n2), wide_anchor(wide, n1))
            {
                return (
                    vec![make(n1, a1), make(n2, a2), make(wide, aw)],
                    DecompPattern::ThreeCylinder,
                    vec![n1, n2, wide],
                );
            }
        }
        return other_pattern(raw, &make, &fallback);
    }
    if n == 1 {
        return (vec![make(0, fallback(0))], DecompPattern::Single, vec![0]);
    }
    other_pattern(raw, &make, &fallback)
}

fn other_pattern(
    raw: &RawDecomposition,
    make: &dyn Fn(usize, QElem) -> CylinderData,
    fallback: &dyn Fn(usize) -> QElem,
) -> (Vec<CylinderData>, DecompPattern, Vec<usize>) {
    let mut order: Vec<usize> = (0..raw.cylinders.len()).collect();
    order.sort_by(|&a, &b| {
        raw.cylinders[a]
            .width
            .cmp_exact(&raw.cylinders[b].width)
            .then_with(|| raw.cylinders[a].height.cmp_exact(&raw.cylinders[b].height))
            .then(a.cmp(&b))
    });
    let cylinders = order.iter().map(|&i| make(i, fallback(i))).collect();
    (cylinders, DecompPattern::Other, order)
}

/// Twists of every cylinder against an arbitrary transverse direction `w`
/// (given in the coordinates of the original surface).
///
/// In the normalized chart, let w̃ be the image of w oriented to cross
/// upward and w′ the multiple of w̃ whose vertical extent is the cylinder
/// height. The twist is the horizontal displacement of w′ between the
/// canonical bottom and top markings, reduced mod width — for acute angles
/// this is the projection of w′ onto the core direction mod width, for
/// obtuse ones the width minus the projection onto the reversed core.
pub fn measure_twists(
    dec: &CylinderDecomposition,
    w: &Vec2Q,
) -> Result<Vec<QElem>, CylError> {
    if w.is_zero() {
        return Err(CylError::ZeroDirection);
    }
    let mut wt = dec.normalizer.apply(w);
    if wt.y.is_zero() {
        return Err(CylError::ParallelDirections);
    }
    if wt.y.is_negative() {
        wt = -wt;
    }
    let mut out = Vec::new();
    for c in &dec.cylinders {
        let crossing_x = wt.x.clone() * c.height.clone() / wt.y.clone();
        out.push((c.twist.clone() + crossing_x).rem_euclid(&c.width));
    }
    Ok(out)
}

/// All homological directions with coefficients bounded by `coeff_bound`:
/// projective classes of nonzero integer combinations of the holonomy
/// generators, each reduced to the canonical representative (1, q) or (0, 1)
/// and returned in lexicographic coordinate order.
pub fn homological_directions(
    s: &Surface,
    coeff_bound: i64,
) -> Result<Vec<Vec2Q>, SurfaceError> {
    let gens = s.holonomy_generators()?;
    let mut found: BTreeMap<(Rat, Rat, Rat, Rat), Vec2Q> = BTreeMap::new();
    if coeff_bound <= 0 || gens.is_empty() {
        return Ok(Vec::new());
    }
    let k = gens.len();
    let mut counters = vec![-coeff_bound; k];
    'outer: loop {
        let mut v = Vec2Q::zero();
        for (i, &c) in counters.iter().enumerate() {
            if c != 0 {
                v = v + gens[i].scale(&QElem::from_int(c));
            }
        }
        if !v.is_zero() {
            let canon = canonical_direction(&v);
            let key = (
                canon.x.rational_part().clone(),
                canon.x.irrational_part().clone(),
                canon.y.rational_part().clone(),
                canon.y.irrational_part().clone(),
            );
            found.entry(key).or_insert(canon);
        }
        // Odometer increment.
        for digit in counters.iter_mut() {
            *digit += 1;
            if *digit <= coeff_bound {
                continue 'outer;
            }
            *digit = -coeff_bound;
        }
        break;
    }
    Ok(found.into_values().collect())
}

/// Canonical projective representative of a nonzero vector: (1, y/x) when
/// x ≠ 0, otherwise (0, 1).
pub fn canonical_direction(v: &Vec2Q) -> Vec2Q {
    if v.x.is_zero() {
        Vec2Q::new(QElem::zero(), QElem::one())
    } else {
        Vec2Q::new(QElem::one(), v.y.clone() / v.x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jinvariant::{j_from_homology, j_surface, j_vv};
    use crate::qfield::QElem;
    use crate::surface::presets::unit_torus;

    fn qi(n: i64) -> QElem {
        QElem::from_int(n)
    }

    fn phi() -> QElem {
        QElem::from_triple(1, 1, 2, 5)
    }

    /// The golden-L data: build_h2(1, φ, 1, φ, (3−√5)/2, 0).
    pub(crate) fn golden_l() -> (Surface, Vec<(Vec2Q, Vec2Q)>) {
        build_h2(
            &qi(1),
            &phi(),
            &qi(1),
            &phi(),
            &QElem::from_triple(3, -1, 2, 5),
            &QElem::zero(),
        )
        .unwrap()
    }

    #[test]
    fn rational_l_build_round_trips() {
        let (s, _) = build_h2(&qi(1), &qi(2), &qi(1), &qi(1), &qi(0), &qi(0)).unwrap();
        let info = s.validate().unwrap();
        assert!(info.is_h2());
    }

    #[test]
    fn golden_l_build_and_decompose() {
        let (s, basis) = golden_l();
        assert!(s.validate().unwrap().is_h2());
        // Horizontal decomposition returns the build data: cylinders (1,1)
        // and (φ,φ) with twists ((3−√5)/2, 0).
        match decompose(&s, &Vec2Q::new(qi(1), qi(0)), None).unwrap() {
            Decomposition::Periodic(dec) => {
                assert_eq!(dec.pattern, DecompPattern::TwoCylinder);
                assert_eq!(dec.cylinders[0].width, qi(1));
                assert_eq!(dec.cylinders[0].height, qi(1));
                assert_eq!(dec.cylinders[0].twist, QElem::from_triple(3, -1, 2, 5));
                assert_eq!(dec.cylinders[1].width, phi());
                assert_eq!(dec.cylinders[1].height, phi());
                assert_eq!(dec.cylinders[1].twist, QElem::zero());
                assert_eq!(dec.total_area(), s.area());
            }
            other => panic!("horizontal direction must be periodic: {:?}", other),
        }
        // Cross-formula: the emitted basis reproduces the polygon J.
        assert_eq!(j_from_homology(&basis), j_surface(&s));
    }

    #[test]
    fn builder_rejects_bad_input() {
        assert_eq!(
            build_h2(&qi(2), &qi(1), &qi(1), &qi(1), &qi(0), &qi(0)).unwrap_err(),
            CylError::WidthOrder
        );
        assert_eq!(
            build_h2(&qi(1), &qi(2), &qi(0), &qi(1), &qi(0), &qi(0)).unwrap_err(),
            CylError::NonPositive
        );
        assert_eq!(
            build_h2(&qi(1), &qi(2), &qi(1), &qi(1), &qi(1), &qi(0)).unwrap_err(),
            CylError::TwistRange
        );
        assert_eq!(
            build_h11(&qi(1), &qi(1), &qi(1), &qi(1), &qi(0), &qi(0), &qi(0), &qi(0))
                .unwrap_err(),
            CylError::NonPositive
        );
    }

    #[test]
    fn h11_square_fixture() {
        let (s, basis) =
            build_h11(&qi(1), &qi(1), &qi(1), &qi(1), &qi(1), &qi(0), &qi(0), &qi(0)).unwrap();
        let info = s.validate().unwrap();
        assert_eq!(info.genus, 2);
        assert_eq!(info.zero_orders, vec![1, 1]);
        assert_eq!(j_from_homology(&basis), j_surface(&s));
    }

    #[test]
    fn h11_d2_fixture() {
        // w = (1, √2), heights (√2 − 1/2, 1/2, 1/2), twists (2 − √2, 0, 0).
        let (s, basis) = build_h11(
            &qi(1),
            &QElem::sqrt_d(2),
            &QElem::from_triple(-1, 2, 2, 2),
            &QElem::from_triple(1, 0, 2, 2),
            &QElem::from_triple(1, 0, 2, 2),
            &QElem::from_triple(2, -1, 1, 2),
            &QElem::zero(),
            &QElem::zero(),
        )
        .unwrap();
        assert!(s.validate().unwrap().is_h11());
        assert_eq!(j_from_homology(&basis), j_surface(&s));
        // The horizontal direction is periodic, so J_yy vanishes.
        assert!(j_surface(&s).jyy.is_zero());
    }

    #[test]
    fn torus_diagonal_direction() {
        let s = unit_torus();
        match decompose(&s, &Vec2Q::new(qi(1), qi(1)), None).unwrap() {
            Decomposition::Periodic(dec) => {
                assert_eq!(dec.cylinders.len(), 1);
                assert_eq!(dec.cylinders[0].width, qi(1));
                assert_eq!(dec.cylinders[0].height, qi(1));
                assert_eq!(dec.pattern, DecompPattern::Single);
            }
            other => panic!("diagonal on the torus is periodic: {:?}", other),
        }
    }

    #[test]
    fn golden_l_vertical_is_periodic() {
        let (s, _) = golden_l();
        match decompose(&s, &Vec2Q::new(qi(0), qi(1)), None).unwrap() {
            Decomposition::Periodic(dec) => {
                assert_eq!(dec.cylinders.len(), 2);
                assert_eq!(dec.total_area(), s.area());
            }
            other => panic!("vertical on the golden L is periodic: {:?}", other),
        }
    }

    #[test]
    fn periodic_directions_have_vanishing_jvv() {
        let (s, _) = golden_l();
        for v in [
            Vec2Q::new(qi(1), qi(0)),
            Vec2Q::new(qi(0), qi(1)),
            Vec2Q::new(qi(1), qi(1)),
        ] {
            if let Decomposition::Periodic(_) = decompose(&s, &v, None).unwrap() {
                assert!(j_vv(&s, &v).unwrap().is_zero(), "J_vv ≠ 0 in {:?}", v);
            }
        }
    }

    #[test]
    fn measured_twists_obtuse_case() {
        let s = unit_torus();
        let dec = match decompose(&s, &Vec2Q::new(qi(1), qi(0)), None).unwrap() {
            Decomposition::Periodic(dec) => dec,
            _ => unreachable!(),
        };
        // Vertical twist is 0 for the square torus.
        assert_eq!(measure_twists(&dec, &Vec2Q::new(qi(0), qi(1))).unwrap(), vec![qi(0)]);
        // Obtuse: w = (−1, 1) gives width − projection, i.e. 0 mod 1.
        assert_eq!(
            measure_twists(&dec, &Vec2Q::new(qi(-1), qi(1))).unwrap(),
            vec![qi(0)]
        );
        assert_eq!(
            measure_twists(&dec, &Vec2Q::new(qi(1), qi(0))).unwrap_err(),
            CylError::ParallelDirections
        );
    }

    #[test]
    fn homological_directions_torus() {
        let s = unit_torus();
        let dirs = homological_directions(&s, 1).unwrap();
        let expect: Vec<Vec2Q> = vec![
            Vec2Q::new(qi(0), qi(1)),
            Vec2Q::new(qi(1), qi(-1)),
            Vec2Q::new(qi(1), qi(0)),
            Vec2Q::new(qi(1), qi(1)),
        ];
        assert_eq!(dirs.len(), 4);
        for e in expect {
            assert!(dirs.contains(&e), "missing {:?}", e);
        }
        assert!(homological_directions(&s, 0).unwrap().is_empty());
    }

    #[test]
    fn area_conservation_under_gl2() {
        let (s, _) = golden_l();
        // A determinant-one integer matrix: decomposing the image in the
        // image direction matches widths/heights as a multiset after
        // accounting for the chart rescaling x ↦ (gv)_x.
        let g = Mat2Q::new(qi(1), qi(1), qi(1), qi(2));
        let gs = s.apply_gl2(&g).unwrap();
        let gv = g.apply(&Vec2Q::new(qi(1), qi(0)));
        let dec = match decompose(&gs, &gv, None).unwrap() {
            Decomposition::Periodic(dec) => dec,
            other => panic!("image direction periodic: {:?}", other),
        };
        assert_eq!(dec.cylinders.len(), 2);
        assert_eq!(dec.total_area(), gs.area());

        let base = match decompose(&s, &Vec2Q::new(qi(1), qi(0)), None).unwrap() {
            Decomposition::Periodic(dec) => dec,
            _ => unreachable!(),
        };
        let scale = gv.x.clone();
        let inv = scale.inv().unwrap();
        let mut expect: Vec<(QElem, QElem)> = base
            .cylinders
            .iter()
            .map(|c| (c.width.clone() * scale.clone(), c.height.clone() * inv.clone()))
            .collect();
        let mut got: Vec<(QElem, QElem)> = dec
            .cylinders
            .iter()
            .map(|c| (c.width.clone(), c.height.clone()))
            .collect();
        let key = |(w, h): &(QElem, QElem)| {
            (
                w.rational_part().clone(),
                w.irrational_part().clone(),
                h.rational_part().clone(),
                h.irrational_part().clone(),
            )
        };
        expect.sort_by_key(key);
        got.sort_by_key(key);
        assert_eq!(expect, got);
    }

    #[test]
    fn marked_point_splits_cylinder() {
        // Subdivide the golden-L's wide-cylinder side gluing at mid-height:
        // the new vertex class is a regular marked point, and the tracer
        // stops there, splitting the wide cylinder into two stacked bands.
        let (s, _) = golden_l();
        let q2 = s.polygons[0].clone();
        let phi_half = phi() * &crate::qfield::Rat::new(1.into(), 2.into());
        let mut vs = q2.vertices.clone();
        vs.insert(3, Vec2Q::new(phi(), phi_half.clone()));
        vs.push(Vec2Q::new(QElem::zero(), phi_half));
        let q2_split = crate::surface::Polygon::new(vs);
        let polygons = vec![q2_split, s.polygons[1].clone()];
        // Old wide edges: 0,1 keep; 2 → 2,3; 3 → 4; 4 → 5; 5 → 6,7.
        let gluings = vec![
            ((1, 1), (1, 3)),
            ((0, 2), (0, 7)),
            ((0, 3), (0, 6)),
            ((1, 0), (0, 4)),
            ((1, 2), (0, 0)),
            ((0, 5), (0, 1)),
        ];
        let marked = Surface::new(s.d, polygons, gluings);
        let info = marked.validate().unwrap();
        assert_eq!(info.genus, 2);
        assert_eq!(info.zero_orders, vec![2]);
        match decompose(&marked, &Vec2Q::new(qi(1), qi(0)), None).unwrap() {
            Decomposition::Periodic(dec) => {
                assert_eq!(dec.cylinders.len(), 3);
                assert_eq!(dec.total_area(), marked.area());
                assert_eq!(dec.pattern, DecompPattern::Other);
            }
            other => panic!("marked surface still decomposes: {:?}", other),
        }
    }

    #[test]
    fn golden_l_bound_one_directions() {
        let (s, _) = golden_l();
        let dirs = homological_directions(&s, 1).unwrap();
        assert!(dirs.contains(&Vec2Q::new(qi(1), qi(0))));
        assert!(dirs.contains(&Vec2Q::new(qi(0), qi(1))));
    }

    #[test]
    fn values_are_shareable_between_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<QElem>();
        assert_send_sync::<crate::qfield::FieldDesc>();
        assert_send_sync::<Surface>();
        assert_send_sync::<CylinderDecomposition>();
    }
}
