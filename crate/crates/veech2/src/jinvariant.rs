//! The translation scissors invariant J and its projections.
//!
//! For a polygon with counterclockwise vertices v₁, …, vₙ the invariant is
//! the cyclic wedge sum v₁∧v₂ + ⋯ + vₙ∧v₁ in R² ∧_Q R², and for a surface it
//! is the sum over the cells of any polygon presentation. Three linear
//! projections make it computable in exact rational coordinates:
//!
//! * `J_xx((a,b)∧(c,d)) = a ∧ c` and `J_yy = b ∧ d`, valued in R ∧_Q R;
//! * `J_xy((a,b)∧(c,d)) = a ⊗ d − c ⊗ b`, valued in R ⊗_Q R.
//!
//! Directional forms reduce to these by applying a determinant-one matrix
//! that straightens the requested directions. Two facts carry the whole
//! classification story downstream: a completely periodic horizontal
//! direction forces `J_yy = 0`, and the two-cylinder equations are
//! equivalent to the vanishing of `J_xx` and to coefficient identities on
//! `J_xy`.

use crate::qfield::{QElem, Rat};
use crate::surface::{Mat2Q, Polygon, Surface, Vec2Q};
use crate::tensor::{tensor, wedge, TensorC4, WedgeQQ};
use std::ops::Add;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum JError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("directions must be linearly independent")]
    DependentDirections,
}

/// The six rational coordinates of J(S) for a surface over Q(√d).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JInvariant {
    pub jxx: WedgeQQ,
    pub jyy: WedgeQQ,
    pub jxy: TensorC4,
}

impl JInvariant {
    pub fn zero() -> Self {
        JInvariant {
            jxx: WedgeQQ::zero(),
            jyy: WedgeQQ::zero(),
            jxy: TensorC4::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.jxx.is_zero() && self.jyy.is_zero() && self.jxy.is_zero()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        JInvariant {
            jxx: self.jxx.scale(r),
            jyy: self.jyy.scale(r),
            jxy: self.jxy.scale(r),
        }
    }
}

impl Add for JInvariant {
    type Output = JInvariant;
    fn add(self, rhs: JInvariant) -> JInvariant {
        JInvariant {
            jxx: self.jxx + rhs.jxx,
            jyy: self.jyy + rhs.jyy,
            jxy: self.jxy + rhs.jxy,
        }
    }
}

/// The six coordinates of a single wedge u ∧ v of plane vectors.
pub fn wedge_projections(u: &Vec2Q, v: &Vec2Q) -> JInvariant {
    let jxx = wedge(&u.x, &v.x).expect("same field");
    let jyy = wedge(&u.y, &v.y).expect("same field");
    let jxy = tensor(&u.x, &v.y).expect("same field") - tensor(&v.x, &u.y).expect("same field");
    JInvariant { jxx, jyy, jxy }
}

/// J of one polygon: the cyclic wedge sum over its vertices.
pub fn j_polygon(p: &Polygon) -> JInvariant {
    let n = p.len();
    let mut acc = JInvariant::zero();
    for i in 0..n {
        acc = acc + wedge_projections(p.vertex(i), p.vertex(i + 1));
    }
    acc
}

/// J of a surface: the sum over its polygon cells. The value depends only on
/// the surface with its vertex classes as marked points, not on the
/// particular cell presentation.
pub fn j_surface(s: &Surface) -> JInvariant {
    let mut acc = JInvariant::zero();
    for p in &s.polygons {
        acc = acc + j_polygon(p);
    }
    acc
}

/// The auxiliary projection `J_yx((a,b)∧(c,d)) = b ⊗ c − d ⊗ a`, summed over
/// the same cyclic wedges as [`j_surface`].
pub fn j_yx(s: &Surface) -> TensorC4 {
    let mut acc = TensorC4::zero();
    for p in &s.polygons {
        let n = p.len();
        for i in 0..n {
            let u = p.vertex(i);
            let v = p.vertex(i + 1);
            let t = tensor(&u.y, &v.x).expect("same field")
                - tensor(&v.y, &u.x).expect("same field");
            acc = acc + t;
        }
    }
    acc
}

/// The determinant-one shear sending (1, q) to (1, 0).
pub(crate) fn shear_killing_slope(q: &QElem) -> Mat2Q {
    Mat2Q::new(QElem::one(), QElem::zero(), -q.clone(), QElem::one())
}

/// Directional form J_vv: for vertical v this is J_xx; otherwise normalize
/// v to (1, q), apply the shear with g(1, q) = (1, 0), and take J_yy(gS).
/// The zero/nonzero verdict does not depend on the choice of g.
pub fn j_vv(s: &Surface, v: &Vec2Q) -> Result<WedgeQQ, JError> {
    if v.is_zero() {
        return Err(JError::ZeroDirection);
    }
    if v.x.is_zero() {
        return Ok(j_surface(s).jxx);
    }
    let q = v.y.clone() / v.x.clone();
    let g = shear_killing_slope(&q);
    let gs = s.apply_gl2(&g).expect("shear is invertible");
    Ok(j_surface(&gs).jyy)
}

/// Directional form J_vw for linearly independent v, w: pick v′ = v/det(v,w)
/// and w′ = w, so det(v′, w′) = 1, let g = [v′ w′]⁻¹, and take J_xy(gS).
/// When v is vertical and w horizontal this is defined as J_yx(S) instead.
/// A different admissible (v′, w′) rescales all four coordinates by one
/// rational, so predicates on coordinate ratios are unaffected.
pub fn j_vw(s: &Surface, v: &Vec2Q, w: &Vec2Q) -> Result<TensorC4, JError> {
    j_vw_impl(s, v, w, false)
}

/// The alternate normalization v′ = v, w′ = w/det(v,w); exposed so tests can
/// confirm that coordinate-ratio predicates do not depend on the convention.
pub fn j_vw_alt(s: &Surface, v: &Vec2Q, w: &Vec2Q) -> Result<TensorC4, JError> {
    j_vw_impl(s, v, w, true)
}

fn j_vw_impl(s: &Surface, v: &Vec2Q, w: &Vec2Q, alt: bool) -> Result<TensorC4, JError> {
    if v.is_zero() || w.is_zero() {
        return Err(JError::ZeroDirection);
    }
    let det = v.cross(w);
    if det.is_zero() {
        return Err(JError::DependentDirections);
    }
    if v.x.is_zero() && w.y.is_zero() {
        return Ok(j_yx(s));
    }
    let inv = det.inv().expect("nonzero");
    let (vp, wp) = if alt {
        (v.clone(), w.scale(&inv))
    } else {
        (v.scale(&inv), w.clone())
    };
    // Columns (v′, w′) have determinant 1, so g = [v′ w′]⁻¹ ∈ SL(2, Q(√d)).
    let m = Mat2Q::new(vp.x.clone(), wp.x.clone(), vp.y.clone(), wp.y.clone());
    let g = m.inverse().expect("unimodular");
    let gs = s.apply_gl2(&g).expect("unimodular");
    Ok(j_surface(&gs).jxy)
}

/// The homology form of the invariant: J = 2 Σ p(aᵢ) ∧ p(bᵢ) over a
/// symplectic basis (aᵢ, bᵢ), given here by the period vectors.
pub fn j_from_homology(basis: &[(Vec2Q, Vec2Q)]) -> JInvariant {
    let mut acc = JInvariant::zero();
    for (a, b) in basis {
        acc = acc + wedge_projections(a, b);
    }
    acc.scale(&Rat::from_integer(2.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QElem;
    use crate::surface::presets::unit_torus;
    use crate::surface::{Polygon, Surface};
    use num_bigint::BigInt;

    fn v(x: i64, y: i64) -> Vec2Q {
        Vec2Q::new(QElem::from_int(x), QElem::from_int(y))
    }

    fn rat(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn c4(a: i64, b: i64, c: i64, d: i64) -> TensorC4 {
        TensorC4 { c1: rat(a), c2: rat(b), c3: rat(c), c4: rat(d) }
    }

    #[test]
    fn unit_square() {
        let p = Polygon::new(vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]);
        let j = j_polygon(&p);
        assert!(j.jxx.is_zero());
        assert!(j.jyy.is_zero());
        assert_eq!(j.jxy, c4(2, 0, 0, 0));
    }

    #[test]
    fn translation_invariance() {
        let p = Polygon::new(vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]);
        let t = Vec2Q::new(
            QElem::from_triple(3, -2, 7, 5),
            QElem::from_triple(1, 4, 3, 5),
        );
        let q = Polygon::new(p.vertices.iter().map(|u| u.clone() + t.clone()).collect());
        assert_eq!(j_polygon(&p), j_polygon(&q));
    }

    #[test]
    fn horizontal_parallelogram_kills_jyy() {
        // Sides (w, 0) and (t, h): all y-coordinates lie in {0, h}.
        let w = QElem::from_triple(2, 1, 1, 2);
        let t = QElem::from_triple(1, -1, 3, 2);
        let h = QElem::from_triple(1, 1, 2, 2);
        let p = Polygon::new(vec![
            Vec2Q::new(QElem::zero(), QElem::zero()),
            Vec2Q::new(w.clone(), QElem::zero()),
            Vec2Q::new(w + t.clone(), h.clone()),
            Vec2Q::new(t, h),
        ]);
        assert!(j_polygon(&p).jyy.is_zero());
    }

    #[test]
    fn sheared_parallelogram_jxx() {
        // Torus with periods (1,0), (τ, 1), τ = √2: J_xx = 2·(1∧√2).
        let tau = QElem::sqrt_d(2);
        let p = Polygon::new(vec![
            Vec2Q::new(QElem::zero(), QElem::zero()),
            Vec2Q::new(QElem::one(), QElem::zero()),
            Vec2Q::new(QElem::one() + tau.clone(), QElem::one()),
            Vec2Q::new(tau, QElem::one()),
        ]);
        let j = j_polygon(&p);
        assert_eq!(j.jxx.c, rat(2));
    }

    #[test]
    fn torus_value_and_diagonal_split() {
        let s = unit_torus();
        let j = j_surface(&s);
        assert!(j.jxx.is_zero() && j.jyy.is_zero());
        assert_eq!(j.jxy, c4(2, 0, 0, 0));

        // Same torus as two triangles along the main diagonal.
        let t1 = Polygon::new(vec![v(0, 0), v(1, 0), v(1, 1)]);
        let t2 = Polygon::new(vec![v(0, 0), v(1, 1), v(0, 1)]);
        let split = Surface::new(
            0,
            vec![t1, t2],
            vec![
                ((0, 0), (1, 1)), // bottom ↔ top
                ((0, 1), (1, 2)), // right ↔ left
                ((0, 2), (1, 0)), // the cut diagonal
            ],
        );
        assert_eq!(split.validate().unwrap().genus, 1);
        assert_eq!(j_surface(&split), j);
    }

    #[test]
    fn j_vv_examples() {
        let s = unit_torus();
        assert!(j_vv(&s, &v(1, 0)).unwrap().is_zero());
        assert!(j_vv(&s, &v(1, 1)).unwrap().is_zero());
        assert!(j_vv(&s, &v(0, 1)).unwrap().is_zero());
        assert_eq!(j_vv(&s, &Vec2Q::zero()), Err(JError::ZeroDirection));
    }

    #[test]
    fn j_vw_examples() {
        let s = unit_torus();
        let t = j_vw(&s, &v(1, 0), &v(0, 1)).unwrap();
        assert_eq!(t, c4(2, 0, 0, 0));
        // Vertical-horizontal special case is J_yx.
        let t = j_vw(&s, &v(0, 1), &v(1, 0)).unwrap();
        assert_eq!(t, c4(-2, 0, 0, 0));
        assert_eq!(
            j_vw(&s, &v(1, 1), &v(2, 2)),
            Err(JError::DependentDirections)
        );
    }

    #[test]
    fn homology_formula_on_torus() {
        let basis = vec![(v(1, 0), v(0, 1))];
        let j = j_from_homology(&basis);
        assert!(j.jxx.is_zero() && j.jyy.is_zero());
        assert_eq!(j.jxy, c4(2, 0, 0, 0));
        assert!(j_from_homology(&[]).is_zero());
    }

    #[test]
    fn subdivision_invariance_on_builder_surface() {
        // Split the narrow parallelogram of the golden-L along a diagonal;
        // the surface invariant is unchanged.
        let phi = QElem::from_triple(1, 1, 2, 5);
        let (s, _) = crate::cylinder::build_h2(
            &QElem::one(),
            &phi,
            &QElem::one(),
            &phi,
            &QElem::from_triple(3, -1, 2, 5),
            &QElem::zero(),
        )
        .unwrap();
        // Polygon 1 is the narrow parallelogram with vertices v0..v3; cut
        // along v0→v2 into triangles [v0,v1,v2] (stays polygon 1) and
        // [v0,v2,v3] (new polygon 2).
        let q1 = s.polygons[1].clone();
        let tri_a = Polygon::new(vec![
            q1.vertex(0).clone(),
            q1.vertex(1).clone(),
            q1.vertex(2).clone(),
        ]);
        let tri_b = Polygon::new(vec![
            q1.vertex(0).clone(),
            q1.vertex(2).clone(),
            q1.vertex(3).clone(),
        ]);
        let mut polygons = s.polygons.clone();
        polygons[1] = tri_a;
        polygons.push(tri_b);
        // Old edges (1,0), (1,1) stay; (1,2) → (2,1); (1,3) → (2,2); plus
        // the cut pair (1,2) ↔ (2,0).
        let remap = |e: (usize, usize)| match e {
            (1, 2) => (2, 1),
            (1, 3) => (2, 2),
            other => other,
        };
        let mut gluings: Vec<((usize, usize), (usize, usize))> = s
            .gluings
            .iter()
            .map(|&(a, b)| (remap(a), remap(b)))
            .collect();
        gluings.push(((1, 2), (2, 0)));
        let split = Surface::new(s.d, polygons, gluings);
        let info = split.validate().unwrap();
        assert_eq!(info, s.validate().unwrap());
        assert_eq!(j_surface(&split), j_surface(&s));
    }

    #[test]
    fn quadratic_direction_on_rational_surface() {
        // A rational surface sheared by an irrational slope: the field join
        // happens inside apply_gl2 and the directional form stays exact.
        let s = unit_torus();
        let v = Vec2Q::new(QElem::one(), QElem::sqrt_d(2));
        let w = j_vv(&s, &v).unwrap();
        // (1, √2) is not homological on the square torus and its wedge is
        // genuinely nonzero: J_yy(gS) = 2·(√2 ∧ 1)-type terms survive.
        assert!(!w.is_zero());
    }

    #[test]
    fn unipotent_invariance() {
        let s = unit_torus();
        let b = QElem::from_triple(3, 2, 5, 7);
        let h = Mat2Q::new(QElem::one(), b, QElem::zero(), QElem::one());
        let hs = s.apply_gl2(&h).unwrap();
        assert_eq!(j_surface(&hs).jyy, j_surface(&s).jyy);
    }
}
