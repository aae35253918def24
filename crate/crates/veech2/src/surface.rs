//! Translation surfaces as plane polygons glued along parallel edges.
//!
//! A [`Surface`] is a list of simple, counterclockwise polygons with
//! coordinates in one Q(√d)², together with a perfect matching on directed
//! edges; matched edges must be translates of each other with opposite
//! boundary orientation. [`Surface::validate`] checks all of that exactly and
//! computes the stratum: vertex classes, cone angles (as exact multiples of
//! 2π, by counting how often the boundary direction sweeps past a reference
//! ray), Euler characteristic, genus, and zero orders.

use crate::qfield::{FieldError, QElem, Rat};
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

/// A vector in Q(√d)².
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vec2Q {
    pub x: QElem,
    pub y: QElem,
}

impl Vec2Q {
    pub fn new(x: QElem, y: QElem) -> Self {
        Vec2Q { x, y }
    }

    pub fn zero() -> Self {
        Vec2Q { x: QElem::zero(), y: QElem::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Exact cross product x₁y₂ − y₁x₂.
    pub fn cross(&self, other: &Vec2Q) -> QElem {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Vec2Q) -> QElem {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn scale(&self, s: &QElem) -> Vec2Q {
        Vec2Q::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    /// Same ray: parallel with positive dot product.
    pub fn same_direction(&self, other: &Vec2Q) -> bool {
        self.cross(other).is_zero() && self.dot(other).is_positive()
    }

    /// Parallel as lines (either orientation).
    pub fn parallel(&self, other: &Vec2Q) -> bool {
        self.cross(other).is_zero()
    }
}

impl Add for Vec2Q {
    type Output = Vec2Q;
    fn add(self, rhs: Vec2Q) -> Vec2Q {
        Vec2Q::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2Q {
    type Output = Vec2Q;
    fn sub(self, rhs: Vec2Q) -> Vec2Q {
        Vec2Q::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2Q {
    type Output = Vec2Q;
    fn neg(self) -> Vec2Q {
        Vec2Q::new(-self.x, -self.y)
    }
}

impl fmt::Debug for Vec2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Vec2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A 2×2 matrix over Q(√d), rows (a b; c d), acting on column vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2Q {
    pub a: QElem,
    pub b: QElem,
    pub c: QElem,
    pub d: QElem,
}

impl Mat2Q {
    pub fn new(a: QElem, b: QElem, c: QElem, d: QElem) -> Self {
        Mat2Q { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2Q::new(QElem::one(), QElem::zero(), QElem::zero(), QElem::one())
    }

    pub fn det(&self) -> QElem {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, v: &Vec2Q) -> Vec2Q {
        Vec2Q::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    pub fn inverse(&self) -> Result<Mat2Q, SurfaceError> {
        let det = self.det();
        if det.is_zero() {
            return Err(SurfaceError::SingularMatrix);
        }
        let inv = det.inv().expect("nonzero det");
        Ok(Mat2Q::new(
            self.d.clone() * inv.clone(),
            -(self.b.clone() * inv.clone()),
            -(self.c.clone() * inv.clone()),
            self.a.clone() * inv,
        ))
    }

    pub fn compose(&self, rhs: &Mat2Q) -> Mat2Q {
        Mat2Q::new(
            self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        )
    }
}

/// A simple polygon with counterclockwise vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polygon {
    pub vertices: Vec<Vec2Q>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2Q>) -> Self {
        Polygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2Q {
        &self.vertices[i % self.vertices.len()]
    }

    /// Directed edge i: from vertex i to vertex i+1.
    pub fn edge_vec(&self, i: usize) -> Vec2Q {
        let n = self.vertices.len();
        self.vertices[(i + 1) % n].clone() - self.vertices[i].clone()
    }

    /// Twice the signed area (shoelace), positive for counterclockwise.
    pub fn signed_area_x2(&self) -> QElem {
        let n = self.vertices.len();
        let mut acc = QElem::zero();
        for i in 0..n {
            acc = acc + self.vertices[i].cross(&self.vertices[(i + 1) % n]);
        }
        acc
    }

    pub fn area(&self) -> QElem {
        self.signed_area_x2() * &Rat::new(1.into(), 2.into())
    }

    fn check(&self, poly: usize, d: u64) -> Result<(), SurfaceError> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(SurfaceError::TooFewVertices { poly });
        }
        for v in &self.vertices {
            for c in [&v.x, &v.y] {
                if c.field_d() != 0 && c.field_d() != d {
                    return Err(SurfaceError::MixedFields { poly });
                }
            }
        }
        for i in 0..n {
            if self.edge_vec(i).is_zero() {
                return Err(SurfaceError::ZeroEdge { poly, edge: i });
            }
        }
        // Spike corners (interior angle 0 or 2π) are degenerate.
        for i in 0..n {
            let into = self.edge_vec((i + n - 1) % n);
            let out = self.edge_vec(i);
            if into.cross(&out).is_zero() && into.dot(&out).is_negative() {
                return Err(SurfaceError::SpikeVertex { poly, vertex: i });
            }
        }
        if !self.signed_area_x2().is_positive() {
            return Err(SurfaceError::NotCounterclockwise { poly });
        }
        // Simplicity: no two non-adjacent edges may meet; adjacent edges may
        // meet only at their shared vertex (spikes already excluded).
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a, b) = (self.vertex(i), self.vertex(i + 1));
                let (c, e) = (self.vertex(j), self.vertex(j + 1));
                if segments_intersect(a, b, c, e) {
                    return Err(SurfaceError::NotSimple { poly, edge1: i, edge2: j });
                }
            }
        }
        Ok(())
    }
}

fn orient(a: &Vec2Q, b: &Vec2Q, c: &Vec2Q) -> i32 {
    (b.clone() - a.clone()).cross(&(c.clone() - a.clone())).sign()
}

/// Do closed segments [a,b] and [c,d] share any point?
fn segments_intersect(a: &Vec2Q, b: &Vec2Q, c: &Vec2Q, d: &Vec2Q) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 {
        // Proper or touching crossing, except when both pairs are collinear.
        if !(o1 == 0 && o2 == 0) {
            return true;
        }
    }
    if o1 == 0 && o2 == 0 {
        // Collinear: overlap iff the 1-d projections overlap.
        let dir = b.clone() - a.clone();
        let proj = |p: &Vec2Q| dir.dot(&(p.clone() - a.clone()));
        let (lo, hi) = (QElem::zero(), dir.dot(&dir));
        let pc = proj(c);
        let pd = proj(d);
        let (cmin, cmax) = if pc.cmp_exact(&pd) == std::cmp::Ordering::Less {
            (pc, pd)
        } else {
            (pd, pc)
        };
        return cmax.cmp_exact(&lo) != std::cmp::Ordering::Less
            && hi.cmp_exact(&cmin) != std::cmp::Ordering::Less;
    }
    false
}

/// Stratum data: genus and the multiset of zero orders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StratumInfo {
    pub genus: i64,
    /// Orders of the genuine zeros (angle 2π(k+1) gives order k ≥ 1);
    /// marked regular points are omitted.
    pub zero_orders: Vec<u32>,
}

impl StratumInfo {
    pub fn is_h2(&self) -> bool {
        self.genus == 2 && self.zero_orders == [2]
    }

    pub fn is_h11(&self) -> bool {
        self.genus == 2 && self.zero_orders == [1, 1]
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SurfaceError {
    #[error("polygon {poly} has fewer than 3 vertices")]
    TooFewVertices { poly: usize },
    #[error("polygon {poly} repeats a vertex on edge {edge}")]
    ZeroEdge { poly: usize, edge: usize },
    #[error("polygon {poly} has a degenerate spike at vertex {vertex}")]
    SpikeVertex { poly: usize, vertex: usize },
    #[error("polygon {poly} self-intersects (edges {edge1} and {edge2})")]
    NotSimple { poly: usize, edge1: usize, edge2: usize },
    #[error("polygon {poly} is not counterclockwise")]
    NotCounterclockwise { poly: usize },
    #[error("polygon {poly} mixes coordinates from different fields")]
    MixedFields { poly: usize },
    #[error("edge ({0}, {1}) is not glued exactly once", .poly, .edge)]
    UnmatchedEdge { poly: usize, edge: usize },
    #[error("edge ({0}, {1}) appears in more than one gluing", .poly, .edge)]
    DuplicateGluing { poly: usize, edge: usize },
    #[error("edge ({0}, {1}) is glued to itself", .poly, .edge)]
    SelfGluedEdge { poly: usize, edge: usize },
    #[error("glued edges ({},{}) and ({},{}) are not opposite translates", .first.0, .first.1, .second.0, .second.1)]
    NonParallelGluing { first: (usize, usize), second: (usize, usize) },
    #[error("vertex class of corner ({},{}) has angle that is not a multiple of 2π", .corner.0, .corner.1)]
    AngleNotMultipleOf2Pi { corner: (usize, usize) },
    #[error("surface is disconnected (polygon {poly} unreachable from polygon 0)")]
    Disconnected { poly: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Polygons plus translation gluings. `d == 0` means all coordinates are
/// rational.
#[derive(Clone, PartialEq, Debug)]
pub struct Surface {
    pub d: u64,
    pub polygons: Vec<Polygon>,
    /// Unordered pairs of directed edges, each edge (poly, edge_index).
    pub gluings: Vec<((usize, usize), (usize, usize))>,
}

/// Everything validate computes: the stratum plus the combinatorial data the
/// tracer and holonomy code reuse.
#[derive(Clone, Debug)]
pub struct SurfaceAnalysis {
    pub stratum: StratumInfo,
    /// partner[(p,e)] = the glued directed edge.
    pub partner: HashMap<(usize, usize), (usize, usize)>,
    /// Vertex classes as lists of corners (poly, vertex).
    pub classes: Vec<Vec<(usize, usize)>>,
    /// class_of[(p,v)] = index into `classes`.
    pub class_of: HashMap<(usize, usize), usize>,
    /// Cone angle of each class as a multiple of 2π.
    pub turns: Vec<u32>,
}

impl Surface {
    pub fn new(
        d: u64,
        polygons: Vec<Polygon>,
        gluings: Vec<((usize, usize), (usize, usize))>,
    ) -> Self {
        Surface { d, polygons, gluings }
    }

    pub fn edge_vec(&self, e: (usize, usize)) -> Vec2Q {
        self.polygons[e.0].edge_vec(e.1)
    }

    /// The directed edge glued to (p, e). Panics on unglued edges; validate
    /// first.
    pub fn partner_of(&self, p: usize, e: usize) -> (usize, usize) {
        for &(a, b) in &self.gluings {
            if a == (p, e) {
                return b;
            }
            if b == (p, e) {
                return a;
            }
        }
        panic!("edge ({}, {}) is not glued", p, e)
    }

    pub fn area(&self) -> QElem {
        let mut acc = QElem::zero();
        for p in &self.polygons {
            acc = acc + p.area();
        }
        acc
    }

    /// Check every structural invariant and compute the stratum.
    pub fn validate(&self) -> Result<StratumInfo, SurfaceError> {
        Ok(self.analyze()?.stratum)
    }

    pub fn analyze(&self) -> Result<SurfaceAnalysis, SurfaceError> {
        if self.d != 0 {
            crate::qfield::check_field_d(self.d)?;
        }
        for (pi, poly) in self.polygons.iter().enumerate() {
            poly.check(pi, self.d)?;
        }

        // Perfect matching on directed edges.
        let mut partner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for &(e1, e2) in &self.gluings {
            if e1 == e2 {
                return Err(SurfaceError::SelfGluedEdge { poly: e1.0, edge: e1.1 });
            }
            for (a, b) in [(e1, e2), (e2, e1)] {
                if a.0 >= self.polygons.len() || a.1 >= self.polygons[a.0].len() {
                    return Err(SurfaceError::UnmatchedEdge { poly: a.0, edge: a.1 });
                }
                if partner.insert(a, b).is_some() {
                    return Err(SurfaceError::DuplicateGluing { poly: a.0, edge: a.1 });
                }
            }
        }
        for (pi, poly) in self.polygons.iter().enumerate() {
            for ei in 0..poly.len() {
                if !partner.contains_key(&(pi, ei)) {
                    return Err(SurfaceError::UnmatchedEdge { poly: pi, edge: ei });
                }
            }
        }

        // Glued edges must be opposite translates.
        for &(e1, e2) in &self.gluings {
            let v1 = self.edge_vec(e1);
            let v2 = self.edge_vec(e2);
            if !(v1.clone() + v2).is_zero() {
                return Err(SurfaceError::NonParallelGluing { first: e1, second: e2 });
            }
        }

        // Connectivity through gluings.
        let npoly = self.polygons.len();
        let mut seen = vec![false; npoly];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for e in 0..self.polygons[p].len() {
                let q = partner[&(p, e)].0;
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(SurfaceError::Disconnected { poly: p });
        }

        // Vertex classes via the clockwise-next corner map: from corner
        // (p, i), the glued copy of edge (p, i) is (p', j), and the corner
        // (p', j+1) is the next sector clockwise around the same point.
        let corner_count: usize = self.polygons.iter().map(|p| p.len()).sum();
        let corner_index = |p: usize, v: usize| -> usize {
            self.polygons[..p].iter().map(|q| q.len()).sum::<usize>() + v
        };
        let corners: Vec<(usize, usize)> = self
            .polygons
            .iter()
            .enumerate()
            .flat_map(|(pi, poly)| (0..poly.len()).map(move |v| (pi, v)))
            .collect();
        let mut cw_next = vec![usize::MAX; corner_count];
        for &(p, i) in &corners {
            let (p2, j) = partner[&(p, i)];
            let n2 = self.polygons[p2].len();
            cw_next[corner_index(p, i)] = corner_index(p2, (j + 1) % n2);
        }
        let mut ccw_next = vec![usize::MAX; corner_count];
        for (c, &n) in cw_next.iter().enumerate() {
            ccw_next[n] = c;
        }

        let mut class_of_idx = vec![usize::MAX; corner_count];
        let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut turns: Vec<u32> = Vec::new();
        for start in 0..corner_count {
            if class_of_idx[start] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut orbit = Vec::new();
            let mut c = start;
            loop {
                class_of_idx[c] = cid;
                orbit.push(corners[c]);
                c = ccw_next[c];
                if c == start {
                    break;
                }
            }
            let n = self.count_turns(&orbit);
            if n == 0 {
                return Err(SurfaceError::AngleNotMultipleOf2Pi { corner: corners[start] });
            }
            classes.push(orbit);
            turns.push(n);
        }

        let v = classes.len() as i64;
        let e = self.gluings.len() as i64;
        let f = self.polygons.len() as i64;
        let chi = v - e + f;
        debug_assert!(chi % 2 == 0);
        let genus = (2 - chi) / 2;
        let mut zero_orders: Vec<u32> =
            turns.iter().filter(|&&n| n > 1).map(|&n| n - 1).collect();
        zero_orders.sort_unstable();
        debug_assert_eq!(
            zero_orders.iter().map(|&k| k as i64).sum::<i64>(),
            if genus >= 1 { 2 * genus - 2 } else { 0 },
            "zero orders must match the Euler characteristic"
        );

        let mut class_of = HashMap::new();
        for (idx, &(p, vtx)) in corners.iter().enumerate() {
            class_of.insert((p, vtx), class_of_idx[idx]);
        }

        Ok(SurfaceAnalysis {
            stratum: StratumInfo { genus, zero_orders },
            partner,
            classes,
            class_of,
            turns,
        })
    }

    /// Total angle of a vertex class as a multiple of 2π. The orbit is in
    /// counterclockwise order, so consecutive sectors share a boundary ray
    /// and the total rotation is counted exactly as the number of times the
    /// sweeping direction passes the first sector's start ray.
    fn count_turns(&self, orbit: &[(usize, usize)]) -> u32 {
        let sector = |&(p, i): &(usize, usize)| -> (Vec2Q, Vec2Q) {
            let poly = &self.polygons[p];
            let n = poly.len();
            let out = poly.edge_vec(i);
            let back = -poly.edge_vec((i + n - 1) % n);
            (out, back)
        };
        let (r, _) = sector(&orbit[0]);
        let mut count = 0u32;
        for c in orbit {
            let (u, w) = sector(c);
            if u.same_direction(&r) || ccw_open_sector_contains(&u, &w, &r) {
                count += 1;
            }
        }
        count
    }

    /// Generators of the holonomy module p(H1(S, Z)): spanning-tree chord
    /// loops in the 1-skeleton on vertex classes.
    pub fn holonomy_generators(&self) -> Result<Vec<Vec2Q>, SurfaceError> {
        let analysis = self.analyze()?;
        self.holonomy_generators_with(&analysis)
    }

    pub fn holonomy_generators_with(
        &self,
        analysis: &SurfaceAnalysis,
    ) -> Result<Vec<Vec2Q>, SurfaceError> {
        // One 1-cell per gluing pair: represented by the first edge of the
        // pair, running from class(start) to class(end) with its holonomy.
        struct Cell {
            from: usize,
            to: usize,
            holo: Vec2Q,
        }
        let mut cells = Vec::new();
        for &(e1, _) in &self.gluings {
            let (p, i) = e1;
            let n = self.polygons[p].len();
            let from = analysis.class_of[&(p, i)];
            let to = analysis.class_of[&(p, (i + 1) % n)];
            cells.push(Cell { from, to, holo: self.edge_vec(e1) });
        }
        let nv = analysis.classes.len();
        let mut node_holo: Vec<Option<Vec2Q>> = vec![None; nv];
        let mut in_tree = vec![false; cells.len()];
        node_holo[0] = Some(Vec2Q::zero());
        // BFS over cells.
        let mut frontier = vec![0usize];
        while let Some(u) = frontier.pop() {
            for (ci, cell) in cells.iter().enumerate() {
                if in_tree[ci] {
                    continue;
                }
                let (a, b, sign) = if cell.from == u && node_holo[cell.to].is_none() {
                    (u, cell.to, 1)
                } else if cell.to == u && node_holo[cell.from].is_none() {
                    (u, cell.from, -1)
                } else {
                    continue;
                };
                let base = node_holo[a].clone().unwrap();
                let h = if sign > 0 { cell.holo.clone() } else { -cell.holo.clone() };
                node_holo[b] = Some(base + h);
                in_tree[ci] = true;
                frontier.push(b);
            }
        }
        let mut gens = Vec::new();
        for (ci, cell) in cells.iter().enumerate() {
            if in_tree[ci] {
                continue;
            }
            let hu = node_holo[cell.from].clone().expect("connected surface");
            let hv = node_holo[cell.to].clone().expect("connected surface");
            gens.push(hu + cell.holo.clone() - hv);
        }
        Ok(gens)
    }

    /// Rationality / genuine quadraticity of the holonomy module.
    pub fn quadraticity(&self) -> Result<Quadraticity, SurfaceError> {
        let gens = self.holonomy_generators()?;
        let rank = q_rank(&gens);
        if rank <= 2 {
            Ok(Quadraticity::Rational)
        } else if self.d != 0 {
            Ok(Quadraticity::Quadratic(self.d))
        } else {
            Ok(Quadraticity::NotQuadratic)
        }
    }

    /// The linear action: map every vertex by `g`, keep the gluings.
    pub fn apply_gl2(&self, g: &Mat2Q) -> Result<Surface, SurfaceError> {
        if g.det().is_zero() {
            return Err(SurfaceError::SingularMatrix);
        }
        let polygons = self
            .polygons
            .iter()
            .map(|p| Polygon::new(p.vertices.iter().map(|v| g.apply(v)).collect()))
            .collect();
        let mut d = self.d;
        if d == 0 {
            // A matrix over Q(√d) can push rational surfaces into the field.
            for m in [&g.a, &g.b, &g.c, &g.d] {
                if m.field_d() != 0 {
                    d = m.field_d();
                }
            }
        }
        Ok(Surface::new(d, polygons, self.gluings.clone()))
    }
}

/// Where the holonomy module lives.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Quadraticity {
    /// Q-rank ≤ 2: a linear change of variables puts all periods in Q × Q.
    Rational,
    /// Periods genuinely span Q(√d) coordinates.
    Quadratic(u64),
    /// Reserved for inputs outside any Q(√d) model; unreachable for
    /// surfaces built by this crate.
    NotQuadratic,
}

/// Is ray `r` strictly inside the counterclockwise open sector from `u` to
/// `w`? The sector angle is assumed in (0, 2π).
pub(crate) fn ccw_open_sector_contains(u: &Vec2Q, w: &Vec2Q, r: &Vec2Q) -> bool {
    if r.same_direction(u) || r.same_direction(w) {
        return false;
    }
    let c = u.cross(w).sign();
    match c {
        1 => u.cross(r).is_positive() && r.cross(w).is_positive(),
        -1 => u.cross(r).is_positive() || r.cross(w).is_positive(),
        _ => {
            // u, w opposite (angle π): the open upper side of the line.
            debug_assert!(u.dot(w).is_negative(), "spike sectors are rejected earlier");
            u.cross(r).is_positive()
        }
    }
}

/// Q-rank of a family of Q(√d)² vectors viewed in Q⁴.
pub(crate) fn q_rank(vecs: &[Vec2Q]) -> usize {
    let mut rows: Vec<[Rat; 4]> = vecs
        .iter()
        .map(|v| {
            [
                v.x.rational_part().clone(),
                v.x.irrational_part().clone(),
                v.y.rational_part().clone(),
                v.y.irrational_part().clone(),
            ]
        })
        .collect();
    let mut rank = 0;
    for col in 0..4 {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let pv = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pv;
                let pivot_row = rows[rank].clone();
                for (c, cell) in rows[r].iter_mut().enumerate() {
                    let delta = &pivot_row[c] * &factor;
                    *cell = &*cell - &delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Ready-made example surfaces, used throughout the tests and the guide.
pub mod presets {
    use super::*;

    fn v(x: i64, y: i64) -> Vec2Q {
        Vec2Q::new(QElem::from_int(x), QElem::from_int(y))
    }

    /// The unit square torus: opposite sides glued.
    pub fn unit_torus() -> Surface {
        let p = Polygon::new(vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)]);
        // bottom(0) ↔ top(2), right(1) ↔ left(3)
        Surface::new(0, vec![p], vec![((0, 0), (0, 2)), ((0, 1), (0, 3))])
    }

    /// The rational L with outer corners (0,0),(2,0),(2,1),(1,1),(1,2),(0,2)
    /// and opposite sides glued; straight vertices split the long sides so
    /// every gluing is edge-to-edge. One cone point of angle 6π.
    pub fn rational_l_shape() -> Surface {
        let p = Polygon::new(vec![
            v(0, 0),
            v(1, 0),
            v(2, 0),
            v(2, 1),
            v(1, 1),
            v(1, 2),
            v(0, 2),
            v(0, 1),
        ]);
        let gluings = vec![
            ((0, 0), (0, 5)), // [0,1]×{0} ↔ [0,1]×{2}
            ((0, 1), (0, 3)), // [1,2]×{0} ↔ [1,2]×{1}
            ((0, 2), (0, 7)), // x=2, y∈[0,1] ↔ x=0, y∈[0,1]
            ((0, 4), (0, 6)), // x=1, y∈[1,2] ↔ x=0, y∈[1,2]
        ];
        Surface::new(0, vec![p], gluings)
    }
}
