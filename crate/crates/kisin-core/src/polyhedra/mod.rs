//! Exact-rational polyhedra: H- and V-representations, conversions, cone
//! duality, Minkowski sums with cones, membership, and the max-flow oracle.

pub mod dd;
pub mod flow;
pub mod linalg;
pub mod lp;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KisinError, Result};
use crate::rational::{dot, fmt_vec, is_zero_vec, lex_cmp, parse_rat, parse_vec, Rational, RationalVector};
pub use dd::{canonical, ConeGenerators};
pub use flow::{
    graph_cone_dual_membership, maxflow, Capacity, DirectedGraph, FlowNetwork, FlowResult, FlowValue,
    MembershipMethod,
};
pub use lp::{LinearProgram, LpOutcome, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfspaceKind {
    /// `normal . x >= offset`
    Inequality,
    /// `normal . x = offset`
    Equation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: RationalVector,
    pub offset: Rational,
    pub kind: HalfspaceKind,
}

impl Halfspace {
    pub fn ge(normal: RationalVector, offset: Rational) -> Self {
        Halfspace { normal, offset, kind: HalfspaceKind::Inequality }
    }

    pub fn eq(normal: RationalVector, offset: Rational) -> Self {
        Halfspace { normal, offset, kind: HalfspaceKind::Equation }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = dot(&self.normal, x);
        match self.kind {
            HalfspaceKind::Inequality => v >= self.offset,
            HalfspaceKind::Equation => v == self.offset,
        }
    }

    /// Value of `normal . x - offset`.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VPolyhedron {
    pub dim: usize,
    /// Sorted lexicographically.
    pub vertices: Vec<RationalVector>,
    /// Recession rays as primitive integer vectors, sorted.
    pub rays: Vec<RationalVector>,
    /// Basis of the lineality space (empty for pointed polyhedra).
    pub lines: Vec<RationalVector>,
}

impl HPolyhedron {
    pub fn new(dim: usize) -> Self {
        HPolyhedron { dim, halfspaces: Vec::new() }
    }

    pub fn push(&mut self, h: Halfspace) {
        assert_eq!(h.normal.len(), self.dim, "halfspace dimension");
        if h.kind == HalfspaceKind::Inequality {
            assert!(!is_zero_vec(&h.normal), "inequality with zero normal");
        }
        self.halfspaces.push(h);
    }

    pub fn add_ge(&mut self, normal: RationalVector, offset: Rational) {
        self.push(Halfspace::ge(normal, offset));
    }

    pub fn add_eq(&mut self, normal: RationalVector, offset: Rational) {
        self.push(Halfspace::eq(normal, offset));
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Halfspace> {
        self.halfspaces.iter().filter(|h| h.kind == HalfspaceKind::Inequality)
    }

    pub fn equations(&self) -> impl Iterator<Item = &Halfspace> {
        self.halfspaces.iter().filter(|h| h.kind == HalfspaceKind::Equation)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.halfspaces.iter().all(|h| h.offset.is_zero())
    }

    /// Intersection with another polyhedron of the same dimension.
    pub fn intersect(&self, other: &HPolyhedron) -> HPolyhedron {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        out.halfspaces.extend(other.halfspaces.iter().cloned());
        out
    }

    /// Whether a direction lies in the recession cone.
    pub fn recedes(&self, r: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| {
            let v = dot(&h.normal, r);
            match h.kind {
                HalfspaceKind::Inequality => !v.is_negative(),
                HalfspaceKind::Equation => v.is_zero(),
            }
        })
    }

    /// Exact LP over this polyhedron (maximization).
    pub fn maximize(&self, objective: &[Rational]) -> LpOutcome {
        let mut lp = LinearProgram::new(self.dim);
        lp.objective = objective.to_vec();
        for h in &self.halfspaces {
            let sense = match h.kind {
                HalfspaceKind::Inequality => Sense::Ge,
                HalfspaceKind::Equation => Sense::Eq,
            };
            lp.add(h.normal.clone(), sense, h.offset.clone());
        }
        lp.maximize()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.maximize(&crate::rational::zeros(self.dim)), LpOutcome::Infeasible)
    }
}

/// Exact halfspace evaluation.
pub fn contains(p: &HPolyhedron, x: &[Rational]) -> Result<bool> {
    if x.len() != p.dim {
        return Err(KisinError::DimensionMismatch { expected: p.dim, got: x.len() });
    }
    Ok(p.halfspaces.iter().all(|h| h.holds(x)))
}

/// `{x : <x, g> >= 0 for every generator}` (lines give equations).
pub fn dual_cone(dim: usize, gens: &ConeGenerators) -> HPolyhedron {
    let mut h = HPolyhedron::new(dim);
    for r in &gens.rays {
        if !is_zero_vec(r) {
            h.add_ge(r.clone(), Rational::zero());
        }
    }
    for l in &gens.lines {
        h.add_eq(l.clone(), Rational::zero());
    }
    h
}

/// Dual cone of a finite list of generators.
pub fn dual_cone_of(dim: usize, generators: &[RationalVector]) -> HPolyhedron {
    dual_cone(dim, &ConeGenerators { rays: generators.to_vec(), lines: Vec::new() })
}

/// Extreme rays and lineality of a cone given by homogeneous halfspaces.
pub fn cone_generators(h: &HPolyhedron) -> ConeGenerators {
    assert!(h.is_homogeneous(), "cone must pass through the origin");
    let ineqs: Vec<RationalVector> = h.inequalities().map(|x| x.normal.clone()).collect();
    let eqs: Vec<RationalVector> = h.equations().map(|x| x.normal.clone()).collect();
    dd::cone_generators(&ineqs, &eqs, h.dim)
}

/// Minimal generators of the dual cone `H*`.
pub fn dual_cone_h(h: &HPolyhedron) -> ConeGenerators {
    let primal = cone_generators(h);
    cone_generators(&dual_cone(h.dim, &primal))
}

/// H -> V conversion through the homogenized cone `{(x,t) : a.x >= c t, t >= 0}`.
pub fn enumerate_vertices(p: &HPolyhedron) -> VPolyhedron {
    let n = p.dim;
    let lift = |h: &Halfspace| {
        let mut v = h.normal.clone();
        v.push(-h.offset.clone());
        v
    };
    let mut ineqs: Vec<RationalVector> = p.inequalities().map(lift).collect();
    let mut t_pos = crate::rational::zeros(n + 1);
    t_pos[n] = Rational::from_integer(1.into());
    ineqs.push(t_pos);
    let eqs: Vec<RationalVector> = p.equations().map(lift).collect();
    let g = dd::cone_generators(&ineqs, &eqs, n + 1);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in g.rays {
        let t = r[n].clone();
        if t.is_positive() {
            vertices.push(r[..n].iter().map(|x| x / &t).collect::<RationalVector>());
        } else {
            rays.push(r[..n].to_vec());
        }
    }
    if vertices.is_empty() {
        return VPolyhedron { dim: n, ..Default::default() };
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));
    vertices.dedup();
    rays.sort();
    let lines = g.lines.into_iter().map(|l| l[..n].to_vec()).collect();
    VPolyhedron { dim: n, vertices, rays, lines }
}

/// V -> H conversion: the facets of `conv(vertices) + cone(rays) + span(lines)`
/// are the extreme rays of `{(a, c) : a.v >= c, a.r >= 0, a.l = 0}`.
pub fn to_hpolyhedron(v: &VPolyhedron) -> HPolyhedron {
    let n = v.dim;
    let mut out = HPolyhedron::new(n);
    if v.vertices.is_empty() {
        // Empty set: 0 >= 1.
        out.halfspaces.push(Halfspace::ge(crate::rational::zeros(n), Rational::from_integer(1.into())));
        return out;
    }
    let mut ineqs = Vec::new();
    for x in &v.vertices {
        let mut row = x.clone();
        row.push(Rational::from_integer((-1).into()));
        ineqs.push(row);
    }
    for r in &v.rays {
        let mut row = r.clone();
        row.push(Rational::zero());
        ineqs.push(row);
    }
    let eqs: Vec<RationalVector> = v
        .lines
        .iter()
        .map(|l| {
            let mut row = l.clone();
            row.push(Rational::zero());
            row
        })
        .collect();
    let g = dd::cone_generators(&ineqs, &eqs, n + 1);
    for r in g.rays {
        let (a, c) = (r[..n].to_vec(), r[n].clone());
        if is_zero_vec(&a) {
            // The trivial inequality 0 >= c with c <= 0.
            continue;
        }
        out.add_ge(a, c);
    }
    for l in g.lines {
        let (a, c) = (l[..n].to_vec(), l[n].clone());
        if !is_zero_vec(&a) {
            out.add_eq(a, c);
        }
    }
    out
}

/// `P + cone(generators)` in H-form.
pub fn minkowski_sum_cone(p: &VPolyhedron, generators: &ConeGenerators) -> HPolyhedron {
    to_hpolyhedron(&minkowski_sum_cone_v(p, generators))
}

/// `P + cone(generators)` in (possibly non-minimal) V-form.
pub fn minkowski_sum_cone_v(p: &VPolyhedron, generators: &ConeGenerators) -> VPolyhedron {
    let mut sum = p.clone();
    sum.rays.extend(generators.rays.iter().map(|r| canonical(r)));
    sum.rays.sort();
    sum.rays.dedup();
    sum.lines.extend(generators.lines.iter().cloned());
    sum
}

/// Same for an H-form input.
pub fn minkowski_sum_cone_h(p: &HPolyhedron, generators: &ConeGenerators) -> HPolyhedron {
    minkowski_sum_cone(&enumerate_vertices(p), generators)
}

/// Vertices of `conv(points) + cone(rays)` among the given points.
///
/// A point `v` survives iff some objective is uniquely minimized at `v` over
/// the points and is strictly positive on every ray; this is decided by one
/// small LP per point over the difference vectors.
pub fn vertices_of_sum_with_cone_points(points: &[RationalVector], rays: &[RationalVector]) -> Vec<RationalVector> {
    let mut pts: Vec<RationalVector> = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(a, b));
    pts.dedup();
    let n = pts.first().map_or(0, |p| p.len());
    let one = Rational::from_integer(1.into());
    pts.iter()
        .enumerate()
        .filter(|(k, v)| {
            // Find c with c.(w - v) >= 1 for every other point w and c.r >= 1 on rays.
            let mut lp = LinearProgram::new(n);
            for (j, w) in pts.iter().enumerate() {
                if j != *k {
                    lp.add(crate::rational::sub(w, v), Sense::Ge, one.clone());
                }
            }
            for r in rays {
                lp.add(r.clone(), Sense::Ge, one.clone());
            }
            lp.feasible_point().is_some()
        })
        .map(|(_, v)| v.clone())
        .collect()
}

/// Vertices of `P + cone(rays)` for a pointed polyhedron `P` given in H-form
/// together with its vertex list.
///
/// A vertex `v` of `P` stays a vertex of the sum iff the normal cone of `P`
/// at `v` (spanned by the tight inequality normals and the equation normals)
/// contains some `c` with `c.r > 0` for every ray `r`; one small LP per vertex.
pub fn vertices_of_sum_with_cone(p: &HPolyhedron, vertices: &[RationalVector], rays: &[RationalVector]) -> Vec<RationalVector> {
    let one = Rational::from_integer(1.into());
    let eqs: Vec<&Halfspace> = p.equations().collect();
    vertices
        .iter()
        .filter(|v| {
            let tight: Vec<&Halfspace> = p.inequalities().filter(|h| h.slack(v).is_zero()).collect();
            let nvars = tight.len() + eqs.len();
            let mut lp = LinearProgram::new(nvars);
            for r in rays {
                let row: RationalVector = tight.iter().chain(eqs.iter()).map(|h| dot(&h.normal, r)).collect();
                lp.add(row, Sense::Ge, one.clone());
            }
            for k in 0..tight.len() {
                lp.add(crate::rational::unit(nvars, k), Sense::Ge, Rational::zero());
            }
            lp.feasible_point().is_some()
        })
        .cloned()
        .collect()
}

impl VPolyhedron {
    /// Whether every generator of `self` lies in `p`.
    pub fn inside(&self, p: &HPolyhedron) -> bool {
        self.vertices.iter().all(|v| contains(p, v).unwrap_or(false))
            && self.rays.iter().all(|r| p.recedes(r))
            && self.lines.iter().all(|l| p.recedes(l) && p.recedes(&crate::rational::scale(l, &-Rational::from_integer(1.into()))))
    }
}

/// Mutual containment of the generators: both H-forms define the same set.
pub fn same_set(a: &HPolyhedron, b: &HPolyhedron) -> bool {
    enumerate_vertices(a).inside(b) && enumerate_vertices(b).inside(a)
}

// JSON with rationals as "p/q" strings.

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HPolyhedronJson {
    pub dim: usize,
    pub ineqs: Vec<Vec<String>>,
    pub eqs: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VPolyhedronJson {
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<Vec<String>>,
}

impl HPolyhedron {
    /// Rows are `[a_1, ..., a_n, c]` for `a.x >= c` (resp. `= c`).
    pub fn to_json(&self) -> HPolyhedronJson {
        let row = |h: &Halfspace| {
            let mut r = fmt_vec(&h.normal);
            r.push(h.offset.to_string());
            r
        };
        HPolyhedronJson {
            dim: self.dim,
            ineqs: self.inequalities().map(row).collect(),
            eqs: self.equations().map(row).collect(),
        }
    }

    pub fn from_json(j: &HPolyhedronJson) -> Result<Self> {
        let mut p = HPolyhedron::new(j.dim);
        for (rows, kind) in [(&j.ineqs, HalfspaceKind::Inequality), (&j.eqs, HalfspaceKind::Equation)] {
            for r in rows {
                if r.len() != j.dim + 1 {
                    return Err(KisinError::DimensionMismatch { expected: j.dim + 1, got: r.len() });
                }
                let normal = parse_vec(&r[..j.dim])?;
                let offset = parse_rat(&r[j.dim])?;
                if kind == HalfspaceKind::Inequality && is_zero_vec(&normal) {
                    return Err(KisinError::InvalidInput("inequality with zero normal".into()));
                }
                p.halfspaces.push(Halfspace { normal, offset, kind });
            }
        }
        Ok(p)
    }
}

impl VPolyhedron {
    pub fn to_json(&self) -> VPolyhedronJson {
        VPolyhedronJson {
            vertices: self.vertices.iter().map(|v| fmt_vec(v)).collect(),
            rays: self.rays.iter().map(|v| fmt_vec(v)).collect(),
            lines: self.lines.iter().map(|v| fmt_vec(v)).collect(),
        }
    }

    pub fn from_json(dim: usize, j: &VPolyhedronJson) -> Result<Self> {
        let parse_all = |rows: &Vec<Vec<String>>| -> Result<Vec<RationalVector>> {
            rows.iter()
                .map(|r| {
                    if r.len() != dim {
                        return Err(KisinError::DimensionMismatch { expected: dim, got: r.len() });
                    }
                    parse_vec(r)
                })
                .collect()
        };
        Ok(VPolyhedron {
            dim,
            vertices: parse_all(&j.vertices)?,
            rays: parse_all(&j.rays)?,
            lines: parse_all(&j.lines)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec};

    fn unit_square() -> HPolyhedron {
        let mut p = HPolyhedron::new(2);
        p.add_ge(ivec(&[1, 0]), int(0));
        p.add_ge(ivec(&[-1, 0]), int(-1));
        p.add_ge(ivec(&[0, 1]), int(0));
        p.add_ge(ivec(&[0, -1]), int(-1));
        p
    }

    #[test]
    fn square_vertices() {
        let v = enumerate_vertices(&unit_square());
        assert_eq!(v.vertices, vec![ivec(&[0, 0]), ivec(&[0, 1]), ivec(&[1, 0]), ivec(&[1, 1])]);
        assert!(v.rays.is_empty());
    }

    #[test]
    fn empty_polyhedron() {
        let mut p = HPolyhedron::new(1);
        p.add_ge(ivec(&[1]), int(2));
        p.add_ge(ivec(&[-1]), int(-1));
        let v = enumerate_vertices(&p);
        assert!(v.vertices.is_empty() && v.rays.is_empty());
        assert!(p.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let p = unit_square();
        let back = HPolyhedron::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn contains_checks_dimension() {
        assert!(contains(&unit_square(), &ivec(&[0])).is_err());
    }
}
