//! The sets `A_{Q,f,l}` and `B_{Q,f,l,C,D}` and the value function
//! `b(y) = sup {l(x) : x in Q, f(x) in y - C}` for `y in D`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{KisinError, Result};
use crate::kisin_model::cones::{cone_h, weyl_chamber, weyl_dual};
use crate::kisin_model::{delta_vec, mu_vec, s_t, Cone, KisinInstance};
use crate::perm::{level_tableau, subset_from_admissible, Permutation};
use crate::polyhedra::{
    cone_generators, contains, enumerate_vertices, minkowski_sum_cone_h, HPolyhedron, HalfspaceKind, LinearProgram,
    LpOutcome, Sense,
};
use crate::rational::{dot, int, scale, unit, zeros, Rational, RationalVector};

/// Which linear map `E -> R^n` constrains the optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintMap {
    /// `f = (mu_vec_1, mu_vec_d)`: largest and smallest elementary divisors.
    F,
    /// `g = (mu_vec_1, ..., mu_vec_d)`: the whole top row.
    G,
}

impl ConstraintMap {
    pub fn target_dim(self, inst: &KisinInstance) -> usize {
        match self {
            ConstraintMap::F => 2,
            ConstraintMap::G => inst.d,
        }
    }

    /// Coefficient vectors in `q`-coordinates, one per target coordinate.
    pub fn rows(self, inst: &KisinInstance) -> Vec<RationalVector> {
        match self {
            ConstraintMap::F => vec![mu_vec(inst, 1), mu_vec(inst, inst.d)],
            ConstraintMap::G => (1..=inst.d).map(|i| mu_vec(inst, i)).collect(),
        }
    }

    pub fn apply(self, inst: &KisinInstance, q: &[Rational]) -> RationalVector {
        self.rows(inst).iter().map(|r| dot(r, q)).collect()
    }
}

/// Cones of the target space used for `C` and `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TargetCone {
    Whole,
    Zero,
    /// `R+ x R-` (first coordinate nonnegative, last nonpositive).
    PlusMinus,
    /// `y_1 >= ... >= y_n`.
    Weyl,
    /// Its dual: zero sum, nonnegative partial sums.
    WeylDual,
}

impl TargetCone {
    pub fn dual(self) -> TargetCone {
        match self {
            TargetCone::Whole => TargetCone::Zero,
            TargetCone::Zero => TargetCone::Whole,
            TargetCone::PlusMinus => TargetCone::PlusMinus,
            TargetCone::Weyl => TargetCone::WeylDual,
            TargetCone::WeylDual => TargetCone::Weyl,
        }
    }

    pub fn h(self, n: usize) -> HPolyhedron {
        match self {
            TargetCone::Whole => HPolyhedron::new(n),
            TargetCone::Zero => {
                let mut h = HPolyhedron::new(n);
                for k in 0..n {
                    h.add_eq(unit(n, k), Rational::zero());
                }
                h
            }
            TargetCone::PlusMinus => {
                let mut h = HPolyhedron::new(n);
                h.add_ge(unit(n, 0), Rational::zero());
                h.add_ge(scale(&unit(n, n - 1), &int(-1)), Rational::zero());
                h
            }
            TargetCone::Weyl => weyl_chamber(n),
            TargetCone::WeylDual => weyl_dual(n),
        }
    }
}

/// The data `(Q, f, l = delta, C, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityData {
    pub inst: KisinInstance,
    pub cone: Cone,
    pub map: ConstraintMap,
    pub c: TargetCone,
    pub d: TargetCone,
}

impl DualityData {
    pub fn new(inst: KisinInstance, cone: Cone, map: ConstraintMap, c: TargetCone, d: TargetCone) -> Self {
        DualityData { inst, cone, map, c, d }
    }

    pub fn target_dim(&self) -> usize {
        self.map.target_dim(&self.inst)
    }
}

/// A value in `R ∪ {-inf, +inf}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BValue {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl BValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            BValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl std::fmt::Display for BValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BValue::NegInfinity => write!(f, "-inf"),
            BValue::Finite(v) => write!(f, "{v}"),
            BValue::PosInfinity => write!(f, "+inf"),
        }
    }
}

fn empty_polyhedron(n: usize) -> HPolyhedron {
    let mut h = HPolyhedron::new(n);
    let mut e = zeros(n);
    if n == 0 {
        return h;
    }
    e[0] = Rational::one();
    h.add_ge(e.clone(), Rational::one());
    h.add_ge(e.iter().map(|x| -x).collect(), Rational::zero());
    h
}

/// `{y : sum y_k f_k - delta in P*}` when `P* = {x : sum x = 0, S_T(x) <= 0 for T in sets}`.
///
/// This is the dual description of a cone defined by a graph whose
/// admissible subsets are exactly the `J(T)` listed (plus the whole of `I`).
fn a_from_admissible(inst: &KisinInstance, map: ConstraintMap, sets: &[Vec<usize>]) -> Result<HPolyhedron> {
    let rows = map.rows(inst);
    let n = rows.len();
    let delta = delta_vec(inst);
    let mut h = HPolyhedron::new(n);
    let full: Vec<usize> = (1..=inst.d).collect();
    let constraint = |t: &[usize]| -> Result<(RationalVector, Rational)> {
        let coeffs = rows.iter().map(|r| s_t(inst, r, t)).collect::<Result<Vec<_>>>()?;
        Ok((coeffs, s_t(inst, &delta, t)?))
    };
    let (eq, rhs) = constraint(&full)?;
    h.add_eq(eq, rhs);
    for t in sets {
        // S_T(sum y_k f_k) - S_T(delta) <= 0.
        let (coeffs, c) = constraint(t)?;
        if coeffs.iter().all(Zero::is_zero) {
            if c.is_negative() {
                return Ok(empty_polyhedron(n));
            }
            continue;
        }
        h.add_ge(coeffs.iter().map(|x| -x).collect(), -c);
    }
    Ok(h)
}

/// Labels `T` of the proper nonempty subsets of `{1..d}`.
fn proper_subsets(d: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << d) - 1).map(|mask| (1..=d).filter(|k| mask & (1 << (k - 1)) != 0).collect()).collect()
}

/// `T_s = {1..s}`, the labels of the diagonal bands.
fn band_subsets(d: usize) -> Vec<Vec<usize>> {
    (1..d).map(|s| (1..=s).collect()).collect()
}

/// Labels of the level sets `I_s(w)`, `s < d`.
pub fn level_subsets(w: &Permutation) -> Vec<Vec<usize>> {
    let d = w.d();
    let t = level_tableau(w);
    (1..d)
        .map(|s| subset_from_admissible(d, &t.level_set(s)).expect("level sets are admissible").t)
        .collect()
}

/// `A_{Q_max}` for the given map, from the admissible-subset description of `Q_max*`.
pub fn a_qmax(inst: &KisinInstance, map: ConstraintMap) -> HPolyhedron {
    a_from_admissible(inst, map, &proper_subsets(inst.d)).expect("valid subsets")
}

/// `A_{Q_min}`: only the bands enter the dual.
pub fn a_qmin(inst: &KisinInstance, map: ConstraintMap) -> HPolyhedron {
    a_from_admissible(inst, map, &band_subsets(inst.d)).expect("valid subsets")
}

/// `A_{Q'_w}` for the level cone of `w`.
pub fn a_level_cone(inst: &KisinInstance, w: &Permutation, map: ConstraintMap) -> HPolyhedron {
    a_from_admissible(inst, map, &level_subsets(w)).expect("valid subsets")
}

/// Generators of `C*` in `R^d`.
fn weyl_dual_cone_generators(d: usize) -> crate::polyhedra::ConeGenerators {
    crate::polyhedra::ConeGenerators { rays: crate::kisin_model::cones::weyl_dual_generators(d), lines: Vec::new() }
}

/// `A_{Q,f,l}` through the closed descriptions:
/// - `Q_max`, `Q_min`: admissible sums;
/// - `Q_w` with `g`: `A_{Q'_w,g} + C*` (the extra cone `D` contributes `C*`);
/// - `Q` with `g`: `A_{Q_max,g} + C*`, only for `b >= b0`;
/// - anything else: [`a_set_generic`].
pub fn a_set(dd: &DualityData) -> Result<HPolyhedron> {
    let inst = &dd.inst;
    match (&dd.cone, dd.map) {
        (Cone::QMax, m) => Ok(a_qmax(inst, m)),
        (Cone::QMin, m) => Ok(a_qmin(inst, m)),
        (Cone::QW(w), ConstraintMap::G) => {
            Ok(minkowski_sum_cone_h(&a_level_cone(inst, w, ConstraintMap::G), &weyl_dual_cone_generators(inst.d)))
        }
        (Cone::Q, ConstraintMap::G) => {
            if inst.b < inst.b0() {
                return Err(KisinError::UnsupportedRegime(format!(
                    "A_(Q,g) = A_(Qmax,g) + C* needs b >= b0 = {} (got b = {})",
                    inst.b0(),
                    inst.b
                )));
            }
            Ok(minkowski_sum_cone_h(&a_qmax(inst, ConstraintMap::G), &weyl_dual_cone_generators(inst.d)))
        }
        (cone, m) => Ok(a_set_generic(inst, &cone_h(inst, cone), m)),
    }
}

/// `A` from the generators of the cone itself: `y` belongs to `A` iff
/// `sum y_k <f_k, r> >= <delta, r>` on every extreme ray `r` (equality on lines).
pub fn a_set_generic(inst: &KisinInstance, cone: &HPolyhedron, map: ConstraintMap) -> HPolyhedron {
    let rows = map.rows(inst);
    let n = rows.len();
    let delta = delta_vec(inst);
    let gens = cone_generators(cone);
    let mut h = HPolyhedron::new(n);
    for (r, is_line) in gens.rays.iter().map(|r| (r, false)).chain(gens.lines.iter().map(|l| (l, true))) {
        let coeffs: RationalVector = rows.iter().map(|f| dot(f, r)).collect();
        let c = dot(&delta, r);
        if coeffs.iter().all(Zero::is_zero) {
            let violated = if is_line { !c.is_zero() } else { c.is_positive() };
            if violated {
                return empty_polyhedron(n);
            }
            continue;
        }
        if is_line {
            h.add_eq(coeffs, c);
        } else {
            h.add_ge(coeffs, c);
        }
    }
    h
}

/// `B = (A ∩ C*) + D*`.
pub fn b_set(dd: &DualityData) -> Result<HPolyhedron> {
    let n = dd.target_dim();
    let a = a_set(dd)?.intersect(&dd.c.dual().h(n));
    Ok(minkowski_sum_cone_h(&a, &cone_generators(&dd.d.dual().h(n))))
}

/// The primal constraints `x in Q`, `y - f(x) in C` as an LP in `x`.
fn primal_lp(dd: &DualityData, y: &[Rational]) -> LinearProgram {
    let inst = &dd.inst;
    let cone = cone_h(inst, &dd.cone);
    let rows = dd.map.rows(inst);
    let n = rows.len();
    let mut lp = LinearProgram::new(cone.dim);
    for h in &cone.halfspaces {
        let sense = if h.kind == HalfspaceKind::Equation { Sense::Eq } else { Sense::Ge };
        lp.add(h.normal.clone(), sense, h.offset.clone());
    }
    for h in &dd.c.h(n).halfspaces {
        // a . (y - F x) (>= | =) 0  <=>  -(a F) . x (>= | =) -a . y
        let mut coeffs = zeros(cone.dim);
        for (a_k, f_k) in h.normal.iter().zip(&rows) {
            for (c, f) in coeffs.iter_mut().zip(f_k) {
                *c -= a_k * f;
            }
        }
        let sense = if h.kind == HalfspaceKind::Equation { Sense::Eq } else { Sense::Ge };
        lp.add(coeffs, sense, -dot(&h.normal, y));
    }
    lp.objective = delta_vec(inst);
    lp
}

/// Whether `y in f(Q) + C`.
pub fn in_image_plus_c(dd: &DualityData, y: &[Rational]) -> bool {
    primal_lp(dd, y).feasible_point().is_some()
}

fn check_dim(dd: &DualityData, y: &[Rational]) -> Result<()> {
    let n = dd.target_dim();
    if y.len() != n {
        return Err(KisinError::DimensionMismatch { expected: n, got: y.len() });
    }
    Ok(())
}

/// `b_{Q,f,l,C,D}(y)` from the vertices of `B`: `-inf` off `D ∩ (f(Q) + C)`,
/// otherwise the minimum of `<alpha, y>` over the vertices `alpha` of `B`
/// (`+inf` when `B` is empty).
pub fn b_value(dd: &DualityData, y: &[Rational]) -> Result<BValue> {
    check_dim(dd, y)?;
    let n = dd.target_dim();
    if !contains(&dd.d.h(n), y)? || !in_image_plus_c(dd, y) {
        return Ok(BValue::NegInfinity);
    }
    let b = enumerate_vertices(&b_set(dd)?);
    if b.vertices.is_empty() {
        return Ok(BValue::PosInfinity);
    }
    let unbounded_below =
        b.rays.iter().any(|r| dot(r, y).is_negative()) || b.lines.iter().any(|l| !dot(l, y).is_zero());
    if unbounded_below {
        return Ok(BValue::NegInfinity);
    }
    let min = b.vertices.iter().map(|a| dot(a, y)).min().expect("nonempty");
    Ok(BValue::Finite(min))
}

/// Same value straight from the primal LP; used to cross-check [`b_value`].
pub fn b_value_primal(dd: &DualityData, y: &[Rational]) -> Result<BValue> {
    check_dim(dd, y)?;
    if !contains(&dd.d.h(dd.target_dim()), y)? {
        return Ok(BValue::NegInfinity);
    }
    Ok(match primal_lp(dd, y).maximize() {
        LpOutcome::Optimal { value, .. } => BValue::Finite(value),
        LpOutcome::Infeasible => BValue::NegInfinity,
        LpOutcome::Unbounded => BValue::PosInfinity,
    })
}

/// The `(e, 0)` evaluation point of the `<= e` problems.
pub fn le_e_point(e: i64) -> RationalVector {
    vec![int(e), Rational::zero()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_minus_is_self_dual_and_shaped() {
        let h = TargetCone::PlusMinus.h(2);
        assert!(contains(&h, &[int(1), int(-1)]).unwrap());
        assert!(!contains(&h, &[int(-1), int(0)]).unwrap());
        assert!(!contains(&h, &[int(0), int(1)]).unwrap());
        assert_eq!(TargetCone::PlusMinus.dual(), TargetCone::PlusMinus);
    }

    #[test]
    fn qmax_closed_and_generic_agree_small() {
        let inst = KisinInstance::new(3, 3, false).unwrap();
        let cone = cone_h(&inst, &Cone::QMax);
        let generic = a_set_generic(&inst, &cone, ConstraintMap::G);
        assert!(crate::polyhedra::same_set(&generic, &a_qmax(&inst, ConstraintMap::G)));
    }
}
