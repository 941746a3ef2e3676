//! The cones of `E` (`Q`, `Q_min`, `Q_max`, `Q_w`, `D`) and of `R^d`
//! (`C`, `C*`, `Reg`), their graph descriptions, and dual membership through
//! admissible sums.

use num_traits::{One, Zero};

use super::{mu_from_q, s_t, KisinInstance, MuTriangle, QPoint};
use crate::error::Result;
use crate::perm::{all_admissible, level_tableau, losers_permutation, ord_tableau, OrdTableau, Permutation};
use crate::polyhedra::{DirectedGraph, HPolyhedron};
use crate::rational::{int, sum, unit, zeros, Rational, RationalVector};

/// Cone variants used by the duality layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cone {
    /// Jeux I, II and III.
    Q,
    /// Jeu I and equalities along diagonals.
    QMin,
    /// Jeux I and II.
    QMax,
    /// Level cone of `w` intersected with `D`.
    QW(Permutation),
}

#[derive(Debug, Clone)]
pub struct KisinCones {
    pub q: HPolyhedron,
    pub q_min: HPolyhedron,
    pub q_max: HPolyhedron,
    /// `C = {y_1 >= ... >= y_d}` in `R^d`.
    pub weyl: HPolyhedron,
    /// `b`-regular cone in `R^d`.
    pub reg: HPolyhedron,
}

fn diff(n: usize, plus: usize, minus: usize) -> RationalVector {
    let mut v = zeros(n);
    v[plus] += Rational::one();
    v[minus] -= Rational::one();
    v
}

/// Jeu I normals: `q_{i,j} - q_{i,j+1} >= 0`, `1 <= i <= j < d`.
pub fn jeu1_normals(inst: &KisinInstance) -> Vec<RationalVector> {
    let ix = inst.index();
    let n = ix.len();
    ix.cells()
        .filter(|&(_, j)| j < inst.d)
        .map(|(i, j)| diff(n, ix.pos(i, j), ix.pos(i, j + 1)))
        .collect()
}

/// Jeu II normals: `q_{i+1,j+1} - q_{i,j} >= 0`.
pub fn jeu2_normals(inst: &KisinInstance) -> Vec<RationalVector> {
    let ix = inst.index();
    let n = ix.len();
    ix.cells()
        .filter(|&(_, j)| j < inst.d)
        .map(|(i, j)| diff(n, ix.pos(i + 1, j + 1), ix.pos(i, j)))
        .collect()
}

/// Jeu III normals: `mu_{i,j} - mu_{i+1,j+1} >= 0` written in `q`.
pub fn jeu3_normals(inst: &KisinInstance) -> Vec<RationalVector> {
    let ix = inst.index();
    let m = inst.mu_matrix();
    ix.cells()
        .filter(|&(_, j)| j < inst.d)
        .map(|(i, j)| crate::rational::sub(&m[ix.pos(i, j)], &m[ix.pos(i + 1, j + 1)]))
        .collect()
}

fn homogeneous(dim: usize, ineqs: Vec<RationalVector>, eqs: Vec<RationalVector>) -> HPolyhedron {
    let mut h = HPolyhedron::new(dim);
    for a in ineqs {
        h.add_ge(a, Rational::zero());
    }
    for a in eqs {
        h.add_eq(a, Rational::zero());
    }
    h
}

/// `C = {y_1 >= ... >= y_d}`.
pub fn weyl_chamber(d: usize) -> HPolyhedron {
    homogeneous(d, (0..d.saturating_sub(1)).map(|k| diff(d, k, k + 1)).collect(), Vec::new())
}

/// Generators `e_i - e_{i+1}` of `C*`.
pub fn weyl_dual_generators(d: usize) -> Vec<RationalVector> {
    (0..d.saturating_sub(1)).map(|k| diff(d, k, k + 1)).collect()
}

/// `C* = {sum y = 0, y_1 + ... + y_s >= 0}`.
pub fn weyl_dual(d: usize) -> HPolyhedron {
    let partial = |s: usize| (0..d).map(|k| if k < s { Rational::one() } else { Rational::zero() }).collect();
    homogeneous(d, (1..d).map(partial).collect(), vec![vec![Rational::one(); d]])
}

/// Normals `b v_{d-i} - v_i` of `Reg` (`v_i = e_i - e_{i+1}`), `i = 1..d-1`.
pub fn reg_normals(inst: &KisinInstance) -> Vec<RationalVector> {
    let d = inst.d;
    let b = inst.b_rat();
    (1..d)
        .map(|i| {
            let v_i = diff(d, i - 1, i);
            let v_mirror = diff(d, d - i - 1, d - i);
            crate::rational::sub(&crate::rational::scale(&v_mirror, &b), &v_i)
        })
        .collect()
}

pub fn reg_cone(inst: &KisinInstance) -> HPolyhedron {
    homogeneous(inst.d, reg_normals(inst), Vec::new())
}

/// Diagonal equalities `q_{i,j} = q_{i+1,j+1}` (Jeu II').
pub fn jeu2_equalities(inst: &KisinInstance) -> Vec<RationalVector> {
    jeu2_normals(inst)
}

/// `D = {mu_{1,1} >= ... >= mu_{1,d}}` in `q`-coordinates.
pub fn d_cone(inst: &KisinInstance) -> HPolyhedron {
    let ix = inst.index();
    let m = inst.mu_matrix();
    let rows = (1..inst.d).map(|j| crate::rational::sub(&m[ix.pos(1, j)], &m[ix.pos(1, j + 1)])).collect();
    homogeneous(ix.len(), rows, Vec::new())
}

pub fn build_cones(inst: &KisinInstance) -> KisinCones {
    let n = inst.index().len();
    let (j1, j2, j3) = (jeu1_normals(inst), jeu2_normals(inst), jeu3_normals(inst));
    let q = homogeneous(n, j1.iter().chain(&j2).chain(&j3).cloned().collect(), Vec::new());
    let q_max = homogeneous(n, j1.iter().chain(&j2).cloned().collect(), Vec::new());
    let q_min = homogeneous(n, j1.clone(), jeu2_equalities(inst));
    KisinCones { q, q_min, q_max, weyl: weyl_chamber(inst.d), reg: reg_cone(inst) }
}

/// Cone whose level sets are the sets `I_s` of a tableau: equal values on a
/// level, nondecreasing from one level to the next.
pub fn tableau_cone(inst: &KisinInstance, t: &OrdTableau) -> HPolyhedron {
    let ix = inst.index();
    let n = ix.len();
    let d = inst.d;
    let mut reps: Vec<Option<usize>> = vec![None; d + 1];
    let mut eqs = Vec::new();
    for (i, j) in ix.cells() {
        let s = t.get(i, j);
        match reps[s] {
            None => reps[s] = Some(ix.pos(i, j)),
            Some(r) => eqs.push(diff(n, r, ix.pos(i, j))),
        }
    }
    let levels: Vec<usize> = reps.iter().flatten().copied().collect();
    let ineqs = levels.windows(2).map(|w| diff(n, w[1], w[0])).collect();
    homogeneous(n, ineqs, eqs)
}

/// `Q'_w`: the level cone of the tableau with level sets `I_s(w)`.
pub fn q_w_prime(inst: &KisinInstance, w: &Permutation) -> HPolyhedron {
    tableau_cone(inst, &level_tableau(w))
}

/// `Q_w = Q'_w ∩ D`.
pub fn q_w(inst: &KisinInstance, w: &Permutation) -> HPolyhedron {
    q_w_prime(inst, w).intersect(&d_cone(inst))
}

pub fn cone_h(inst: &KisinInstance, cone: &Cone) -> HPolyhedron {
    match cone {
        Cone::Q => build_cones(inst).q,
        Cone::QMin => build_cones(inst).q_min,
        Cone::QMax => build_cones(inst).q_max,
        Cone::QW(w) => q_w(inst, w),
    }
}

/// Whether `q` satisfies Jeux I, II and III.
pub fn in_q(q: &QPoint) -> bool {
    let d = q.inst.d;
    let m = mu_from_q(q);
    q.inst.index().cells().filter(|&(_, j)| j < d).all(|(i, j)| {
        q.get(i, j) >= q.get(i, j + 1) && q.get(i, j) <= q.get(i + 1, j + 1) && m.get(i, j) >= m.get(i + 1, j + 1)
    })
}

/// Whether every Jeu inequality is strict.
pub fn in_q_interior(q: &QPoint) -> bool {
    let d = q.inst.d;
    let m = mu_from_q(q);
    q.inst.index().cells().filter(|&(_, j)| j < d).all(|(i, j)| {
        q.get(i, j) > q.get(i, j + 1) && q.get(i, j) < q.get(i + 1, j + 1) && m.get(i, j) > m.get(i + 1, j + 1)
    })
}

/// `mu`-coordinate form of the cone: `mu_{i-1,j} <= mu_{i,j} <= mu_{i-1,j-1}`
/// for `2 <= i <= j <= d`, and `q_{i-1,j-1} <= q_{i,j}` through the inverse transform.
pub fn mu_system_holds(m: &MuTriangle) -> bool {
    let d = m.inst.d;
    let q = super::q_from_mu(m);
    for i in 2..=d {
        for j in i..=d {
            if m.get(i - 1, j) > m.get(i, j) || m.get(i, j) > m.get(i - 1, j - 1) {
                return false;
            }
            if q.get(i - 1, j - 1) > q.get(i, j) {
                return false;
            }
        }
    }
    true
}

/// Graph of `Q_max` (or `Q_min` with `min = true`) on the cells of `I`:
/// an edge `x -> y` encodes `q_y <= q_x`.
pub fn jeux_graph(inst: &KisinInstance, min: bool) -> DirectedGraph {
    let ix = inst.index();
    let mut edges = Vec::new();
    for (i, j) in ix.cells() {
        if j < inst.d {
            edges.push((ix.pos(i, j), ix.pos(i, j + 1)));
            edges.push((ix.pos(i + 1, j + 1), ix.pos(i, j)));
            if min {
                edges.push((ix.pos(i, j), ix.pos(i + 1, j + 1)));
            }
        }
    }
    DirectedGraph { n: ix.len(), edges }
}

/// Graph of `Q'_w`: an edge `x -> y` whenever `ord(x) >= ord(y)`.
pub fn tableau_graph(inst: &KisinInstance, t: &OrdTableau) -> DirectedGraph {
    let ix = inst.index();
    let cells: Vec<(usize, usize)> = ix.cells().collect();
    let mut edges = Vec::new();
    for (a, &x) in cells.iter().enumerate() {
        for (c, &y) in cells.iter().enumerate() {
            if a != c && t.get(x.0, x.1) >= t.get(y.0, y.1) {
                edges.push((a, c));
            }
        }
    }
    DirectedGraph { n: ix.len(), edges }
}

/// Dual membership through admissible sums: `x in Q_max*` iff `S_I(x) = 0` and
/// `S_T(x) <= 0` for every `T`; for `Q_min*` only the bands `T = {1..s}` count.
pub fn qdual_membership(inst: &KisinInstance, x: &[Rational], min: bool) -> Result<bool> {
    let d = inst.d;
    if !sum(x).is_zero() {
        return Ok(false);
    }
    for j in all_admissible(d) {
        let is_band = j.t.iter().enumerate().all(|(k, &t)| t == k + 1);
        if min && !is_band {
            continue;
        }
        if s_t(inst, x, &j.t)? > Rational::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chain `w_1 = v, w_{i+1} = losers(w_i)` and `check(w)_i(j) = w_i^{-1}(d+2-i-j)`.
pub fn checked_chain(v: &Permutation) -> Vec<Vec<usize>> {
    let d = v.d();
    let mut out = Vec::with_capacity(d);
    let mut wi = v.clone();
    for i in 1..=d {
        let inv = wi.inverse();
        out.push((1..=d + 1 - i).map(|j| inv.at(d + 2 - i - j)).collect());
        if i < d {
            wi = losers_permutation(&wi).expect("size at least 2");
        }
    }
    out
}

/// For the greedy tableau of `v` and level values `q_1 <= ... <= q_d`, the
/// triangle `mu_{i,j} = b q_{check(v)_i(j-i+1)+i-1} - q_j`.
pub fn mu_from_levels(inst: &KisinInstance, v: &Permutation, levels: &[Rational]) -> MuTriangle {
    let chain = checked_chain(v);
    let b = inst.b_rat();
    MuTriangle::from_fn(*inst, |i, j| {
        let k = chain[i - 1][j - i] + i - 1;
        &b * &levels[k - 1] - &levels[j - 1]
    })
}

/// The point of the greedy tableau cone of `v` with the given level values.
pub fn q_from_levels(inst: &KisinInstance, v: &Permutation, levels: &[Rational]) -> QPoint {
    let t = ord_tableau(v);
    QPoint::from_fn(*inst, |i, j| levels[t.get(i, j) - 1].clone())
}

/// Interior point of `Q`: `q_{i,j} = (2b-1) c i - 2(b-1) c j`.
pub fn interior_point(inst: &KisinInstance, c: i64) -> QPoint {
    let b = inst.b as i64;
    QPoint::from_fn(*inst, |i, j| int((2 * b - 1) * c * i as i64 - 2 * (b - 1) * c * j as i64))
}

/// Unit vector helper on `E`.
pub fn cell_unit(inst: &KisinInstance, i: usize, j: usize) -> RationalVector {
    let ix = inst.index();
    unit(ix.len(), ix.pos(i, j))
}
