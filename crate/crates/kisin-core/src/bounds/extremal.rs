//! Extremal points of `A_{Q_max,g,l}`: the vectors `rho_w`, the chains of
//! tight subsets `T_s(w)`, and the partial-sum bounds satisfied by vertices.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::duality::{a_qmax, ConstraintMap};
use crate::error::{KisinError, Result};
use crate::kisin_model::KisinInstance;
use crate::perm::{rho_w, Permutation};
use crate::polyhedra::enumerate_vertices;
use crate::rational::{int, lex_cmp, Rational, RationalVector};

/// `f_T(y) = (y_1 + ... + y_s) - b sum_{t in T} y_{d+1-t} - s(d-s) + b (sum T - s(s+1)/2)`, `s = |T|`.
pub fn f_t(inst: &KisinInstance, y: &[Rational], t: &[usize]) -> Rational {
    let d = inst.d;
    let s = t.len();
    let b = inst.b as i64;
    let head: Rational = y[..s].iter().sum();
    let mirrored: Rational = t.iter().map(|&x| y[d - x].clone()).sum();
    let shift: i64 = t.iter().map(|&x| x as i64).sum::<i64>() - (s * (s + 1) / 2) as i64;
    head - int(b) * mirrored - int((s * (d - s)) as i64) + int(b * shift)
}

/// `T_s(w) = {w*(1), ..., w*(s)}` for `s = 1..d-1`, each sorted.
pub fn chain_subsets(w: &Permutation) -> Vec<Vec<usize>> {
    let star = w.star();
    (1..w.d())
        .map(|s| {
            let mut t: Vec<usize> = (1..=s).map(|i| star.at(i)).collect();
            t.sort_unstable();
            t
        })
        .collect()
}

/// `f_T(rho_w) >= 0` for every proper nonempty `T`, with equality exactly on the chain `T_s(w)`.
pub fn chain_tightness_holds(inst: &KisinInstance, w: &Permutation) -> bool {
    let d = inst.d;
    let rho = rho_w(w, inst.b);
    let chain: BTreeSet<Vec<usize>> = chain_subsets(w).into_iter().collect();
    (1u32..(1 << d) - 1).all(|mask| {
        let t: Vec<usize> = (1..=d).filter(|k| mask & (1 << (k - 1)) != 0).collect();
        let v = f_t(inst, &rho, &t);
        if chain.contains(&t) {
            v.is_zero()
        } else {
            v.is_positive()
        }
    })
}

/// `-m(n-m) <= y_{m+1} + ... + y_n <= (n-m)(d-n)` for `0 <= m < n <= d`.
pub fn partial_sum_bounds_hold(d: usize, y: &[Rational]) -> bool {
    (0..d).all(|m| {
        (m + 1..=d).all(|n| {
            let s: Rational = y[m..n].iter().sum();
            s >= int(-((m * (n - m)) as i64)) && s <= int(((n - m) * (d - n)) as i64)
        })
    })
}

#[derive(Debug, Clone)]
pub struct ExtremalReport {
    pub inst: KisinInstance,
    /// Vertices of `A_{Q_max,g,l}`, sorted.
    pub vertices: Vec<RationalVector>,
    /// Each permutation with its `rho_w`.
    pub rho: Vec<(Permutation, RationalVector)>,
    /// Vertex set equals `{rho_w}`.
    pub matches: bool,
    /// Whether the region is bounded (no rays, no lines).
    pub bounded: bool,
    /// Permutations whose tight subsets are not exactly their chain.
    pub chain_failures: Vec<Permutation>,
    /// Every vertex satisfies the partial-sum bounds.
    pub partial_sums_ok: bool,
}

impl ExtremalReport {
    pub fn ok(&self) -> bool {
        self.matches && self.bounded && self.chain_failures.is_empty() && self.partial_sums_ok
    }
}

/// Enumerates the vertices of `A_{Q_max,g,l}` and matches them with the `rho_w`.
pub fn extremal_points_aqmax(inst: &KisinInstance) -> Result<ExtremalReport> {
    if inst.b < inst.b0() {
        return Err(KisinError::UnsupportedRegime(format!(
            "extremal points of A_(Qmax,g) are described for b >= b0 = {} (got b = {})",
            inst.b0(),
            inst.b
        )));
    }
    let v = enumerate_vertices(&a_qmax(inst, ConstraintMap::G));
    let rho: Vec<(Permutation, RationalVector)> =
        Permutation::all(inst.d).into_iter().map(|w| (w.clone(), rho_w(&w, inst.b))).collect();
    let mut expected: Vec<RationalVector> = rho.iter().map(|(_, r)| r.clone()).collect();
    expected.sort_by(|a, b| lex_cmp(a, b));
    expected.dedup();
    let chain_failures = rho.iter().filter(|(w, _)| !chain_tightness_holds(inst, w)).map(|(w, _)| w.clone()).collect();
    let partial_sums_ok = v.vertices.iter().all(|y| partial_sum_bounds_hold(inst.d, y));
    Ok(ExtremalReport {
        inst: *inst,
        matches: v.vertices == expected,
        bounded: v.rays.is_empty() && v.lines.is_empty(),
        vertices: v.vertices,
        rho,
        chain_failures,
        partial_sums_ok,
    })
}
