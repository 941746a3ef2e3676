//! Regularity classes of `mu` and the minimum of `<rho_w, mu>` over `S_d`.

use num_traits::Zero;
use serde::Serialize;

use crate::kisin_model::KisinInstance;
use crate::perm::{rho_w, Permutation};
use crate::rational::{dot, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityClass {
    pub mu: Vec<i64>,
    pub b_regular: bool,
    pub integrally_b_regular: bool,
    pub strongly_integrally_b_regular: bool,
}

/// `mu_i - mu_{i+1} <= b (mu_{d-i} - mu_{d-i+1})` for all `i`.
pub fn is_b_regular(mu: &[Rational], b: u64) -> bool {
    let d = mu.len();
    let b = int(b as i64);
    (1..d).all(|i| &mu[i - 1] - &mu[i] <= &b * (&mu[d - i - 1] - &mu[d - i]))
}

pub fn regularity(mu: &[i64], inst: &KisinInstance) -> RegularityClass {
    let d = mu.len();
    let b = inst.b as i64;
    let rat: Vec<Rational> = mu.iter().map(|&x| int(x)).collect();
    let b_regular = is_b_regular(&rat, inst.b);
    let total: i64 = mu.iter().sum();
    let integrally_b_regular = b_regular && total.rem_euclid(b - 1) == 0;
    let strong_gap = d < 2 || mu[d - 2] - mu[d - 1] <= b * (mu[0] - mu[1]) - d as i64 * (b * b - 1);
    RegularityClass {
        mu: mu.to_vec(),
        b_regular,
        integrally_b_regular,
        strongly_integrally_b_regular: integrally_b_regular && strong_gap,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMinimum {
    /// `min_w <rho_w, mu>`, which is `(b-1) min_w sum_i sum_n mu_i (d+1-i-w^n(i)) / b^n`.
    pub value: Rational,
    /// All minimizers, in the order of [`Permutation::all`].
    pub argmin: Vec<Permutation>,
}

pub fn min_over_permutations(mu: &[Rational], inst: &KisinInstance) -> PermutationMinimum {
    let values: Vec<(Permutation, Rational)> =
        Permutation::all(inst.d).into_iter().map(|w| (w.clone(), dot(&rho_w(&w, inst.b), mu))).collect();
    let value = values.iter().map(|(_, v)| v.clone()).min().unwrap_or_else(Rational::zero);
    let argmin = values.into_iter().filter(|(_, v)| *v == value).map(|(w, _)| w).collect();
    PermutationMinimum { value, argmin }
}
