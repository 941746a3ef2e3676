//! Shared generators for the integration tests.
#![allow(dead_code)]

use kisin_core::kisin_model::cones::{in_q_interior, interior_point};
use kisin_core::rational::{frac, int};
use kisin_core::{KisinInstance, QPoint, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut impl Rng, span: i64, den: i64) -> Rational {
    frac(rng.random_range(-span..=span), rng.random_range(1..=den))
}

pub fn random_qpoint(rng: &mut impl Rng, inst: KisinInstance) -> QPoint {
    let n = inst.index().len();
    QPoint::new(inst, (0..n).map(|_| random_rational(rng, 50, 7)).collect()).unwrap()
}

/// Interior point of `Q` lying in the lattice `R`: the base point
/// `q_{i,j} = c((2b-1)i - 2(b-1)j)` plus `(1/b)Z` noise (integral noise on the
/// last column), rejecting until every Jeu is strict.
pub fn random_interior_lattice_point(rng: &mut impl Rng, inst: KisinInstance) -> QPoint {
    let b = inst.b as i64;
    let d = inst.d;
    loop {
        let c = rng.random_range(2..=4i64);
        let base = interior_point(&inst, c);
        let noise_span = c.max(1);
        let values = inst
            .index()
            .cells()
            .map(|(i, j)| {
                let noise = if j == d {
                    int(rng.random_range(-noise_span / 2..=noise_span / 2))
                } else {
                    frac(rng.random_range(-noise_span * b / 2..=noise_span * b / 2), b)
                };
                base.get(i, j) + noise
            })
            .collect();
        let q = QPoint::new(inst, values).unwrap();
        if in_q_interior(&q) && q.in_lattice() {
            return q;
        }
    }
}

/// Random strongly integrally `b`-regular `mu` (rejection sampling on the gaps).
pub fn random_strongly_regular(rng: &mut impl Rng, inst: &KisinInstance) -> Vec<i64> {
    use kisin_core::bounds::regularity;
    let d = inst.d;
    let b = inst.b as i64;
    let span = (d as i64) * (b * b - 1) * 2 + 10;
    loop {
        let mut mu = vec![0i64; d];
        mu[d - 1] = rng.random_range(-20..=20);
        for k in (0..d - 1).rev() {
            mu[k] = mu[k + 1] + rng.random_range(0..=span);
        }
        // fix the total modulo b - 1 by moving the first entry up
        let r = mu.iter().sum::<i64>().rem_euclid(b - 1);
        if r != 0 {
            mu[0] += b - 1 - r;
        }
        if regularity(&mu, inst).strongly_integrally_b_regular {
            return mu;
        }
    }
}

/// Random nonincreasing integer vector with entries in `[low, low + spread]`.
pub fn random_sorted(rng: &mut impl Rng, d: usize, low: i64, spread: i64) -> Vec<i64> {
    let mut mu: Vec<i64> = (0..d).map(|_| low + rng.random_range(0..=spread)).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    mu
}
