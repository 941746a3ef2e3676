//! Explicit lattice points realizing the lower bounds, with mechanical
//! verification of everything they are supposed to satisfy.

use num_traits::Zero;
use serde::Serialize;

use super::regularity::regularity;
use super::theorems::{floor_div, le_mu_offset};
use crate::error::{KisinError, Result};
use crate::kisin_model::cones::in_q;
use crate::kisin_model::{dim_phi, mu_from_q, KisinInstance, QPoint};
use crate::perm::two_rho_over;
use crate::rational::{ceil, dot, fmt_rat, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub in_q: bool,
    pub in_lattice: bool,
    /// The image constraint of the problem the witness is meant for.
    pub image_ok: bool,
    #[serde(serialize_with = "ser_rat")]
    pub objective: Rational,
    pub objective_ok: bool,
}

fn ser_rat<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(x))
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.in_q && self.in_lattice && self.image_ok && self.objective_ok
    }
}

/// The integer `n` of the `<= e` construction, clamped at 0 so that the
/// point stays in the cone.
pub fn le_e_steps(inst: &KisinInstance, e: i64) -> i64 {
    let b = inst.b as i64;
    floor_div(e - b + 2, b + 1).max(0)
}

/// `q_{i,j} = (m + b n)/(b-1)` near the diagonal (`j - i < d/2`) and
/// `(m + n)/(b-1)` beyond, with `m = (-n) mod (b-1)`.
pub fn witness_le_e(inst: &KisinInstance, e: i64) -> Result<QPoint> {
    if e < 0 {
        return Err(KisinError::InvalidInput(format!("e must be nonnegative, got {e}")));
    }
    let b = inst.b as i64;
    let n = le_e_steps(inst, e);
    let m = (-n).rem_euclid(b - 1);
    let near = int((m + b * n) / (b - 1));
    let far = int((m + n) / (b - 1));
    let d = inst.d;
    Ok(QPoint::from_fn(*inst, |i, j| if 2 * (j - i) < d { near.clone() } else { far.clone() }))
}

pub fn verify_witness_le_e(inst: &KisinInstance, e: i64, q: &QPoint) -> Result<WitnessCheck> {
    let m = mu_from_q(q);
    let d = inst.d;
    let objective = dim_phi(q)?;
    let expected = int((d * d / 4) as i64 * le_e_steps(inst, e));
    Ok(WitnessCheck {
        in_q: in_q(q),
        in_lattice: q.in_lattice(),
        image_ok: *m.get(1, 1) <= int(e) && *m.get(1, d) >= Rational::zero(),
        objective_ok: objective == expected,
        objective,
    })
}

/// `q'_i = (mu_i + b mu_{d+1-i}) / (b^2 - 1)`.
pub fn q_prime(inst: &KisinInstance, mu: &[i64]) -> Vec<Rational> {
    let d = inst.d;
    let b = inst.b as i64;
    (1..=d).map(|i| Rational::new((mu[i - 1] + b * mu[d - i]).into(), (b * b - 1).into())).collect()
}

/// Rounds `q'` up in the first `d-1` places and balances the total on `q_d`,
/// then spreads `q_k` along the diagonal `j - i = d - k`.
pub fn witness_le_mu(inst: &KisinInstance, mu: &[i64]) -> Result<QPoint> {
    let d = inst.d;
    if mu.len() != d {
        return Err(KisinError::DimensionMismatch { expected: d, got: mu.len() });
    }
    if !regularity(mu, inst).strongly_integrally_b_regular {
        return Err(KisinError::InvalidInput(format!("{mu:?} is not strongly integrally {}-regular", inst.b)));
    }
    let b = inst.b as i64;
    let qp = q_prime(inst, mu);
    let mut q: Vec<Rational> = qp[..d - 1].iter().map(|x| Rational::from_integer(ceil(x))).collect();
    let total = int(mu.iter().sum::<i64>() / (b - 1));
    let head: Rational = q.iter().sum();
    q.push(total - head);
    Ok(QPoint::from_fn(*inst, |i, j| q[d - (j - i) - 1].clone()))
}

pub fn verify_witness_le_mu(inst: &KisinInstance, mu: &[i64], q: &QPoint) -> Result<WitnessCheck> {
    let m = mu_from_q(q);
    let d = inst.d;
    let top = m.top_row();
    let mut image_ok = true;
    let (mut a, mut c) = (Rational::zero(), Rational::zero());
    for k in 0..d {
        a += &top[k];
        c += int(mu[k]);
        image_ok &= a <= c;
    }
    image_ok &= a == c;
    let objective = dim_phi(q)?;
    let mu_rat: Vec<Rational> = mu.iter().map(|&x| int(x)).collect();
    let target = dot(&two_rho_over(d, inst.b), &mu_rat) + le_mu_offset(d);
    Ok(WitnessCheck {
        in_q: in_q(q),
        in_lattice: q.in_lattice(),
        image_ok,
        objective_ok: objective >= target,
        objective,
    })
}
