//! Piecewise-affine functions `phi_i` (slope `b`) and `psi_j` (slope `1/b`)
//! attached to a point of `Q`, the conditions they satisfy, and the readback
//! of the coordinates from the functions alone.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::cones::in_q;
use super::{mu_from_q, KisinInstance, MuTriangle, QPoint};
use crate::error::{KisinError, Result};
use crate::rational::{fmt_rat, Rational};

/// `x -> values[k] + slope (x - starts[k])` on `[starts[k], starts[k+1])`,
/// `-inf` before `starts[0]`. Zero-length pieces are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseAffine {
    pub slope: Rational,
    pub starts: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl PiecewiseAffine {
    fn piece(&self, x: &Rational) -> Option<usize> {
        if self.starts.is_empty() || *x < self.starts[0] {
            return None;
        }
        Some(self.starts.partition_point(|s| s <= x) - 1)
    }

    /// `None` stands for `-inf`.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        self.piece(x).map(|k| &self.values[k] + &self.slope * (x - &self.starts[k]))
    }

    /// Limit from the left at `starts[k]` (`None` for `k = 0`).
    pub fn left_limit(&self, k: usize) -> Option<Rational> {
        (k > 0).then(|| &self.values[k - 1] + &self.slope * (&self.starts[k] - &self.starts[k - 1]))
    }

    /// Smallest `x` with `f(x) >= target`; exists because the last piece is unbounded.
    pub fn preimage_ge(&self, target: &Rational) -> Rational {
        let n = self.starts.len();
        for k in 0..n {
            if *target <= self.values[k] {
                return self.starts[k].clone();
            }
            let reaches_later = k + 1 < n && self.left_limit(k + 1).is_some_and(|l| *target >= l);
            if !reaches_later {
                return &self.starts[k] + (target - &self.values[k]) / &self.slope;
            }
        }
        unreachable!("empty piecewise function")
    }

    /// Half-open segments `(c, start, end)` on lines `value = slope x + c`, in
    /// the coordinates of `(x, f(x))`; `end = None` for the unbounded piece.
    fn segments(&self) -> Vec<(Rational, Rational, Option<Rational>)> {
        let n = self.starts.len();
        (0..n)
            .map(|k| {
                let c = &self.values[k] - &self.slope * &self.starts[k];
                (c, self.starts[k].clone(), self.starts.get(k + 1).cloned())
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiFunctions {
    pub inst: KisinInstance,
    /// `phi[i-1]`: starts `q_{i,d} <= ... <= q_{i,i}`, values `mu_{i,d}, ..., mu_{i,i}`.
    pub phi: Vec<PiecewiseAffine>,
    /// `psi[j-1]`: starts `mu_{1,j} <= ... <= mu_{j,j}`, values `q_{1,j}, ..., q_{j,j}`.
    pub psi: Vec<PiecewiseAffine>,
}

/// Builds the functions of a point of `Q`.
pub fn phi_from_q(q: &QPoint) -> Result<PhiFunctions> {
    if !in_q(q) {
        return Err(KisinError::NotInCone(format!("{:?}", q.values.iter().map(fmt_rat).collect::<Vec<_>>())));
    }
    let inst = q.inst;
    let d = inst.d;
    let m = mu_from_q(q);
    let b = inst.b_rat();
    let phi = (1..=d)
        .map(|i| PiecewiseAffine {
            slope: b.clone(),
            starts: (i..=d).rev().map(|j| q.get(i, j).clone()).collect(),
            values: (i..=d).rev().map(|j| m.get(i, j).clone()).collect(),
        })
        .collect();
    let psi = (1..=d)
        .map(|j| PiecewiseAffine {
            slope: Rational::one() / &b,
            starts: (1..=j).map(|i| m.get(i, j).clone()).collect(),
            values: (1..=j).map(|i| q.get(i, j).clone()).collect(),
        })
        .collect();
    Ok(PhiFunctions { inst, phi, psi })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiReport {
    /// Condition 1: `phi_1 >= ... >= phi_d`.
    pub decreasing: bool,
    /// Condition 2: every function increasing.
    pub increasing: bool,
    /// Condition 3: last piece of `phi_i` is `b x - q_{i,d}` (and `psi_j` its inverse).
    pub asymptotics: bool,
    /// Condition 4: the graphs of the `phi` and of the `psi` cover the same segments.
    pub matching: bool,
    /// Readback reproduces the coordinates the functions were built from.
    pub roundtrip: bool,
}

impl PhiReport {
    pub fn ok(&self) -> bool {
        self.decreasing && self.increasing && self.asymptotics && self.matching && self.roundtrip
    }
}

fn increasing(f: &PiecewiseAffine) -> bool {
    f.starts.windows(2).all(|w| w[0] <= w[1])
        && (1..f.starts.len()).all(|k| f.left_limit(k).is_some_and(|l| l <= f.values[k]))
}

fn pointwise_ge(f: &PiecewiseAffine, g: &PiecewiseAffine) -> bool {
    // Equal slopes: f - g is piecewise constant, right-continuous, so testing
    // breakpoints suffices once the domains are nested.
    if f.starts[0] > g.starts[0] {
        return false;
    }
    f.starts.iter().chain(&g.starts).filter(|x| **x >= g.starts[0]).all(|x| match (f.eval(x), g.eval(x)) {
        (Some(a), Some(b)) => a >= b,
        _ => false,
    })
}

type Events = BTreeMap<Rational, BTreeMap<Rational, i64>>;

fn add_segment(events: &mut Events, unbounded: &mut BTreeMap<Rational, i64>, c: Rational, start: Rational, end: Option<Rational>, sign: i64) {
    if end.as_ref() == Some(&start) {
        return;
    }
    let e = events.entry(c.clone()).or_default();
    *e.entry(start).or_default() += sign;
    match end {
        Some(x) => *e.entry(x).or_default() -= sign,
        None => *unbounded.entry(c).or_default() += sign,
    }
}

fn matching(p: &PhiFunctions) -> bool {
    let b = p.inst.b_rat();
    let mut events = Events::new();
    let mut unbounded = BTreeMap::new();
    for f in &p.phi {
        for (c, s, e) in f.segments() {
            add_segment(&mut events, &mut unbounded, c, s, e, 1);
        }
    }
    for g in &p.psi {
        let n = g.starts.len();
        for k in 0..n {
            // psi piece: q = v_k + (mu - s_k)/b, i.e. mu = b q + (s_k - b v_k),
            // for q in [v_k, v_k + (s_{k+1} - s_k)/b).
            let c = &g.starts[k] - &b * &g.values[k];
            let end = g.starts.get(k + 1).map(|s| &g.values[k] + (s - &g.starts[k]) / &b);
            add_segment(&mut events, &mut unbounded, c, g.values[k].clone(), end, -1);
        }
    }
    events.values().all(|e| e.values().all(|v| *v == 0)) && unbounded.values().all(|v| *v == 0)
}

/// `inf {x : g(f(x)) >= x}` for increasing `f`, `g` with slopes multiplying to 1.
fn fixed_threshold(f: &PiecewiseAffine, g: &PiecewiseAffine) -> Rational {
    let mut candidates: Vec<Rational> = f.starts.clone();
    candidates.extend(g.starts.iter().map(|s| f.preimage_ge(s)));
    candidates.sort();
    candidates.dedup();
    for x in &candidates {
        if let Some(y) = f.eval(x) {
            if g.eval(&y).is_some_and(|z| z >= *x) {
                return x.clone();
            }
        }
    }
    // g(f(x)) - x is eventually constant and nonnegative on valid data.
    candidates.last().cloned().unwrap_or_else(Rational::zero)
}

/// Reads `q_{i,j} = inf {x : psi_j(phi_i(x)) >= x}` and
/// `mu_{i,j} = inf {y : phi_i(psi_j(y)) >= y}` back from the functions.
pub fn read_back(p: &PhiFunctions) -> (QPoint, MuTriangle) {
    let q = QPoint::from_fn(p.inst, |i, j| fixed_threshold(&p.phi[i - 1], &p.psi[j - 1]));
    let m = MuTriangle::from_fn(p.inst, |i, j| fixed_threshold(&p.psi[j - 1], &p.phi[i - 1]));
    (q, m)
}

/// Checks conditions 1 to 4 and, against `source`, the readback identity.
pub fn validate_phi(p: &PhiFunctions, source: &QPoint) -> PhiReport {
    let d = p.inst.d;
    let b = p.inst.b_rat();
    let decreasing = (1..d).all(|i| pointwise_ge(&p.phi[i - 1], &p.phi[i]));
    let increasing = p.phi.iter().chain(&p.psi).all(increasing);
    let asymptotics = (1..=d).all(|i| {
        let f = &p.phi[i - 1];
        let k = f.starts.len() - 1;
        let q_id = source.get(i, d);
        let phi_ok = &f.values[k] - &b * &f.starts[k] == -q_id.clone();
        let g = &p.psi[i - 1];
        let k = g.starts.len() - 1;
        let psi_ok = &g.values[k] - &g.starts[k] / &b == q_id / &b;
        phi_ok && psi_ok
    });
    let matching = matching(p);
    let (q, m) = read_back(p);
    let roundtrip = q == *source && m == mu_from_q(source);
    PhiReport { decreasing, increasing, asymptotics, matching, roundtrip }
}
