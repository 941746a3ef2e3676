//! Closed-form lower and upper bounds for the three families of varieties.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::regularity::{min_over_permutations, regularity};
use super::witness::{witness_le_e, witness_le_mu};
use crate::error::{KisinError, Result};
use crate::kisin_model::cones::reg_normals;
use crate::kisin_model::{predicted_residue, KisinInstance, QPoint};
use crate::perm::two_rho_over;
use crate::polyhedra::{LinearProgram, LpOutcome, Sense};
use crate::rational::{fmt_rat, frac, int, unit, zeros, Rational, RationalVector};

/// The three dimension problems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// `X_{<= e}`.
    LeE(i64),
    /// `X_mu`.
    Mu(Vec<i64>),
    /// `X_{<= mu}`.
    LeMu(Vec<i64>),
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::LeE(_) => "le_e",
            Target::Mu(_) => "mu",
            Target::LeMu(_) => "le_mu",
        }
    }

    /// Parameter sanity: `e >= 0`, or `mu` of length `d` and nonincreasing.
    pub fn validate(&self, inst: &KisinInstance) -> Result<()> {
        match self {
            Target::LeE(e) if *e < 0 => Err(KisinError::InvalidInput(format!("e must be nonnegative, got {e}"))),
            Target::LeE(_) => Ok(()),
            Target::Mu(mu) | Target::LeMu(mu) => {
                if mu.len() != inst.d {
                    return Err(KisinError::DimensionMismatch { expected: inst.d, got: mu.len() });
                }
                if mu.windows(2).any(|w| w[0] < w[1]) {
                    return Err(KisinError::InvalidInput(format!("mu must be nonincreasing, got {mu:?}")));
                }
                Ok(())
            }
        }
    }

    pub fn params_json(&self, inst: &KisinInstance) -> serde_json::Value {
        let mut p = json!({ "d": inst.d, "b": inst.b, "h0": inst.h_zero });
        match self {
            Target::LeE(e) => p["e"] = json!(e),
            Target::Mu(mu) | Target::LeMu(mu) => p["mu"] = json!(mu),
        }
        p
    }
}

/// Floor division for a positive divisor.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// `-(d-1)^2 - (d-2)^2/4`.
pub fn le_mu_offset(d: usize) -> Rational {
    let d = d as i64;
    int(-(d - 1) * (d - 1)) - frac((d - 2) * (d - 2), 4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub inst: KisinInstance,
    pub target: Target,
    /// `None`: no lower bound is available for this target.
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    /// Sharper upper bound for `<= mu` when `b >= 1 + max(d, b0 - 1)`.
    pub refined_upper: Option<Rational>,
    /// `<= mu` lower bound with the sup taken over real `mu'` (integrality and
    /// divisibility dropped); reported for information only.
    pub relaxed_lower: Option<Rational>,
    /// The variety is empty (`X_mu` with `b - 1` not dividing the total).
    pub empty: bool,
    /// Predicted residue of the dimension modulo `b - 1` (`h != 0` only).
    pub residue: Option<i64>,
    /// Minimizers of `<rho_w, mu>` (`X_mu` only), as labels.
    pub argmin: Vec<String>,
    /// The `mu'` attaining the sup in the `<= mu` lower bound.
    pub maximizer: Option<Vec<i64>>,
    /// A lattice point realizing the lower bound.
    pub witness: Option<QPoint>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(inst: KisinInstance, target: Target) -> Self {
        BoundReport {
            inst,
            target,
            lower: None,
            upper: None,
            refined_upper: None,
            relaxed_lower: None,
            empty: false,
            residue: None,
            argmin: Vec::new(),
            maximizer: None,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let r = |x: &Option<Rational>| x.as_ref().map(fmt_rat);
        json!({
            "target": self.target.name(),
            "params": self.target.params_json(&self.inst),
            "lower": r(&self.lower),
            "upper": r(&self.upper),
            "refined_upper": r(&self.refined_upper),
            "relaxed_lower": r(&self.relaxed_lower),
            "empty": self.empty,
            "residue": self.residue,
            "argmin": self.argmin,
            "maximizer": self.maximizer,
            "witnesses": self.witness.as_ref().map(|q| json!({ "q": q.to_json() })),
            "notes": self.notes,
        })
    }
}

/// `floor(d^2/4)`.
pub fn quarter_square(d: usize) -> i64 {
    (d * d / 4) as i64
}

pub fn theorem_bounds(inst: &KisinInstance, target: &Target) -> Result<BoundReport> {
    target.validate(inst)?;
    let mut rep = BoundReport::new(*inst, target.clone());
    let d = inst.d;
    let b = inst.b as i64;
    let slack = int(inst.slack());
    match target {
        Target::LeE(e) => {
            let steps = floor_div(e - b + 2, b + 1);
            rep.lower = Some(int(quarter_square(d) * steps));
            if steps < 0 {
                rep.notes.push("lower bound is negative; 0 is also a valid lower bound since X_{<=e} is nonempty".into());
            }
            rep.upper = Some(slack + int(quarter_square(d) * e) / int(b + 1));
            rep.witness = Some(witness_le_e(inst, *e)?);
        }
        Target::Mu(mu) => {
            let total: i64 = mu.iter().sum();
            if total.rem_euclid(b - 1) != 0 {
                rep.empty = true;
                rep.notes.push(format!("b - 1 = {} does not divide the total {total}: X_mu is empty", b - 1));
                return Ok(rep);
            }
            if inst.h_zero {
                rep.notes.push("h = 0: the residue is only known up to a shift in 0..=d(d-1)/2".into());
            } else {
                rep.residue = Some(predicted_residue(inst, mu));
            }
            if inst.b >= inst.b0() {
                let rat: RationalVector = mu.iter().map(|&x| int(x)).collect();
                let m = min_over_permutations(&rat, inst);
                rep.upper = Some(slack + m.value);
                rep.argmin = m.argmin.iter().map(|w| w.label()).collect();
            } else {
                rep.notes.push(format!("upper bound needs b >= b0 = {}", inst.b0()));
            }
            rep.notes.push("no lower bound: its constants are not explicit".into());
        }
        Target::LeMu(mu) => {
            let rat: RationalVector = mu.iter().map(|&x| int(x)).collect();
            let two_rho = two_rho_over(d, inst.b);
            rep.upper = Some(&slack + crate::rational::dot(&two_rho, &rat));
            if inst.b as usize > d.max(inst.b0() as usize - 1) {
                let sup = dominated_sup(inst, mu, false).expect("mu itself averages to a regular point");
                rep.refined_upper = Some(&slack + sup);
            }
            rep.relaxed_lower = dominated_sup(inst, mu, true).map(|s| s + le_mu_offset(d));
            match strongly_regular_sup(inst, mu, 20_000_000) {
                SupSearch::Found { value, mu: best } => {
                    rep.lower = Some(value + le_mu_offset(d));
                    rep.witness = Some(witness_le_mu(inst, &best)?);
                    rep.maximizer = Some(best);
                }
                SupSearch::None => {
                    rep.notes.push("no strongly integrally regular mu' <= mu: the lower bound is -inf".into())
                }
                SupSearch::TooLarge => rep.notes.push("search for mu' <= mu too large: lower bound omitted".into()),
            }
        }
    }
    Ok(rep)
}

/// `sup <2 rho, mu'>/(b+1)` over real `mu' <= mu` (dominance, equal totals)
/// that are `b`-regular, and additionally satisfy the strong gap inequality
/// when `strong` is set. `None` when infeasible.
pub fn dominated_sup(inst: &KisinInstance, mu: &[i64], strong: bool) -> Option<Rational> {
    let d = inst.d;
    let b = inst.b as i64;
    let mut lp = LinearProgram::new(d);
    lp.objective = two_rho_over(d, inst.b);
    let mut prefix = zeros(d);
    let mut acc = 0;
    for k in 0..d {
        prefix[k] = int(1);
        acc += mu[k];
        let sense = if k + 1 == d { Sense::Eq } else { Sense::Le };
        lp.add(prefix.clone(), sense, int(acc));
    }
    for n in reg_normals(inst) {
        lp.add(n, Sense::Ge, Rational::zero());
    }
    if strong && d >= 2 {
        // b (mu_1 - mu_2) - (mu_{d-1} - mu_d) >= d (b^2 - 1)
        let mut row = zeros(d);
        row[0] += int(b);
        row[1] -= int(b);
        row[d - 2] -= int(1);
        row[d - 1] += int(1);
        if row.iter().all(Zero::is_zero) {
            lp.add(unit(d, 0), Sense::Ge, Rational::zero());
        } else {
            lp.add(row, Sense::Ge, int(d as i64 * (b * b - 1)));
        }
    }
    match lp.maximize() {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

pub enum SupSearch {
    Found { value: Rational, mu: Vec<i64> },
    None,
    TooLarge,
}

/// Exact `max <2 rho, mu'>/(b+1)` over integer `mu' <= mu` that are strongly
/// integrally `b`-regular, by enumerating nonincreasing integer vectors
/// (all entries lie in `[mu_d, mu_1]`). Ties go to the lexicographically
/// largest `mu'`.
pub fn strongly_regular_sup(inst: &KisinInstance, mu: &[i64], node_limit: u64) -> SupSearch {
    let d = inst.d;
    let b = inst.b as i64;
    let total: i64 = mu.iter().sum();
    if total.rem_euclid(b - 1) != 0 {
        return SupSearch::None;
    }
    let prefix: Vec<i64> = mu.iter().scan(0, |acc, &x| {
        *acc += x;
        Some(*acc)
    }).collect();
    struct Search<'a> {
        inst: &'a KisinInstance,
        prefix: &'a [i64],
        low: i64,
        cur: Vec<i64>,
        best: Option<(i64, Vec<i64>)>,
        nodes: u64,
        limit: u64,
    }
    impl Search<'_> {
        fn run(&mut self, k: usize, sum: i64) -> bool {
            self.nodes += 1;
            if self.nodes > self.limit {
                return false;
            }
            let d = self.cur.len();
            if k == d {
                let r = regularity(&self.cur, self.inst);
                if r.strongly_integrally_b_regular {
                    let v: i64 = self.cur.iter().enumerate().map(|(i, &x)| (d as i64 - 1 - 2 * i as i64) * x).sum();
                    if self.best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                        self.best = Some((v, self.cur.clone()));
                    }
                }
                return true;
            }
            let total = self.prefix[d - 1];
            let cap = if k == 0 { self.prefix[0] } else { self.cur[k - 1].min(self.prefix[k] - sum) };
            let rest = (d - k - 1) as i64;
            let mut x = cap;
            while x >= self.low {
                let remaining = total - sum - x;
                // The rest lies between rest * low and rest * x.
                if remaining > rest * x {
                    break;
                }
                if remaining >= rest * self.low && (k + 1 < d || remaining == 0) {
                    self.cur[k] = x;
                    if !self.run(k + 1, sum + x) {
                        return false;
                    }
                }
                x -= 1;
            }
            true
        }
    }
    let mut s = Search { inst, prefix: &prefix, low: mu[d - 1], cur: vec![0; d], best: None, nodes: 0, limit: node_limit };
    if !s.run(0, 0) {
        return SupSearch::TooLarge;
    }
    match s.best {
        Some((v, best)) => SupSearch::Found { value: Rational::new(v.into(), (b + 1).into()), mu: best },
        None => SupSearch::None,
    }
}
