//! Cross-checks between the exact solver, the closed-form bounds and the
//! low-dimensional formulas.

use serde::Serialize;

use super::{dim_d2_closed, dim_d3_closed, dim_exact_with, dominated, top_rows, DimQuery, DimStatus, SolverConfig};
use crate::bounds::{theorem_bounds, Target};
use crate::error::Result;
use crate::kisin_model::{predicted_residue, KisinInstance};
use crate::rational::{fmt_rat, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// `e` ranges over `0..=e_max`.
    pub e_max: i64,
    /// `Mu` and `LeMu` targets range over nonincreasing `mu` with
    /// `mu_d = 0` and `mu_1 <= mu_spread`.
    pub mu_spread: i64,
    pub solver: SolverConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { e_max: 12, mu_spread: 10, solver: SolverConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub d: usize,
    pub b: u64,
    pub h0: bool,
    pub checks: Vec<CheckOutcome>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

struct Tally {
    outcome: CheckOutcome,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { outcome: CheckOutcome { name: name.into(), cases: 0, failure: None } }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.outcome.cases += 1;
        if !ok && self.outcome.failure.is_none() {
            self.outcome.failure = Some(describe());
        }
    }
}

/// Whether the bound interval `[lower, upper]` meets `[lo, hi]`.
fn compatible(lower: &Option<Rational>, upper: &Option<Rational>, lo: i64, hi: i64) -> bool {
    lower.as_ref().is_none_or(|l| *l <= int(hi)) && upper.as_ref().is_none_or(|u| int(lo) <= *u)
}

fn show(x: &Option<Rational>) -> String {
    x.as_ref().map_or_else(|| "-".into(), fmt_rat)
}

pub fn consistency_suite(inst: &KisinInstance, config: &SuiteConfig) -> Result<ConsistencyReport> {
    let d = inst.d;
    let b = inst.b as i64;
    let solve = |target: Target| -> Result<DimStatus> {
        Ok(dim_exact_with(&DimQuery::new(*inst, target)?, &config.solver)?.status)
    };

    let mut sandwich = Tally::new("sandwich");
    let mut congruence = Tally::new("congruence");
    let mut monotone = Tally::new("le_e_monotone");
    let mut periodic = Tally::new("d2_periodicity");
    let mut le_mu_max = Tally::new("le_mu_is_max_of_mu");
    let mut closed = Tally::new("closed_forms");

    // X_{<= e}.
    let mut le_e = Vec::new();
    for e in 0..=config.e_max + if d == 2 { b * b - 1 } else { 0 } {
        le_e.push(solve(Target::LeE(e))?);
    }
    for e in 0..=config.e_max {
        let status = le_e[e as usize];
        let r = theorem_bounds(inst, &Target::LeE(e))?;
        let (lo, hi) = (status.lower().expect("mu = 0 is feasible"), status.upper().expect("feasible"));
        sandwich.record(compatible(&r.lower, &r.upper, lo, hi), || {
            format!("le_e e={e}: [{lo},{hi}] vs bounds [{}, {}]", show(&r.lower), show(&r.upper))
        });
        if e > 0 {
            let prev = le_e[e as usize - 1].lower().expect("feasible");
            monotone.record(prev <= lo, || format!("e={e}: {lo} < {prev} at e-1"));
        }
        if d == 2 {
            let later = le_e[(e + b * b - 1) as usize].lower().expect("feasible");
            periodic.record(later == lo + b - 1, || format!("e={e}: {later} != {lo} + {}", b - 1));
        }
    }

    // X_mu and X_{<= mu} over a grid of mu normalized by mu_d = 0.
    let mut grid = Vec::new();
    super::nonincreasing(d, 0, config.mu_spread, &mut grid, &mut Vec::new());
    grid.retain(|mu| mu[d - 1] == 0);
    let mut mu_dims = std::collections::BTreeMap::new();
    for mu in &grid {
        let status = solve(Target::Mu(mu.clone()))?;
        mu_dims.insert(mu.clone(), status);
        if d == 2 {
            let c = dim_d2_closed(mu[0], mu[1], inst)?;
            closed.record(c == status.lower(), || format!("mu {mu:?}: closed {c:?} vs exact {:?}", status.lower()));
        }
        let Some(lo) = status.lower() else { continue };
        let hi = status.upper().expect("nonempty");
        let r = theorem_bounds(inst, &Target::Mu(mu.clone()))?;
        sandwich.record(compatible(&r.lower, &r.upper, lo, hi), || {
            format!("mu {mu:?}: [{lo},{hi}] vs bounds [{}, {}]", show(&r.lower), show(&r.upper))
        });
        if !inst.h_zero {
            let want = predicted_residue(inst, mu);
            congruence.record(lo.rem_euclid(b - 1) == want, || format!("mu {mu:?}: dim {lo}, residue {want}"));
        }
        if d == 3 {
            let c = dim_d3_closed([mu[0], mu[1], mu[2]], inst)?;
            if c.valid {
                closed.record(c.value == lo, || format!("mu {mu:?}: closed {} vs exact {lo}", c.value));
            }
        }
    }
    for mu in &grid {
        if mu.iter().sum::<i64>().rem_euclid(b - 1) != 0 {
            continue;
        }
        let status = solve(Target::LeMu(mu.clone()))?;
        // Reuse grid results where the dominated row was already solved.
        let mut best: Option<i64> = None;
        for t in top_rows(inst, &Target::LeMu(mu.clone())) {
            debug_assert!(dominated(&t, mu));
            let s = match mu_dims.get(&t) {
                Some(s) => *s,
                None => solve(Target::Mu(t.clone()))?,
            };
            if let Some(v) = s.lower() {
                best = Some(best.map_or(v, |x: i64| x.max(v)));
            }
        }
        le_mu_max.record(status.lower() == best, || format!("mu {mu:?}: le_mu {:?} vs max {best:?}", status.lower()));
        if let Some(lo) = status.lower() {
            let r = theorem_bounds(inst, &Target::LeMu(mu.clone()))?;
            let hi = status.upper().expect("nonempty");
            sandwich.record(compatible(&r.lower, &r.upper, lo, hi), || {
                format!("le_mu {mu:?}: [{lo},{hi}] vs bounds [{}, {}]", show(&r.lower), show(&r.upper))
            });
        }
    }

    let mut checks = vec![sandwich.outcome, congruence.outcome, monotone.outcome, le_mu_max.outcome];
    if d == 2 {
        checks.push(periodic.outcome);
    }
    if d == 2 || d == 3 {
        checks.push(closed.outcome);
    }
    Ok(ConsistencyReport { d, b: inst.b, h0: inst.h_zero, checks })
}
