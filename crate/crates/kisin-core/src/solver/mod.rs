//! Exact dimensions by lattice-point optimization in `mu`-coordinates, the
//! closed forms in dimensions 2 and 3, and cross-checks between the methods.

mod closed;
mod search;
mod suite;

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::duality::{a_qmax, ConstraintMap};
use crate::bounds::Target;
use crate::error::{KisinError, Result};
use crate::kisin_model::cones::{in_q, mu_system_holds};
use crate::kisin_model::{dim_phi_mu, predicted_residue, q_from_mu, KisinInstance, MuTriangle};
use crate::perm::two_rho_over;
use crate::polyhedra::enumerate_vertices;
use crate::rational::{int, lcm_denominators, rat_to_i64, to_i64, Rational, RationalVector};

pub use closed::{dim_d2_closed, dim_d3_closed, D3Closed};
pub use suite::{consistency_suite, CheckOutcome, ConsistencyReport, SuiteConfig};

use search::{RowSearch, Shared};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "KISIN_DIM_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimQuery {
    pub inst: KisinInstance,
    pub target: Target,
}

impl DimQuery {
    pub fn new(inst: KisinInstance, target: Target) -> Result<Self> {
        target.validate(&inst)?;
        Ok(DimQuery { inst, target })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "target": self.target.name(), "params": self.target.params_json(&self.inst) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimStatus {
    Exact(i64),
    /// `h = 0`: `[max dim(phi), max dim(phi) + d(d-1)/2]`.
    Interval(i64, i64),
    Empty,
}

impl DimStatus {
    /// The optimal `dim(phi)`, i.e. the exact value or the lower end.
    pub fn lower(&self) -> Option<i64> {
        match *self {
            DimStatus::Exact(n) | DimStatus::Interval(n, _) => Some(n),
            DimStatus::Empty => None,
        }
    }

    pub fn upper(&self) -> Option<i64> {
        match *self {
            DimStatus::Exact(n) | DimStatus::Interval(_, n) => Some(n),
            DimStatus::Empty => None,
        }
    }
}

/// Re-verification of the returned optimizer through the `q`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveChecks {
    pub in_q: bool,
    pub in_lattice: bool,
    /// `dim_phi` of the witness reproduces the reported value.
    pub dim_phi: bool,
    /// The witness top row satisfies the target constraint.
    pub top_row: bool,
    /// Residue of the dimension against `-(sum_i i mu_i) mod (b-1)`; only for `Mu` with `h != 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<bool>,
    pub nodes: u64,
    pub top_rows: usize,
}

impl SolveChecks {
    pub fn ok(&self) -> bool {
        self.in_q && self.in_lattice && self.dim_phi && self.top_row && self.congruence != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimResult {
    pub query: DimQuery,
    pub status: DimStatus,
    pub witness: Option<MuTriangle>,
    pub checks: Option<SolveChecks>,
}

impl DimResult {
    pub fn to_json(&self) -> serde_json::Value {
        let (status, dim) = match self.status {
            DimStatus::Exact(n) => ("exact", json!(n)),
            DimStatus::Interval(lo, hi) => ("interval", json!([lo, hi])),
            DimStatus::Empty => ("empty", serde_json::Value::Null),
        };
        json!({
            "query": self.query.to_json(),
            "status": status,
            "dim": dim,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
            "checks": self.checks,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of search nodes before refusing.
    pub node_budget: u64,
    /// Worker threads; `None` reads [`THREADS_ENV`], else rayon's default.
    pub threads: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: 200_000_000, threads: None }
    }
}

impl SolverConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SolverConfig { node_budget, ..Default::default() }
    }

    fn thread_count(&self) -> Option<usize> {
        self.threads
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
            .filter(|&n| n > 0)
    }
}

/// Nonincreasing integer vectors of length `len` with entries in `[low, high]`.
fn nonincreasing(len: usize, low: i64, high: i64, out: &mut Vec<Vec<i64>>, prefix: &mut Vec<i64>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    let cap = prefix.last().copied().unwrap_or(high);
    for v in low..=cap {
        prefix.push(v);
        nonincreasing(len, low, high, out, prefix);
        prefix.pop();
    }
}

/// Whether `lower` is below `upper` in the dominance order (partial sums
/// bounded, equal totals).
pub fn dominated(lower: &[i64], upper: &[i64]) -> bool {
    let (mut a, mut c) = (0i64, 0i64);
    for (x, y) in lower.iter().zip(upper) {
        a += x;
        c += y;
        if a > c {
            return false;
        }
    }
    a == c
}

/// Candidate top rows of a target, before any search.
pub fn top_rows(inst: &KisinInstance, target: &Target) -> Vec<Vec<i64>> {
    let d = inst.d;
    let m = inst.b as i64 - 1;
    let mut all = Vec::new();
    match target {
        Target::Mu(mu) => {
            if mu.iter().sum::<i64>().rem_euclid(m) == 0 {
                all.push(mu.clone());
            }
        }
        Target::LeMu(mu) => {
            if mu.iter().sum::<i64>().rem_euclid(m) == 0 {
                nonincreasing(d, mu[d - 1], mu[0], &mut all, &mut Vec::new());
                all.retain(|t| dominated(t, mu));
            }
        }
        Target::LeE(e) => {
            nonincreasing(d, 0, *e, &mut all, &mut Vec::new());
            all.retain(|t| t.iter().sum::<i64>().rem_euclid(m) == 0);
        }
    }
    all
}

fn top_row_ok(target: &Target, top: &[i64], b: u64) -> bool {
    let m = b as i64 - 1;
    let sorted = top.windows(2).all(|w| w[0] >= w[1]);
    let divisible = top.iter().sum::<i64>().rem_euclid(m) == 0;
    sorted
        && divisible
        && match target {
            Target::Mu(mu) => top == &mu[..],
            Target::LeMu(mu) => dominated(top, mu),
            Target::LeE(e) => top.first().is_none_or(|&x| x <= *e) && top.last().is_none_or(|&x| x >= 0),
        }
}

/// An integer linear form `numerators / denominator` in the top row.
struct TopForm {
    numerators: Vec<i128>,
    denominator: i128,
}

/// Linear forms bounding `dim(phi)` from above in terms of the top row:
/// `<2 rho, mu>` (each lower cell is at least the top cell of its column)
/// and `<y, mu>` for the vertices `y` of `A_{Qmax, g}`, which lies inside
/// `A_{Q, g}` since `Q` is contained in `Q_max`.
fn top_row_bounds(inst: &KisinInstance) -> Vec<TopForm> {
    let mut forms: Vec<RationalVector> =
        vec![two_rho_over(inst.d, inst.b).iter().map(|x| x * int(inst.b as i64 + 1)).collect()];
    if inst.d > 1 {
        forms.extend(enumerate_vertices(&a_qmax(inst, ConstraintMap::G)).vertices);
    }
    forms
        .into_iter()
        .map(|f| {
            let den = lcm_denominators(&f);
            TopForm {
                numerators: f.iter().map(|x| to_i64(&(x * Rational::from_integer(den.clone())).to_integer()) as i128).collect(),
                denominator: to_i64(&den) as i128,
            }
        })
        .collect()
}

fn top_row_bound(forms: &[TopForm], top: &[i64]) -> i64 {
    forms
        .iter()
        .map(|f| {
            let n: i128 = f.numerators.iter().zip(top).map(|(a, &t)| a * t as i128).sum();
            n.div_euclid(f.denominator) as i64
        })
        .min()
        .expect("at least one form")
}

static SELF_TESTED: OnceLock<Mutex<BTreeSet<u64>>> = OnceLock::new();

/// Exhaustive comparison, on a small box of integer triangles for `d = 2, 3`,
/// of the `mu`-coordinate constraint system against the `q`-coordinate Jeux.
pub fn mu_system_self_test(b: u64) -> Result<()> {
    let done = SELF_TESTED.get_or_init(|| Mutex::new(BTreeSet::new()));
    if done.lock().expect("self-test registry").contains(&b) {
        return Ok(());
    }
    for (d, radius) in [(2usize, 3i64), (3, 2)] {
        let inst = KisinInstance::new(d, b, false)?;
        let n = inst.index().len();
        let side = (2 * radius + 1) as usize;
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let values: RationalVector = (0..n)
                .map(|_| {
                    let v = (c % side) as i64 - radius;
                    c /= side;
                    int(v)
                })
                .collect();
            let m = MuTriangle::new(inst, values)?;
            if mu_system_holds(&m) != in_q(&q_from_mu(&m)) {
                return Err(KisinError::Internal(format!("mu-system and Jeux disagree at {:?} (b = {b})", m.values)));
            }
        }
    }
    done.lock().expect("self-test registry").insert(b);
    Ok(())
}

/// Maximizes `dim(phi)` over integer points of `Q ∩ R` whose top row meets
/// the target, with the default configuration.
pub fn dim_exact(query: &DimQuery) -> Result<DimResult> {
    dim_exact_with(query, &SolverConfig::default())
}

pub fn dim_exact_with(query: &DimQuery, config: &SolverConfig) -> Result<DimResult> {
    let inst = query.inst;
    query.target.validate(&inst)?;
    mu_system_self_test(inst.b)?;

    let forms = top_row_bounds(&inst);
    let mut tops: Vec<(i64, Vec<i64>)> =
        top_rows(&inst, &query.target).into_iter().map(|t| (top_row_bound(&forms, &t), t)).collect();
    tops.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let top_count = tops.len();

    let shared = Shared::new(config.node_budget);
    let solve = |(bound, top): &(i64, Vec<i64>)| -> std::result::Result<search::Best, ()> {
        if *bound < shared.incumbent.load(std::sync::atomic::Ordering::Relaxed) {
            return Ok(None);
        }
        RowSearch::new(inst.d, inst.b, top, &shared).run()
    };
    let outcomes: Vec<std::result::Result<search::Best, ()>> = match config.thread_count() {
        Some(1) => tops.iter().map(solve).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| KisinError::Internal(format!("thread pool: {e}")))?
            .install(|| tops.par_iter().map(solve).collect()),
        None => tops.par_iter().map(solve).collect(),
    };
    let nodes = shared.nodes.load(std::sync::atomic::Ordering::Relaxed);
    let mut best: Option<(i64, Vec<i64>)> = None;
    for outcome in outcomes {
        let Some((value, cells)) = outcome.map_err(|_| KisinError::BudgetExceeded { budget: config.node_budget })? else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((v, c)) => value > *v || (value == *v && cells < *c),
        };
        if better {
            best = Some((value, cells));
        }
    }

    let Some((value, cells)) = best else {
        return Ok(DimResult { query: query.clone(), status: DimStatus::Empty, witness: None, checks: None });
    };
    let witness = MuTriangle::new(inst, cells.iter().map(|&x| int(x)).collect())?;
    let q = q_from_mu(&witness);
    let top: Vec<i64> = witness.top_row().iter().map(|x| rat_to_i64(x).expect("integer cell")).collect();
    let congruence = match &query.target {
        Target::Mu(mu) if !inst.h_zero => Some(value.rem_euclid(inst.b as i64 - 1) == predicted_residue(&inst, mu)),
        _ => None,
    };
    let checks = SolveChecks {
        in_q: in_q(&q),
        in_lattice: q.in_lattice() && witness.in_lattice(),
        dim_phi: dim_phi_mu(&witness)? == int(value),
        top_row: top_row_ok(&query.target, &top, inst.b),
        congruence,
        nodes,
        top_rows: top_count,
    };
    if !(checks.in_q && checks.in_lattice && checks.dim_phi && checks.top_row) {
        return Err(KisinError::Internal(format!("optimizer failed re-verification: {checks:?}")));
    }
    let status = if inst.h_zero { DimStatus::Interval(value, value + inst.slack()) } else { DimStatus::Exact(value) };
    Ok(DimResult { query: query.clone(), status, witness: Some(witness), checks: Some(checks) })
}

/// `dim(phi)` at a given triangle, after checking it is a lattice point of `Q`.
pub fn evaluate_triangle(m: &MuTriangle) -> Result<Rational> {
    let q = q_from_mu(m);
    if !in_q(&q) {
        return Err(KisinError::NotInCone("triangle violates the Jeux".into()));
    }
    if !q.in_lattice() {
        return Err(KisinError::InvalidInput("triangle is not a lattice point".into()));
    }
    dim_phi_mu(m)
}
