//! The `verify` suites: the solver consistency checks plus seeded invariant
//! checks for the other modules.

use kisin_core::bounds::extremal_points_aqmax;
use kisin_core::kisin_model::cones::{in_q_interior, interior_point, jeux_graph, qdual_membership};
use kisin_core::kisin_model::{mu_from_q, phi_from_q, q_from_mu, validate_phi};
use kisin_core::perm::{hasse_diagram, precedes};
use kisin_core::polyhedra::flow::{dual_membership_by_flow, dual_membership_by_subsets, DirectedGraph};
use kisin_core::rational::{frac, int, sum};
use kisin_core::solver::{consistency_suite, CheckOutcome, SuiteConfig};
use kisin_core::{KisinInstance, Permutation, QPoint, Rational, RationalVector, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub struct VerifyReport {
    pub inst: KisinInstance,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failing(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.inst.d,
            "b": self.inst.b,
            "h0": self.inst.h_zero,
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks,
        })
    }
}

struct Tally(CheckOutcome);

impl Tally {
    fn new(name: &str) -> Self {
        Tally(CheckOutcome { name: name.into(), cases: 0, failure: None })
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.0.cases += 1;
        if !ok && self.0.failure.is_none() {
            self.0.failure = Some(describe());
        }
    }
}

pub fn run_all(inst: &KisinInstance, config: &SuiteConfig, seed: u64) -> Result<VerifyReport> {
    let mut checks: Vec<CheckOutcome> = consistency_suite(inst, config)?
        .checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("solver/{}", c.name);
            c
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    checks.push(dual_oracle(&mut rng, 500));
    checks.push(qdual_oracle(&mut rng, inst, 100)?);
    checks.push(round_trips(&mut rng, inst, 1000));
    checks.push(phi_readback(&mut rng, inst, 200)?);
    if inst.d <= 5 {
        checks.push(hasse_order(inst.d));
    }
    if inst.b >= inst.b0() && inst.d <= 5 {
        let r = extremal_points_aqmax(inst)?;
        let mut t = Tally::new("extremal_points");
        t.record(r.matches && r.bounded && r.partial_sums_ok, || {
            format!("vertex set matches: {}, bounded: {}, partial sums: {}", r.matches, r.bounded, r.partial_sums_ok)
        });
        checks.push(t.0);
    }
    Ok(VerifyReport { inst: *inst, seed, checks })
}

fn random_graph(rng: &mut impl Rng) -> DirectedGraph {
    let n = rng.random_range(1..=8usize);
    let mut edges = Vec::new();
    for a in 0..n {
        for c in 0..n {
            if a != c && rng.random_bool(0.25) {
                edges.push((a, c));
            }
        }
    }
    DirectedGraph { n, edges }
}

/// Half the samples are nonnegative combinations of the dual generators (so
/// members), half are random zero-sum vectors.
fn random_dual_candidate(rng: &mut impl Rng, n: usize, generators: &[RationalVector]) -> RationalVector {
    let mut x = vec![int(0); n];
    if rng.random_bool(0.5) && !generators.is_empty() {
        for g in generators {
            let c = frac(rng.random_range(0..=3), rng.random_range(1..=3));
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += &c * gi;
            }
        }
    } else {
        for xi in x.iter_mut() {
            *xi = frac(rng.random_range(-6..=6), rng.random_range(1..=4));
        }
        let mean = sum(&x) / int(n as i64);
        for xi in x.iter_mut() {
            *xi -= &mean;
        }
    }
    x
}

fn dual_oracle(rng: &mut impl Rng, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("dual_oracle");
    for _ in 0..cases {
        let g = random_graph(rng);
        let x = random_dual_candidate(rng, g.n, &g.cone_normals());
        let (a, b) = (dual_membership_by_subsets(&g, &x), dual_membership_by_flow(&g, &x));
        t.record(a == b, || format!("graph {:?}, x {:?}: subsets {a}, flow {b}", g.edges, x));
    }
    t.0
}

fn qdual_oracle(rng: &mut impl Rng, inst: &KisinInstance, per_cone: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("qdual_oracle");
    for min in [true, false] {
        let g = jeux_graph(inst, min);
        let gens = g.cone_normals();
        for _ in 0..per_cone {
            let x = random_dual_candidate(rng, g.n, &gens);
            let (a, b) = (qdual_membership(inst, &x, min)?, dual_membership_by_flow(&g, &x));
            let cone = if min { "Q_min" } else { "Q_max" };
            t.record(a == b, || format!("{cone}* at {x:?}: admissible sums {a}, flow {b}"));
        }
    }
    Ok(t.0)
}

fn random_qpoint(rng: &mut impl Rng, inst: &KisinInstance) -> QPoint {
    let n = inst.index().len();
    let values = (0..n).map(|_| frac(rng.random_range(-50..=50), rng.random_range(1..=7))).collect();
    QPoint::new(*inst, values).expect("length matches")
}

fn round_trips(rng: &mut impl Rng, inst: &KisinInstance, cases: usize) -> CheckOutcome {
    let mut t = Tally::new("coordinate_round_trips");
    for _ in 0..cases {
        let q = random_qpoint(rng, inst);
        let m = mu_from_q(&q);
        t.record(q_from_mu(&m) == q && mu_from_q(&q_from_mu(&m)) == m, || format!("q {:?}", q.values));
    }
    t.0
}

/// Interior lattice point of `Q`: a fixed interior base point plus small
/// lattice noise, rejected until every inequality is strict.
fn random_interior_lattice_point(rng: &mut impl Rng, inst: &KisinInstance) -> QPoint {
    let b = inst.b as i64;
    loop {
        let c = rng.random_range(2..=4i64);
        let base = interior_point(inst, c);
        let values: Vec<Rational> = inst
            .index()
            .cells()
            .map(|(i, j)| {
                let noise = if j == inst.d {
                    int(rng.random_range(-c / 2..=c / 2))
                } else {
                    frac(rng.random_range(-c * b / 2..=c * b / 2), b)
                };
                base.get(i, j) + noise
            })
            .collect();
        let q = QPoint::new(*inst, values).expect("length matches");
        if in_q_interior(&q) && q.in_lattice() {
            return q;
        }
    }
}

fn phi_readback(rng: &mut impl Rng, inst: &KisinInstance, cases: usize) -> Result<CheckOutcome> {
    let mut t = Tally::new("phi_readback");
    for _ in 0..cases {
        let q = random_interior_lattice_point(rng, inst);
        let report = validate_phi(&phi_from_q(&q)?, &q);
        t.record(report.ok(), || format!("q {:?}: {report:?}", q.values));
    }
    Ok(t.0)
}

fn hasse_order(d: usize) -> CheckOutcome {
    let mut t = Tally::new("precedes_partial_order");
    let perms = Permutation::all(d);
    for w1 in &perms {
        t.record(precedes(w1, w1), || format!("{} is not below itself", w1.label()));
        for w2 in &perms {
            if w1 != w2 {
                let both = precedes(w1, w2) && precedes(w2, w1);
                t.record(!both, || format!("{} and {} precede each other", w1.label(), w2.label()));
            }
        }
    }
    let nodes: std::collections::BTreeSet<_> =
        hasse_diagram(d).into_iter().flat_map(|(a, b)| [a.label(), b.label()]).collect();
    let factorial: usize = (1..=d).product();
    t.record(perms.len() == factorial && nodes.len() <= factorial, || format!("{} nodes for d = {d}", perms.len()));
    t.0
}
