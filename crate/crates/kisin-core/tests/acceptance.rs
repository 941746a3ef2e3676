//! Acceptance criteria 1-10. Runs without the libtest harness: each criterion
//! prints one `PASS`/`FAIL` line, and the process fails if any criterion does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use kisin_core::bounds::duality::a_set_generic;
use kisin_core::bounds::tables::table2_points;
use kisin_core::bounds::{
    a_qmax, a_qmin, extremal_points_aqmax, k_polytopes, regularity, theorem_bounds, verify_witness_le_e,
    verify_witness_le_mu, witness_le_e, witness_le_mu, ConstraintMap, Target,
};
use kisin_core::kisin_model::cones::{cone_h, jeux_graph, qdual_membership, weyl_chamber, weyl_dual_generators};
use kisin_core::kisin_model::{b0, mu_from_q, phi_from_q, predicted_residue, q_from_mu, validate_phi, Cone};
use kisin_core::polyhedra::flow::{dual_membership_by_flow, dual_membership_by_subsets, DirectedGraph};
use kisin_core::polyhedra::{minkowski_sum_cone_h, same_set, ConeGenerators};
use kisin_core::rational::{frac, int, lex_cmp, sum};
use kisin_core::solver::{dim_d2_closed, dim_d3_closed, dim_exact, DimQuery, DimStatus};
use kisin_core::{KisinInstance, RationalVector};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn inst(d: usize, b: u64) -> KisinInstance {
    KisinInstance::new(d, b, false).unwrap()
}

fn solve(i: KisinInstance, target: Target) -> DimStatus {
    dim_exact(&DimQuery::new(i, target).unwrap()).unwrap().status
}

/// Collects failures; keeps the first few for the report.
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn outcome(self, what: &str) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!("{} {what}", self.cases))
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            Err(format!("{} of {} {what} failed; first: {}", self.failures.len(), self.cases, shown.join("; ")))
        }
    }
}

fn sorted(mut v: Vec<RationalVector>) -> Vec<RationalVector> {
    v.sort_by(|a, b| lex_cmp(a, b));
    v
}

fn table1() -> Outcome {
    let k = [1, 3, 6, 15, 33, 70, 136, 347, 667];
    let kc = [1, 3, 5, 9, 17, 31, 47, 103, 163];
    let mut t = Tally::new();
    for (n, d) in (2..=10).enumerate() {
        let p = k_polytopes(&inst(d, 10000));
        let got = (p.k_vertices.len(), p.k_prime_vertices.len());
        t.check(got == (k[n], kc[n]), || format!("d={d}: {got:?} vs {:?}", (k[n], kc[n])));
    }
    t.outcome("dimensions")
}

fn table2() -> Outcome {
    let mut t = Tally::new();
    for d in 2..=5 {
        for b in [7, 17, 101] {
            let computed = sorted(k_polytopes(&inst(d, b)).k_prime_vertices);
            let closed = sorted(table2_points(d, b).map_err(|e| e.to_string())?);
            t.check(computed == closed, || format!("d={d} b={b}: {} vs {} vertices", computed.len(), closed.len()));
        }
    }
    t.outcome("(d, b) pairs")
}

fn extremal_points() -> Outcome {
    let mut t = Tally::new();
    for d in 2..=4 {
        let lo = b0(d).max(2);
        for b in [lo, lo + 3, 17] {
            let r = extremal_points_aqmax(&inst(d, b)).map_err(|e| e.to_string())?;
            t.check(r.matches && r.bounded && r.partial_sums_ok, || {
                format!("d={d} b={b}: matches {} bounded {} partial sums {}", r.matches, r.bounded, r.partial_sums_ok)
            });
        }
    }
    t.outcome("(d, b) pairs")
}

fn cone_equalities() -> Outcome {
    let mut t = Tally::new();
    for d in 2..=4 {
        let lo = b0(d).max(d as u64 + 1);
        for b in [lo, lo + 1, lo + 4] {
            let i = inst(d, b);
            let aq = a_set_generic(&i, &cone_h(&i, &Cone::Q), ConstraintMap::G);
            let c_star = ConeGenerators { rays: weyl_dual_generators(d), lines: Vec::new() };
            let sum_form = minkowski_sum_cone_h(&a_qmax(&i, ConstraintMap::G), &c_star);
            t.check(same_set(&aq, &sum_form), || format!("d={d} b={b}: A_Q != A_Qmax + C*"));
            let c = weyl_chamber(d);
            let on_c = same_set(&aq.intersect(&c), &a_qmin(&i, ConstraintMap::G).intersect(&c));
            t.check(on_c, || format!("d={d} b={b}: A_Q and A_Qmin differ on C"));
        }
    }
    t.outcome("set equalities")
}

fn closed_forms() -> Outcome {
    let mut t = Tally::new();
    for b in 2..=5u64 {
        let i = inst(2, b);
        for m1 in 0..=30 {
            for m2 in 0..=m1 {
                let exact = solve(i, Target::Mu(vec![m1, m2])).lower();
                if exact.is_none() {
                    continue;
                }
                let closed = dim_d2_closed(m1, m2, &i).map_err(|e| e.to_string())?;
                t.check(closed == exact, || format!("d=2 b={b} ({m1},{m2}): {closed:?} vs {exact:?}"));
            }
        }
    }
    // A shift of mu by (b-1)(1,..,1) preserves dim, so mu_3 = 0 covers every spread.
    for b in 2..=3u64 {
        let i = inst(3, b);
        for m1 in 0..=40 {
            for m2 in 0..=m1 {
                if (m1 + m2) % (b as i64 - 1) != 0 {
                    continue;
                }
                let c = dim_d3_closed([m1, m2, 0], &i).map_err(|e| e.to_string())?;
                if c.valid {
                    let exact = solve(i, Target::Mu(vec![m1, m2, 0])).lower();
                    t.check(Some(c.value) == exact, || format!("d=3 b={b} ({m1},{m2},0): {} vs {exact:?}", c.value));
                }
            }
        }
    }
    t.outcome("feasible or valid cases")
}

/// Nonincreasing `mu` with bounded spread, drawn until `accept` holds.
fn random_mu(rng: &mut impl Rng, d: usize, max_spread: i64, accept: impl Fn(&[i64]) -> bool) -> Vec<i64> {
    loop {
        let mut mu = vec![0i64; d];
        mu[d - 1] = rng.random_range(-5..=5);
        for k in (0..d - 1).rev() {
            mu[k] = mu[k + 1] + rng.random_range(0..=max_spread / (d as i64 - 1));
        }
        if accept(&mu) {
            return mu;
        }
    }
}

fn sandwiches() -> Outcome {
    let mut rng = common::rng(6);
    let mut t = Tally::new();
    for d in 2..=4usize {
        for b in 2..=3u64 {
            let i = inst(d, b);
            for e in 0..=20 {
                let v = solve(i, Target::LeE(e)).lower().unwrap();
                let r = theorem_bounds(&i, &Target::LeE(e)).unwrap();
                let (lo, hi) = (r.lower.unwrap(), r.upper.unwrap());
                t.check(lo <= int(v) && int(v) <= hi, || format!("d={d} b={b} e={e}: {v} not in [{lo}, {hi}]"));
            }
            let spread = [0, 0, 60, 40, 45][d];
            for _ in 0..6 {
                let mu = random_mu(&mut rng, d, spread, |m| regularity(m, &i).integrally_b_regular);
                let r = theorem_bounds(&i, &Target::Mu(mu.clone())).unwrap();
                if let Some(v) = solve(i, Target::Mu(mu.clone())).lower() {
                    let want = predicted_residue(&i, &mu);
                    t.check(v.rem_euclid(b as i64 - 1) == want, || format!("d={d} b={b} {mu:?}: residue of {v}"));
                    if let Some(u) = &r.upper {
                        t.check(int(v) <= *u, || format!("d={d} b={b} {mu:?}: {v} > {u}"));
                    }
                }
            }
            for _ in 0..4 {
                let mu = random_mu(&mut rng, d, spread, |m| regularity(m, &i).strongly_integrally_b_regular);
                let r = theorem_bounds(&i, &Target::LeMu(mu.clone())).unwrap();
                let v = solve(i, Target::LeMu(mu.clone())).lower();
                let ok = match (&r.lower, &r.upper, v) {
                    (Some(lo), Some(hi), Some(v)) => *lo <= int(v) && int(v) <= *hi,
                    _ => false,
                };
                t.check(ok, || format!("d={d} b={b} le {mu:?}: {v:?} vs [{:?}, {:?}]", r.lower, r.upper));
            }
        }
    }
    t.outcome("inequalities")
}

fn periodicity() -> Outcome {
    let mut t = Tally::new();
    for b in 2..=3u64 {
        let i = inst(2, b);
        let step = (b * b - 1) as i64;
        for e in 0..=15 {
            let now = solve(i, Target::LeE(e)).lower().unwrap();
            let later = solve(i, Target::LeE(e + step)).lower().unwrap();
            t.check(later == now + b as i64 - 1, || format!("b={b} e={e}: {later} vs {now} + {}", b - 1));
        }
    }
    t.outcome("shifts")
}

fn witnesses() -> Outcome {
    let mut le_e = Tally::new();
    for d in 2..=5 {
        for b in 2..=5u64 {
            let i = inst(d, b);
            for e in 0..=40 {
                let q = witness_le_e(&i, e).unwrap();
                let c = verify_witness_le_e(&i, e, &q).unwrap();
                le_e.check(c.ok(), || format!("le_e d={d} b={b} e={e}: {c:?}"));
            }
        }
    }
    let mut le_mu = Tally::new();
    let mut rng = common::rng(8);
    let mut grid: Vec<(KisinInstance, Vec<i64>)> = (0..=30).map(|m| (inst(2, 2), vec![0, -m])).collect();
    for d in 2..=5 {
        for b in 2..=5u64 {
            let i = inst(d, b);
            grid.extend((0..20).map(|_| (i, common::random_strongly_regular(&mut rng, &i))));
        }
    }
    for (i, mu) in grid {
        if !regularity(&mu, &i).strongly_integrally_b_regular {
            continue;
        }
        let q = witness_le_mu(&i, &mu).unwrap();
        let c = verify_witness_le_mu(&i, &mu, &q).unwrap();
        le_mu.check(c.ok(), || {
            format!("le_mu d={} b={} {mu:?}: objective {} (target met: {})", i.d, i.b, c.objective, c.objective_ok)
        });
    }
    let parts = [le_e.outcome("le_e witnesses"), le_mu.outcome("le_mu witnesses")];
    let all_ok = parts.iter().all(Result::is_ok);
    let text = parts.map(|p| p.unwrap_or_else(|e| e)).join(" | ");
    if all_ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn random_graph(rng: &mut impl Rng) -> DirectedGraph {
    let n = rng.random_range(1..=8usize);
    let edges = (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).filter(|&(a, c)| a != c && rng.random_bool(0.25));
    DirectedGraph { n, edges: edges.collect() }
}

/// Half nonnegative combinations of `generators` (members), half random zero-sum vectors.
fn candidate(rng: &mut impl Rng, n: usize, generators: &[RationalVector]) -> RationalVector {
    let mut x = vec![int(0); n];
    if rng.random_bool(0.5) {
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
        x.iter_mut().for_each(|xi| *xi -= &mean);
    }
    x
}

fn dual_oracles() -> Outcome {
    let mut rng = common::rng(9);
    let mut t = Tally::new();
    let mut members = 0;
    for _ in 0..500 {
        let g = random_graph(&mut rng);
        let x = candidate(&mut rng, g.n, &g.cone_normals());
        let (a, f) = (dual_membership_by_subsets(&g, &x), dual_membership_by_flow(&g, &x));
        members += a as usize;
        t.check(a == f, || format!("graph {:?} x {x:?}: subsets {a} flow {f}", g.edges));
    }
    for d in 2..=4 {
        for b in [2, 3, 5] {
            let i = inst(d, b);
            for min in [true, false] {
                let g = jeux_graph(&i, min);
                let gens = g.cone_normals();
                for _ in 0..25 {
                    let x = candidate(&mut rng, g.n, &gens);
                    let (a, f) = (qdual_membership(&i, &x, min).unwrap(), dual_membership_by_flow(&g, &x));
                    t.check(a == f, || format!("d={d} b={b} min={min} x {x:?}: {a} vs {f}"));
                }
            }
        }
    }
    // Both answers must occur for the comparison to mean anything.
    t.check(members > 50 && members < 450, || format!("{members} of 500 random samples are members"));
    t.outcome("membership queries")
}

fn round_trips() -> Outcome {
    let mut rng = common::rng(10);
    let mut t = Tally::new();
    for d in 1..=5 {
        for b in [2, 3, 7] {
            let i = inst(d, b);
            for _ in 0..1000 / 3 + 1 {
                let q = common::random_qpoint(&mut rng, i);
                let m = mu_from_q(&q);
                t.check(q_from_mu(&m) == q && mu_from_q(&q_from_mu(&m)) == m, || format!("q {:?}", q.values));
            }
        }
    }
    for d in 2..=5 {
        for _ in 0..200 {
            let i = inst(d, rng.random_range(2..=5));
            let q = common::random_interior_lattice_point(&mut rng, i);
            let report = validate_phi(&phi_from_q(&q).unwrap(), &q);
            t.check(report.ok(), || format!("d={d} q {:?}: {report:?}", q.values));
        }
    }
    t.outcome("points")
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("vertex counts of K and K+C*", table1),
        ("K+C* coordinates against closed forms", table2),
        ("extremal points of A_Qmax are the rho_w", extremal_points),
        ("A_Q = A_Qmax + C* and A_Q = A_Qmin on C", cone_equalities),
        ("closed forms against the exact solver", closed_forms),
        ("theorem sandwiches", sandwiches),
        ("rank-two periodicity in e", periodicity),
        ("witness postconditions", witnesses),
        ("dual membership oracles agree", dual_oracles),
        ("coordinate round trips and phi readback", round_trips),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {secs:.1}s)", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({detail}; {secs:.1}s)", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
