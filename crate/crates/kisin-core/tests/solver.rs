mod common;

use kisin_core::bounds::{regularity, theorem_bounds, Target};
use kisin_core::kisin_model::cones::in_q;
use kisin_core::kisin_model::{dim_phi_mu, predicted_residue, q_from_mu};
use kisin_core::rational::{int, ivec, rat_to_i64};
use kisin_core::solver::*;
use kisin_core::{KisinError, KisinInstance, MuTriangle};
use proptest::prelude::*;
use rand::Rng;

fn inst(d: usize, b: u64) -> KisinInstance {
    KisinInstance::new(d, b, false).unwrap()
}

fn solve(i: KisinInstance, target: Target) -> DimResult {
    dim_exact(&DimQuery::new(i, target).unwrap()).unwrap()
}

/// Every integer triangle with the given top row and interior cells in
/// `[min, max]` of the top row, filtered by the `q`-coordinate Jeux and the
/// lattice; maximum of `dim(phi)`.
fn brute_force_mu(i: KisinInstance, top: &[i64]) -> Option<i64> {
    let d = i.d;
    let (lo, hi) = (*top.iter().min().unwrap(), *top.iter().max().unwrap());
    let free = i.index().len() - d;
    let side = (hi - lo + 1) as usize;
    let mut best = None;
    for code in 0..side.pow(free as u32) {
        let mut c = code;
        let mut m = MuTriangle::zero(i);
        for (k, &v) in top.iter().enumerate() {
            m.set(1, k + 1, int(v));
        }
        for r in 2..=d {
            for s in r..=d {
                m.set(r, s, int(lo + (c % side) as i64));
                c /= side;
            }
        }
        let q = q_from_mu(&m);
        if in_q(&q) && q.in_lattice() {
            let v = rat_to_i64(&dim_phi_mu(&m).unwrap()).unwrap();
            best = Some(best.map_or(v, |b: i64| b.max(v)));
        }
    }
    best
}

#[test]
fn worked_examples() {
    let r = solve(inst(2, 2), Target::Mu(vec![3, 0]));
    assert_eq!(r.status, DimStatus::Exact(1));
    assert_eq!(r.witness.as_ref().unwrap().get(2, 2), &int(2));
    assert_eq!(solve(inst(2, 3), Target::Mu(vec![2, 0])).status, DimStatus::Exact(0));
    for b in 2..=5 {
        for m in -4..=8 {
            let want = if m % (b as i64 - 1) == 0 { DimStatus::Exact(0) } else { DimStatus::Empty };
            assert_eq!(solve(inst(1, b), Target::Mu(vec![m])).status, want);
        }
    }
    // Both theorem bounds are attained here.
    let r = solve(inst(2, 2), Target::LeE(3));
    assert_eq!(r.status, DimStatus::Exact(1));
    let t = theorem_bounds(&inst(2, 2), &Target::LeE(3)).unwrap();
    assert_eq!((t.lower, t.upper), (Some(int(1)), Some(int(1))));
}

#[test]
fn agrees_with_brute_force_d2_d3() {
    for b in 2..=4u64 {
        for m1 in 0..=9 {
            for m2 in 0..=m1 {
                let top = [m1, m2];
                let want = if (m1 + m2) % (b as i64 - 1) == 0 { brute_force_mu(inst(2, b), &top) } else { None };
                assert_eq!(solve(inst(2, b), Target::Mu(top.to_vec())).status.lower(), want, "b={b} {top:?}");
            }
        }
    }
    for b in 2..=3u64 {
        for m1 in 0..=6 {
            for m2 in 0..=m1 {
                let top = [m1, m2, 0];
                if (m1 + m2) % (b as i64 - 1) != 0 {
                    continue;
                }
                let want = brute_force_mu(inst(3, b), &top);
                assert_eq!(solve(inst(3, b), Target::Mu(top.to_vec())).status.lower(), want, "b={b} {top:?}");
            }
        }
    }
}

#[test]
fn d2_closed_form_matches_on_full_grid() {
    for b in 2..=5u64 {
        let i = inst(2, b);
        for m1 in 0..=30 {
            for m2 in 0..=m1 {
                let closed = dim_d2_closed(m1, m2, &i).unwrap();
                let exact = solve(i, Target::Mu(vec![m1, m2])).status.lower();
                assert_eq!(closed, exact, "b={b} ({m1},{m2})");
            }
        }
        // (t, t): t - (b-1) ceil(t/(b-1)), zero when b-1 divides t, else
        // negative and the variety is empty.
        for t in 0..=12 {
            if (2 * t) % (b as i64 - 1) == 0 {
                let n = b as i64 * b as i64 - 1;
                let formula = t - (b as i64 - 1) * ((t * (b as i64 + 1) + n - 1) / n);
                let want = (t % (b as i64 - 1) == 0).then_some(0);
                assert_eq!(formula == 0, want.is_some());
                assert_eq!(dim_d2_closed(t, t, &i).unwrap(), want);
                assert_eq!(solve(i, Target::Mu(vec![t, t])).status.lower(), want);
            }
        }
    }
}

#[test]
fn d3_closed_form_matches_where_valid() {
    let mut valid_cases = 0;
    for b in 2..=3u64 {
        let i = inst(3, b);
        let m = b as i64 - 1;
        for m1 in 0..=40 {
            for m2 in 0..=m1 {
                if (m1 + m2) % m != 0 {
                    continue;
                }
                let c = dim_d3_closed([m1, m2, 0], &i).unwrap();
                if !c.valid {
                    continue;
                }
                valid_cases += 1;
                assert_eq!(Some(c.value), solve(i, Target::Mu(vec![m1, m2, 0])).status.lower(), "b={b} ({m1},{m2},0)");
                assert_eq!(c.value.rem_euclid(m), predicted_residue(&i, &[m1, m2, 0]));
            }
        }
    }
    assert!(valid_cases > 100);
    let c = dim_d3_closed([30, 15, 0], &inst(3, 2)).unwrap();
    assert!(c.valid && regularity(&[23, 15, 7], &inst(3, 2)).integrally_b_regular);
    assert_eq!(Some(c.value), solve(inst(3, 2), Target::Mu(vec![30, 15, 0])).status.lower());
}

#[test]
fn d3_closed_form_flat_triples_are_outside_range() {
    for b in 2..=4u64 {
        for t in 0..=10 {
            if (3 * t) % (b as i64 - 1) == 0 {
                assert!(!dim_d3_closed([t, t, t], &inst(3, b)).unwrap().valid);
            }
        }
    }
}

#[test]
fn le_mu_is_max_over_dominated_rows() {
    let mut rng = common::rng(31);
    for (d, b) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 3)] {
        let i = inst(d, b);
        for _ in 0..6 {
            let mut mu = common::random_sorted(&mut rng, d, -3, if d == 4 { 7 } else { 12 });
            let excess = mu.iter().sum::<i64>().rem_euclid(b as i64 - 1);
            mu[0] += (b as i64 - 1 - excess) % (b as i64 - 1);
            let le = solve(i, Target::LeMu(mu.clone())).status.lower();
            let max = top_rows(&i, &Target::LeMu(mu.clone()))
                .into_iter()
                .filter_map(|t| solve(i, Target::Mu(t)).status.lower())
                .max();
            assert_eq!(le, max, "d={d} b={b} {mu:?}");
        }
    }
}

#[test]
fn le_e_is_nondecreasing() {
    for (d, b) in [(2, 2), (2, 4), (3, 2), (3, 3), (4, 3)] {
        let mut prev = i64::MIN;
        for e in 0..=16 {
            let v = solve(inst(d, b), Target::LeE(e)).status.lower().unwrap();
            assert!(v >= prev, "d={d} b={b} e={e}");
            prev = v;
        }
    }
}

#[test]
fn h_zero_gives_intervals() {
    for d in 1..=4 {
        let h = KisinInstance::new(d, 3, true).unwrap();
        let r = solve(h, Target::LeE(6));
        let DimStatus::Interval(lo, hi) = r.status else { panic!("expected an interval") };
        assert_eq!(hi - lo, (d * (d - 1) / 2) as i64);
        assert_eq!(Some(lo), solve(inst(d, 3), Target::LeE(6)).status.lower());
        assert!(r.checks.unwrap().congruence.is_none());
    }
}

#[test]
fn indivisible_mu_is_empty_before_search() {
    let r = solve(inst(3, 3), Target::Mu(vec![4, 2, 1]));
    assert_eq!(r.status, DimStatus::Empty);
    assert!(r.witness.is_none() && r.checks.is_none());
    assert_eq!(solve(inst(3, 3), Target::LeMu(vec![4, 2, 1])).status, DimStatus::Empty);
}

#[test]
fn rejects_bad_targets() {
    assert!(matches!(DimQuery::new(inst(3, 2), Target::Mu(vec![0, 1, 2])), Err(KisinError::InvalidInput(_))));
    assert!(matches!(DimQuery::new(inst(3, 2), Target::Mu(vec![1, 0])), Err(KisinError::DimensionMismatch { .. })));
    assert!(DimQuery::new(inst(3, 2), Target::LeE(-1)).is_err());
}

#[test]
fn budget_is_a_refusal() {
    let q = DimQuery::new(inst(4, 2), Target::LeE(30)).unwrap();
    let r = dim_exact_with(&q, &SolverConfig { node_budget: 100, threads: Some(2) });
    assert_eq!(r, Err(KisinError::BudgetExceeded { budget: 100 }));
}

#[test]
fn thread_count_does_not_change_the_answer() {
    for target in [Target::LeE(14), Target::LeMu(vec![12, 6, 3, 0])] {
        let q = DimQuery::new(inst(4, 4), target).unwrap();
        let one = dim_exact_with(&q, &SolverConfig { node_budget: u64::MAX, threads: Some(1) }).unwrap();
        let many = dim_exact_with(&q, &SolverConfig { node_budget: u64::MAX, threads: Some(4) }).unwrap();
        assert_eq!(one.status, many.status);
        assert_eq!(one.witness, many.witness);
    }
}

#[test]
fn witness_is_a_verified_optimizer() {
    for (d, b, t) in [(3, 2, Target::LeE(9)), (3, 3, Target::Mu(vec![8, 4, 0])), (4, 3, Target::LeMu(vec![9, 5, 2, 0]))] {
        let r = solve(inst(d, b), t);
        let w = r.witness.unwrap();
        let q = q_from_mu(&w);
        assert!(in_q(&q) && q.in_lattice() && w.in_lattice());
        assert_eq!(dim_phi_mu(&w).unwrap(), int(r.status.lower().unwrap()));
        assert!(r.checks.unwrap().ok());
    }
}

#[test]
fn le_mu_lower_bound_statement_holds_on_small_cases() {
    // The sup over strongly regular dominated rows, minus the offset, stays
    // below the exact dimension.
    let mut rng = common::rng(77);
    for (d, b) in [(2, 2), (2, 3), (2, 5), (3, 2)] {
        let i = inst(d, b);
        for _ in 0..8 {
            let mu = common::random_strongly_regular(&mut rng, &i);
            let spread = mu[0] - mu[d - 1];
            if d == 3 && spread > 40 {
                continue;
            }
            let lower = theorem_bounds(&i, &Target::LeMu(mu.clone())).unwrap().lower.unwrap();
            let exact = solve(i, Target::LeMu(mu.clone())).status.lower().unwrap();
            assert!(int(exact) >= lower, "d={d} b={b} {mu:?}: {exact} < {lower}");
        }
    }
}

#[test]
fn consistency_suite_examples() {
    let r = consistency_suite(&inst(2, 2), &SuiteConfig { e_max: 9, mu_spread: 12, ..Default::default() }).unwrap();
    assert!(r.passed(), "{r:?}");
    let periodic = r.checks.iter().find(|c| c.name == "d2_periodicity").unwrap();
    assert_eq!(periodic.cases, 10);
    let r = consistency_suite(&inst(3, 2), &SuiteConfig { e_max: 20, mu_spread: 8, ..Default::default() }).unwrap();
    assert!(r.passed(), "{r:?}");
    let r = consistency_suite(&KisinInstance::new(3, 3, true).unwrap(), &SuiteConfig { e_max: 8, mu_spread: 6, ..Default::default() })
        .unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn json_shape() {
    let r = solve(inst(2, 2), Target::Mu(vec![3, 0]));
    let j = r.to_json();
    assert_eq!(j["status"], "exact");
    assert_eq!(j["dim"], 1);
    assert_eq!(j["query"]["target"], "mu");
    assert_eq!(j["witness"]["mu"]["2,2"], "2");
    assert_eq!(j["checks"]["in_q"], true);
    let h = solve(KisinInstance::new(2, 2, true).unwrap(), Target::Mu(vec![3, 0])).to_json();
    assert_eq!(h["status"], "interval");
    assert_eq!(h["dim"], serde_json::json!([1, 2]));
    let e = solve(inst(2, 3), Target::Mu(vec![2, 1])).to_json();
    assert_eq!(e["status"], "empty");
    assert!(e["dim"].is_null());
}

#[test]
fn d2_vedeux_shift_on_mu() {
    // One step of b^2 - 1 on mu_1 adds b - 1 as soon as the shifted row is
    // still ordered.
    for b in 2..=4u64 {
        let i = inst(2, b);
        let step = (b * b - 1) as i64;
        for m1 in 0..=12 {
            for m2 in 0..=m1 {
                if let Some(v) = dim_d2_closed(m1, m2, &i).unwrap() {
                    assert_eq!(dim_d2_closed(m1 + step, m2, &i).unwrap(), Some(v + b as i64 - 1));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mu_dimension_congruence(b in 2u64..=5, m1 in 0i64..=12, m2 in 0i64..=12, m3 in 0i64..=12) {
        let mut top = vec![m1, m2, m3];
        top.sort_unstable_by(|a, b| b.cmp(a));
        let i = inst(3, b);
        let r = solve(i, Target::Mu(top.clone()));
        match r.status.lower() {
            Some(v) => prop_assert_eq!(v.rem_euclid(b as i64 - 1), predicted_residue(&i, &top)),
            // Divisibility is necessary, not sufficient.
            None if top.iter().sum::<i64>() % (b as i64 - 1) == 0 => prop_assert_eq!(brute_force_mu(i, &top), None),
            None => {}
        }
    }

    #[test]
    fn mu_dimension_is_bounded_by_two_rho(b in 2u64..=4, m1 in 0i64..=10, m2 in 0i64..=10) {
        let top = vec![m1.max(m2), m1.min(m2), 0];
        let i = inst(3, b);
        if let Some(v) = solve(i, Target::Mu(top.clone())).status.lower() {
            let two_rho = kisin_core::perm::two_rho_over(3, b);
            let bound = kisin_core::rational::dot(&two_rho, &ivec(&top));
            prop_assert!(int(v) <= bound);
        }
    }
}

#[test]
fn random_le_e_bounds_sandwich() {
    let mut rng = common::rng(5);
    for _ in 0..12 {
        let d = rng.random_range(2..=4);
        let b = rng.random_range(2..=5u64).max(kisin_core::kisin_model::b0(d));
        let e = rng.random_range(0..=18);
        let i = inst(d, b);
        let v = solve(i, Target::LeE(e)).status.lower().unwrap();
        let t = theorem_bounds(&i, &Target::LeE(e)).unwrap();
        assert!(t.lower.unwrap() <= int(v) && int(v) <= t.upper.unwrap(), "d={d} b={b} e={e}");
    }
}
