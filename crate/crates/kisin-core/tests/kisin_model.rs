mod common;

use kisin_core::kisin_model::cones::{
    build_cones, in_q, jeu1_normals, jeu2_normals, jeu3_normals, mu_from_levels, mu_system_holds, q_from_levels,
    q_w, q_w_prime, reg_cone, weyl_chamber,
};
use kisin_core::kisin_model::{
    d2_lattice_invariants, delta_vec, dim_mu_form, dim_phi, dim_q_form, mu_from_q, mu_vec, phi_from_q, q_from_mu,
    s_t, s_t_delta_closed, s_t_mu_vec_closed, validate_phi, KisinInstance, MuTriangle, QPoint,
};
use kisin_core::perm::{all_admissible, Permutation};
use kisin_core::polyhedra::{contains, enumerate_vertices};
use kisin_core::rational::{dot, frac, int, ivec, Rational};
use kisin_core::KisinError;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn inst(d: usize, b: u64) -> KisinInstance {
    KisinInstance::new(d, b, false).unwrap()
}

#[test]
fn mu_of_d1_is_scaled_q() {
    for b in 2..6 {
        let i = inst(1, b);
        let q = QPoint::new(i, vec![frac(7, 3)]).unwrap();
        assert_eq!(*mu_from_q(&q).get(1, 1), frac(7 * (b as i64 - 1), 3));
        assert_eq!(q_from_mu(&mu_from_q(&q)), q);
    }
}

#[test]
fn hand_evaluated_d2_point() {
    let i = inst(2, 2);
    // storage order (1,1), (1,2), (2,2)
    let q = QPoint::new(i, ivec(&[2, 1, 2])).unwrap();
    let m = mu_from_q(&q);
    assert_eq!(m.values, ivec(&[3, 0, 2]));
    assert_eq!(q_from_mu(&m), q);
    assert_eq!(dim_phi(&q).unwrap(), int(1));
}

#[test]
fn dimension_forms_agree_as_vectors() {
    for d in 1..=6 {
        for b in 2..=5 {
            let i = inst(d, b);
            let mm = i.mu_matrix();
            let n = i.index().len();
            // mu-form as a covector on q: sum_j (d+1-j) mu_{1,j} - sum_I mu_{i,j}
            let mut form = vec![Rational::zero(); n];
            for (k, row) in mm.iter().enumerate() {
                let (a, c) = i.index().cell(k);
                let w = if a == 1 { int((d + 1 - c) as i64) } else { Rational::zero() } - int(1);
                for (f, r) in form.iter_mut().zip(row) {
                    *f += &w * r;
                }
            }
            assert_eq!(form, delta_vec(&i), "d={d} b={b}");
        }
    }
}

#[test]
fn d1_dimension_is_zero() {
    let q = QPoint::new(inst(1, 3), vec![int(5)]).unwrap();
    assert_eq!(dim_phi(&q).unwrap(), int(0));
}

#[test]
fn jeu_counts() {
    let i = inst(3, 4);
    assert_eq!(jeu1_normals(&i).len(), 3);
    assert_eq!(jeu2_normals(&i).len(), 3);
    assert_eq!(jeu3_normals(&i).len(), 3);
}

#[test]
fn reg_is_whole_chamber_for_d2() {
    for b in 2..8 {
        let i = inst(2, b);
        let v = enumerate_vertices(&reg_cone(&i).intersect(&weyl_chamber(2)));
        let c = enumerate_vertices(&weyl_chamber(2));
        assert!(v.inside(&weyl_chamber(2)) && c.inside(&reg_cone(&i)));
    }
}

#[test]
fn cone_nesting_on_samples() {
    let mut rng = common::rng(11);
    for d in 2..=4 {
        let i = inst(d, 3);
        let cones = build_cones(&i);
        // Rays of Q_min lie in Q, rays of Q lie in Q_max.
        let vmin = enumerate_vertices(&cones.q_min);
        let vq = enumerate_vertices(&cones.q);
        assert!(vmin.inside(&cones.q));
        assert!(vq.inside(&cones.q_max));
        for _ in 0..50 {
            let q = common::random_interior_lattice_point(&mut rng, i);
            assert!(contains(&cones.q, &q.values).unwrap());
            assert!(contains(&cones.q_max, &q.values).unwrap());
        }
    }
}

#[test]
fn s_t_closed_forms() {
    for d in 1..=6 {
        for b in 2..=4 {
            let i = inst(d, b);
            let delta = delta_vec(&i);
            for j in all_admissible(d) {
                assert_eq!(s_t(&i, &delta, &j.t).unwrap(), s_t_delta_closed(&i, &j.t));
                for k in 1..=d {
                    assert_eq!(s_t(&i, &mu_vec(&i, k), &j.t).unwrap(), s_t_mu_vec_closed(&i, &j.t, k));
                }
            }
            // bands I_s
            let bi = b as i64;
            for s in 1..=d {
                let band: Vec<usize> = (1..=s).collect();
                let st = |x: &[Rational]| s_t(&i, x, &band).unwrap();
                if s < d {
                    assert_eq!(st(&mu_vec(&i, 1)), int(-1));
                    if d > 1 {
                        assert_eq!(st(&mu_vec(&i, d)), int(bi));
                    }
                    assert_eq!(st(&delta), int(-((s * (d - s)) as i64)));
                } else {
                    assert_eq!(st(&mu_vec(&i, 1)), int(bi - 1));
                    assert_eq!(st(&mu_vec(&i, d)), int(bi - 1));
                    assert_eq!(st(&delta), int(0));
                }
            }
        }
    }
}

#[test]
fn mu_vec_evaluates_top_row() {
    let mut rng = common::rng(3);
    for d in 1..=5 {
        let i = inst(d, 3);
        let q = common::random_qpoint(&mut rng, i);
        let m = mu_from_q(&q);
        for k in 1..=d {
            assert_eq!(dot(&mu_vec(&i, k), &q.values), *m.get(1, k));
        }
    }
}

#[test]
fn congruence_on_lattice_points() {
    let mut rng = common::rng(5);
    for d in 2..=5 {
        for b in [3u64, 4, 5] {
            let i = inst(d, b);
            for _ in 0..20 {
                let q = common::random_interior_lattice_point(&mut rng, i);
                let m = mu_from_q(&q);
                assert!(m.in_lattice());
                let dim = dim_phi(&q).unwrap();
                let weighted: Rational = (1..=d).map(|j| int(j as i64) * m.get(1, j)).sum();
                let r = (dim + weighted) / int(b as i64 - 1);
                assert!(r.is_integer());
            }
        }
    }
}

#[test]
fn lattice_predicates_match() {
    let mut rng = common::rng(17);
    for d in 1..=5 {
        for b in 2..=5 {
            let i = inst(d, b);
            for _ in 0..40 {
                // random points of (1/b)Z^I, some in R and some not
                let n = i.index().len();
                let vals: Vec<Rational> =
                    (0..n).map(|_| frac(rng.random_range(-30..=30), if rng.random_bool(0.5) { 1 } else { b as i64 })).collect();
                let q = QPoint::new(i, vals).unwrap();
                assert_eq!(q.in_lattice(), mu_from_q(&q).in_lattice(), "d={d} b={b} {:?}", q.values);
                let mvals: Vec<Rational> = (0..n).map(|_| int(rng.random_range(-30..=30))).collect();
                let m = MuTriangle::new(i, mvals).unwrap();
                assert_eq!(m.in_lattice(), q_from_mu(&m).in_lattice());
            }
        }
    }
}

#[test]
fn mu_system_matches_jeux() {
    let mut rng = common::rng(23);
    for d in 2..=4 {
        let i = inst(d, 3);
        for _ in 0..300 {
            let q = if rng.random_bool(0.5) {
                common::random_interior_lattice_point(&mut rng, i)
            } else {
                let mut q = common::random_interior_lattice_point(&mut rng, i);
                let k = rng.random_range(0..q.values.len());
                q.values[k] += int(rng.random_range(-6..=6));
                q
            };
            assert_eq!(in_q(&q), mu_system_holds(&mu_from_q(&q)));
        }
    }
}

#[test]
fn mu_order_relations_on_q() {
    let mut rng = common::rng(29);
    for d in 2..=5 {
        let i = inst(d, 2);
        for _ in 0..50 {
            let m = mu_from_q(&common::random_interior_lattice_point(&mut rng, i));
            for (a, c) in i.index().cells() {
                if a < d && c > a {
                    assert!(m.get(a, c) <= m.get(a + 1, c));
                }
                if c < d {
                    assert!(m.get(a, c) >= m.get(a + 1, c + 1));
                }
            }
        }
    }
}

#[test]
fn phi_rejects_points_outside_q() {
    let i = inst(2, 2);
    let q = QPoint::new(i, ivec(&[0, 1, 2])).unwrap();
    assert!(matches!(phi_from_q(&q), Err(KisinError::NotInCone(_))));
}

#[test]
fn phi_validates_on_interior_lattice_points() {
    let mut rng = common::rng(31);
    for d in 1..=5 {
        for b in 2..=4 {
            let i = inst(d, b);
            for _ in 0..10 {
                let q = common::random_interior_lattice_point(&mut rng, i);
                let p = phi_from_q(&q).unwrap();
                let rep = validate_phi(&p, &q);
                assert!(rep.ok(), "d={d} b={b} {rep:?}");
                let bb = int(b as i64);
                assert!(p.phi.iter().flat_map(|f| &f.starts).all(|s| (s * &bb).is_integer()));
            }
        }
    }
}

#[test]
fn phi_on_boundary_has_coincident_functions() {
    // Constant diagonals (q_{i,j} = q_{i+1,j+1}): a point of Q_min on the boundary of Q.
    let i = inst(3, 3);
    // levels by band: q_{i,i} = 4, q_{i,i+1} = q_{1,3} = 1, so Jeu III is tight at (1,1).
    let q = q_from_levels(&i, &Permutation::identity(3), &ivec(&[1, 1, 4]));
    assert_eq!(q.get(1, 1), q.get(2, 2));
    assert!(in_q(&q));
    let p = phi_from_q(&q).unwrap();
    let rep = validate_phi(&p, &q);
    assert!(rep.decreasing && rep.increasing && rep.asymptotics && rep.matching, "{rep:?}");
    let touching = (0..2).any(|k| {
        p.phi[k].starts.iter().any(|x| p.phi[k].eval(x).is_some() && p.phi[k].eval(x) == p.phi[k + 1].eval(x))
    });
    assert!(touching);
}

#[test]
fn d2_oracle_agrees_with_generic_functions() {
    for b in 2..=5u64 {
        for gamma in -3..=1 {
            for delta in gamma + 1..=gamma + 3 {
                for alpha in delta + 1..=delta + 3 {
                    let r = d2_lattice_invariants(alpha, gamma, delta, b).unwrap();
                    assert!(r.mu1 >= r.mu2);
                    let p = phi_from_q(&r.q).unwrap();
                    assert_eq!(p.phi[0], r.phi1);
                    assert_eq!(p.phi[1], r.phi2);
                    assert_eq!(p.psi[0], r.psi1);
                    assert_eq!(p.psi[1], r.psi2);
                    assert_eq!(*r.mu().get(1, 1), r.mu1);
                    assert_eq!(*r.mu().get(1, 2), r.mu2);
                    assert!(validate_phi(&p, &r.q).ok());
                }
            }
        }
    }
    let r = d2_lattice_invariants(2, 0, 1, 3).unwrap();
    assert_eq!(r.psi2.starts[1], int(2 * 3));
}

#[test]
fn levels_formula_for_mu() {
    let mut rng = common::rng(37);
    for d in 1..=5 {
        let i = inst(d, 3);
        for v in Permutation::all(d) {
            for _ in 0..3 {
                let mut levels: Vec<Rational> = (0..d).map(|_| frac(rng.random_range(-20..=20), 3)).collect();
                levels.sort();
                let q = q_from_levels(&i, &v, &levels);
                assert_eq!(mu_from_q(&q), mu_from_levels(&i, &v, &levels), "v={v}");
            }
        }
    }
}

#[test]
fn level_cones_contain_their_level_points() {
    for d in 1..=4 {
        let i = inst(d, 4);
        for w in Permutation::all(d) {
            let levels: Vec<Rational> = (0..d).map(|k| int((k * k) as i64)).collect();
            let q = q_from_levels(&i, &w.star(), &levels);
            assert!(contains(&q_w_prime(&i, &w), &q.values).unwrap(), "w={w}");
        }
    }
    // Q_{w0} points lie in Q.
    let i = inst(3, 4);
    let w0 = Permutation::longest(3);
    let q = q_from_levels(&i, &w0.star(), &ivec(&[0, 1, 3]));
    assert_eq!(contains(&q_w(&i, &w0), &q.values).unwrap(), in_q(&q) && contains(&q_w(&i, &w0), &q.values).unwrap());
}

fn small_inst() -> impl Strategy<Value = KisinInstance> {
    (1usize..=6, 2u64..=7).prop_map(|(d, b)| inst(d, b))
}

proptest! {
    #[test]
    fn transforms_are_inverse(i in small_inst(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let q = common::random_qpoint(&mut rng, i);
        prop_assert_eq!(q_from_mu(&mu_from_q(&q)), q.clone());
        let m = mu_from_q(&q);
        prop_assert_eq!(mu_from_q(&q_from_mu(&m)), m);
    }

    #[test]
    fn dimension_forms_agree(i in small_inst(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let q = common::random_qpoint(&mut rng, i);
        prop_assert_eq!(dim_q_form(&q), dim_mu_form(&mu_from_q(&q)));
    }
}
