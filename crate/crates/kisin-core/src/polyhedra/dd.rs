//! Incremental double description for polyhedral cones.
//!
//! Input is `{x : a.x >= 0 (ineqs), e.x = 0 (eqs)}`. Equations are eliminated
//! first, the lineality space is split off, and the remaining pointed cone is
//! built by inserting one inequality at a time, using the combinatorial
//! adjacency test on zero sets. Rays are kept as primitive integer vectors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{combine_columns, independent_subset, nullspace, solve};
use crate::rational::{dot, primitive, primitive_integer, Rational, RationalVector};

/// Generators of a cone: `cone(rays) + span(lines)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConeGenerators {
    pub rays: Vec<RationalVector>,
    pub lines: Vec<RationalVector>,
}

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_count(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Extreme rays and a lineality basis of `{x : ineqs.x >= 0, eqs.x = 0}` in `Q^n`.
pub fn cone_generators(ineqs: &[RationalVector], eqs: &[RationalVector], n: usize) -> ConeGenerators {
    // x = N y with N a basis of the solution space of the equations.
    let nbasis: Vec<RationalVector> = if eqs.is_empty() {
        (0..n).map(|k| crate::rational::unit(n, k)).collect()
    } else {
        nullspace(eqs, n)
    };
    let k = nbasis.len();
    if k == 0 {
        return ConeGenerators::default();
    }
    let reduced: Vec<RationalVector> = ineqs
        .iter()
        .map(|a| nbasis.iter().map(|col| dot(a, col)).collect())
        .collect();
    // Lineality space of the reduced cone and a complement basis M.
    let lin = nullspace(&reduced, k);
    let mbasis: Vec<RationalVector> = if lin.is_empty() {
        (0..k).map(|c| crate::rational::unit(k, c)).collect()
    } else {
        nullspace(&lin, k)
    };
    let m = mbasis.len();
    let lift = |u: &[Rational]| -> RationalVector {
        let y = combine_columns(&mbasis, u, k);
        combine_columns(&nbasis, &y, n)
    };
    let lines: Vec<RationalVector> = lin
        .iter()
        .map(|l| {
            let x = combine_columns(&nbasis, l, n);
            canonical(&x)
        })
        .collect();
    if m == 0 {
        return ConeGenerators { rays: Vec::new(), lines };
    }
    let pointed: Vec<RationalVector> = reduced
        .iter()
        .map(|a| mbasis.iter().map(|col| dot(a, col)).collect())
        .collect();
    let rays_u = pointed_cone_rays(&pointed, m);
    let mut rays: Vec<RationalVector> = rays_u.iter().map(|u| canonical(&lift(u))).collect();
    rays.sort();
    rays.dedup();
    ConeGenerators { rays, lines }
}

/// Primitive integer representative of a direction, as rationals.
pub fn canonical(v: &[Rational]) -> RationalVector {
    primitive_integer(v).into_iter().map(Rational::from_integer).collect()
}

/// Extreme rays of the pointed cone `{u : a.u >= 0}` (the rows span `Q^m`).
fn pointed_cone_rays(rows: &[RationalVector], m: usize) -> Vec<RationalVector> {
    let rows_int: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| primitive_integer(r))
        .collect();
    let rows_q: Vec<RationalVector> = rows_int
        .iter()
        .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
        .collect();
    let basis_idx = independent_subset(&rows_q, m);
    debug_assert_eq!(basis_idx.len(), m, "pointed cone must have full-rank constraints");
    let nrows = rows_int.len();
    let words = nrows.div_ceil(64).max(1);

    // Initial simplicial cone: r_k solves B r_k = e_k.
    let bmat: Vec<RationalVector> = basis_idx.iter().map(|&i| rows_q[i].clone()).collect();
    let mut rays: Vec<Ray> = Vec::with_capacity(m);
    for kk in 0..m {
        let rhs = crate::rational::unit(m, kk);
        let sol = solve(&bmat, &rhs).expect("basis is invertible");
        let v = primitive_integer(&sol);
        let mut zeros = vec![0u64; words];
        for (pos, &ri) in basis_idx.iter().enumerate() {
            if pos != kk {
                bit_set(&mut zeros, ri);
            }
        }
        rays.push(Ray { v, zeros });
    }
    let mut in_basis = vec![false; nrows];
    for &i in &basis_idx {
        in_basis[i] = true;
    }

    for (ri, a) in rows_int.iter().enumerate() {
        if in_basis[ri] {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    bit_set(&mut r.zeros, ri);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = bits_and(&rays[p].zeros, &rays[q].zeros);
                if bits_count(&common) + 2 < m {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && bits_subset(&common, &r.zeros));
                if blocked {
                    continue;
                }
                let vp = &vals[p];
                let vq = -&vals[q];
                let v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xq, xp)| vp * xq + &vq * xp)
                    .collect();
                let mut zeros = common;
                bit_set(&mut zeros, ri);
                fresh.push(Ray { v: primitive(v), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                bit_set(&mut r.zeros, ri);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    rays.into_iter()
        .map(|r| r.v.into_iter().map(Rational::from_integer).collect())
        .collect()
}
