//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::{Rational, RationalVector};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [RationalVector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[RationalVector], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x in Q^ncols : row . x = 0 for every row}`.
pub fn nullspace(rows: &[RationalVector], ncols: usize) -> Vec<RationalVector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a x = rhs`; `None` when singular.
pub fn solve(a: &[RationalVector], rhs: &[Rational]) -> Option<RationalVector> {
    let n = a.len();
    let mut m: Vec<RationalVector> = a
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Indices of a maximal linearly independent subfamily, chosen greedily.
pub fn independent_subset(rows: &[RationalVector], ncols: usize) -> Vec<usize> {
    let mut basis: Vec<RationalVector> = Vec::new();
    let mut chosen = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(row.clone());
        if rank(&trial, ncols) > basis.len() {
            basis = trial;
            chosen.push(k);
            if basis.len() == ncols {
                break;
            }
        }
    }
    chosen
}

/// `M x` where `M` is given by its columns.
pub fn combine_columns(columns: &[RationalVector], coeffs: &[Rational], n: usize) -> RationalVector {
    let mut out = vec![Rational::zero(); n];
    for (col, c) in columns.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(col) {
            *o += c * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, ivec};

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![ivec(&[1, 1, 1]), ivec(&[1, -1, 0])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_square() {
        let a = vec![ivec(&[2, 1]), ivec(&[1, 3])];
        let x = solve(&a, &ivec(&[3, 5])).unwrap();
        assert_eq!(x, vec![Rational::new(4.into(), 5.into()), Rational::new(7.into(), 5.into())]);
        assert!(solve(&[ivec(&[1, 1]), ivec(&[2, 2])], &ivec(&[0, 0])).is_none());
    }
}
