//! Exact two-phase simplex over the rationals (Bland's rule, no cycling).
//!
//! Kept deliberately small: it serves feasibility questions, LP bounds for
//! pruning, and vertex tests for Minkowski sums with a cone.

use num_traits::{One, Signed, Zero};

use crate::rational::{Rational, RationalVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: RationalVector,
    pub sense: Sense,
    pub rhs: Rational,
}

/// `maximize objective . x` over free variables `x` subject to the constraints.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub objective: RationalVector,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: RationalVector },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        LinearProgram { n, constraints: Vec::new(), objective: vec![Rational::zero(); n] }
    }

    pub fn add(&mut self, coeffs: RationalVector, sense: Sense, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n, "constraint length");
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    pub fn maximize(&self) -> LpOutcome {
        solve(self)
    }

    /// Some feasible point, if any.
    pub fn feasible_point(&self) -> Option<RationalVector> {
        let mut lp = self.clone();
        lp.objective = vec![Rational::zero(); self.n];
        match solve(&lp) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<RationalVector>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_B B^{-1} A_j` and current objective value.
    cost: RationalVector,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, y) in self.cost.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, c: &[Rational]) {
        self.cost = c.to_vec();
        self.value = Rational::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = c[bv].clone();
            if cb.is_zero() {
                continue;
            }
            for (x, y) in self.cost.iter_mut().zip(&self.rows[i]) {
                if !y.is_zero() {
                    *x -= &cb * y;
                }
            }
            self.value += &cb * &self.rhs[i];
        }
    }

    /// Runs simplex iterations on columns `< allowed`; `false` when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.n;
    let m = lp.constraints.len();
    let nslack = lp.constraints.iter().filter(|c| c.sense != Sense::Eq).count();
    // Columns: x+ (n), x- (n), slacks, artificials (m).
    let nstruct = 2 * n + nslack;
    let ncols = nstruct + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut slack = 2 * n;
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        for k in 0..n {
            row[k] = con.coeffs[k].clone();
            row[n + k] = -con.coeffs[k].clone();
        }
        match con.sense {
            Sense::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Sense::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Sense::Eq => {}
        }
        let mut r = con.rhs.clone();
        if r.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            r = -r;
        }
        row[nstruct + i] = Rational::one();
        rows.push(row);
        rhs.push(r);
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (nstruct..ncols).collect(),
        cost: Vec::new(),
        value: Rational::zero(),
    };
    let mut phase1 = vec![Rational::zero(); ncols];
    for c in phase1.iter_mut().skip(nstruct) {
        *c = -Rational::one();
    }
    t.set_objective(&phase1);
    t.optimize(ncols);
    if t.value.is_negative() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nstruct {
            match (0..nstruct).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    let mut phase2 = vec![Rational::zero(); ncols];
    for k in 0..n {
        phase2[k] = lp.objective[k].clone();
        phase2[n + k] = -lp.objective[k].clone();
    }
    t.set_objective(&phase2);
    if !t.optimize(nstruct) {
        return LpOutcome::Unbounded;
    }
    let mut z = vec![Rational::zero(); ncols];
    for (i, &bv) in t.basis.iter().enumerate() {
        z[bv] = t.rhs[i].clone();
    }
    let x: RationalVector = (0..n).map(|k| &z[k] - &z[n + k]).collect();
    LpOutcome::Optimal { value: t.value, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ivec};

    #[test]
    fn small_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0
        let mut lp = LinearProgram::new(2);
        lp.objective = ivec(&[1, 1]);
        lp.add(ivec(&[1, 2]), Sense::Le, int(4));
        lp.add(ivec(&[3, 1]), Sense::Le, int(6));
        lp.add(ivec(&[1, 0]), Sense::Ge, int(0));
        lp.add(ivec(&[0, 1]), Sense::Ge, int(0));
        assert_eq!(lp.maximize().value(), Some(&frac(14, 5)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(ivec(&[1]), Sense::Ge, int(2));
        lp.add(ivec(&[1]), Sense::Le, int(1));
        assert_eq!(lp.maximize(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(1);
        lp.objective = ivec(&[1]);
        lp.add(ivec(&[1]), Sense::Ge, int(-3));
        assert_eq!(lp.maximize(), LpOutcome::Unbounded);
    }

    #[test]
    fn equalities_and_free_variables() {
        // max -x - y with x + y = -2 (free vars) -> 2
        let mut lp = LinearProgram::new(2);
        lp.objective = ivec(&[-1, -1]);
        lp.add(ivec(&[1, 1]), Sense::Eq, int(-2));
        lp.add(ivec(&[1, 1]), Sense::Eq, int(-2));
        assert_eq!(lp.maximize().value(), Some(&int(2)));
    }
}
