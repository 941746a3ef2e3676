//! Branch-and-bound over integer `mu`-triangles with a fixed top row.

use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, Ordering};

use crate::index::TriIndex;
use crate::kisin_model::scaled_q_from_mu_rows;

/// Shared across the parallel subproblems of one query.
pub(crate) struct Shared {
    pub incumbent: AtomicI64,
    pub nodes: AtomicU64,
    pub budget: u64,
    pub aborted: AtomicBool,
}

impl Shared {
    pub fn new(budget: u64) -> Self {
        Shared { incumbent: AtomicI64::new(i64::MIN), nodes: AtomicU64::new(0), budget, aborted: AtomicBool::new(false) }
    }
}

/// Best completion of one top row: `(dim, cells)` with the lexicographically
/// first triangle among those of maximal dimension.
pub(crate) type Best = Option<(i64, Vec<i64>)>;

pub(crate) struct RowSearch<'a> {
    d: usize,
    b: i64,
    ix: TriIndex,
    cells: Vec<i64>,
    /// `sum_j (d+1-j) mu_{1,j} - sum_j mu_{1,j}`.
    top_value: i64,
    shared: &'a Shared,
    best: Best,
    low: i64,
    high: i64,
}

impl<'a> RowSearch<'a> {
    pub fn new(d: usize, b: u64, top: &[i64], shared: &'a Shared) -> Self {
        let ix = TriIndex::new(d);
        let mut cells = vec![0; ix.len()];
        for (k, &v) in top.iter().enumerate() {
            cells[ix.pos(1, k + 1)] = v;
        }
        let top_value = top.iter().enumerate().map(|(k, &v)| (d - k) as i64 * v).sum::<i64>() - top.iter().sum::<i64>();
        let low = top.iter().copied().min().unwrap_or(0);
        let high = top.iter().copied().max().unwrap_or(0);
        RowSearch { d, b: b as i64, ix, cells, top_value, shared, best: None, low, high }
    }

    fn mu(&self, i: usize, j: usize) -> i64 {
        self.cells[self.ix.pos(i, j)]
    }

    fn scaled_q(&self, i: usize, j: usize) -> i64 {
        scaled_q_from_mu_rows(self.b, self.d, i, j, |r, s| self.mu(r, s))
    }

    /// Jeu II between `q` rows `r - 1` and `r`.
    fn jeu2_rows(&self, r: usize) -> bool {
        (r..=self.d).all(|j| self.scaled_q(r - 1, j - 1) <= self.scaled_q(r, j))
    }

    /// Upper bound on the dimension once the cells before `(i, j)` are fixed
    /// (`used` is the sum of the fixed cells below the top row): every free
    /// cell is at least the cell straight above it, recursively.
    fn bound(&self, i: usize, j: usize, used: i64) -> i64 {
        let mut rest = 0;
        for c in j..=self.d {
            // Row i, columns j..: at least the row above; rows below copy that.
            rest += self.mu(i - 1, c) * (c + 1 - i) as i64;
        }
        for c in i..j {
            // Row i is known here; rows i+1..=c sit below it.
            rest += self.mu(i, c) * (c - i) as i64;
        }
        self.top_value - used - rest
    }

    fn worth_exploring(&self, bound: i64) -> bool {
        if bound < self.shared.incumbent.load(Ordering::Relaxed) {
            return false;
        }
        self.best.as_ref().is_none_or(|(v, _)| bound > *v)
    }

    /// Runs the search; `Err(())` when the node budget ran out.
    pub fn run(mut self) -> Result<Best, ()> {
        if self.d == 1 {
            return Ok(Some((self.top_value, self.cells)));
        }
        self.cell(2, 2, 0)?;
        Ok(self.best)
    }

    fn cell(&mut self, i: usize, j: usize, used: i64) -> Result<(), ()> {
        if self.shared.aborted.load(Ordering::Relaxed) {
            return Err(());
        }
        if self.shared.nodes.fetch_add(1, Ordering::Relaxed) >= self.shared.budget {
            self.shared.aborted.store(true, Ordering::Relaxed);
            return Err(());
        }
        if !self.worth_exploring(self.bound(i, j, used)) {
            return Ok(());
        }
        let lo = self.mu(i - 1, j);
        let hi = self.mu(i - 1, j - 1);
        debug_assert!(self.low <= lo && hi <= self.high, "interlacing keeps cells within the top row range");
        let p = self.ix.pos(i, j);
        for v in lo..=hi {
            self.cells[p] = v;
            let used = used + v;
            if j < self.d {
                self.cell(i, j + 1, used)?;
                continue;
            }
            // Row i is complete.
            let row_sum: i64 = (i..=self.d).map(|c| self.mu(i, c)).sum();
            if row_sum.rem_euclid(self.b - 1) != 0 {
                continue;
            }
            if i >= 3 && !self.jeu2_rows(i - 1) {
                continue;
            }
            if i < self.d {
                self.cell(i + 1, i + 1, used)?;
                continue;
            }
            if !self.jeu2_rows(self.d) {
                continue;
            }
            let value = self.top_value - used;
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.shared.incumbent.fetch_max(value, Ordering::Relaxed);
                self.best = Some((value, self.cells.clone()));
            }
        }
        self.cells[p] = 0;
        Ok(())
    }
}
