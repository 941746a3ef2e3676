//! The triangular index set `I = {(i, j) : 1 <= i <= j <= d}`.
//!
//! Cells are stored row-major: row 1 holds `(1,1)..(1,d)`, row 2 holds
//! `(2,2)..(2,d)`, and so on. Indices are 1-based to match the usual notation.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriIndex {
    d: usize,
}

impl TriIndex {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "d must be positive");
        TriIndex { d }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of cells, `d(d+1)/2`.
    pub fn len(&self) -> usize {
        self.d * (self.d + 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn row_offset(&self, i: usize) -> usize {
        (i - 1) * self.d - (i - 1) * (i.saturating_sub(2)) / 2
    }

    /// Flat position of cell `(i, j)`.
    pub fn pos(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i <= j && j <= self.d, "({i},{j}) not in I");
        self.row_offset(i) + (j - i)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        1 <= i && i <= j && j <= self.d
    }

    /// Cell at a flat position.
    pub fn cell(&self, mut p: usize) -> (usize, usize) {
        for i in 1..=self.d {
            let row = self.d - i + 1;
            if p < row {
                return (i, i + p);
            }
            p -= row;
        }
        panic!("position out of range");
    }

    /// All cells in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.d).flat_map(move |i| (i..=self.d).map(move |j| (i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_dense_and_invertible() {
        for d in 1..=8 {
            let ix = TriIndex::new(d);
            let cells: Vec<_> = ix.cells().collect();
            assert_eq!(cells.len(), ix.len());
            for (p, &(i, j)) in cells.iter().enumerate() {
                assert_eq!(ix.pos(i, j), p);
                assert_eq!(ix.cell(p), (i, j));
            }
        }
    }
}
