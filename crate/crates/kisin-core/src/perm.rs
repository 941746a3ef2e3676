//! Permutation combinatorics: records, losers' permutation, ord tableaux,
//! admissible subsets of `I`, the Weyl-type vectors `rho_w` and the order
//! `precedes` together with its Hasse diagram.
//!
//! Permutations are 1-indexed: `w.at(i)` is `w(i)` for `i` in `1..=d`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KisinError, Result};
use crate::index::TriIndex;
use crate::rational::{Rational, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(KisinError::InvalidInput("empty permutation".into()));
        }
        let mut seen = vec![false; d + 1];
        for &x in &images {
            if x == 0 || x > d || seen[x] {
                return Err(KisinError::InvalidInput(format!(
                    "{images:?} is not a permutation of 1..{d}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(d: usize) -> Self {
        Permutation { images: (1..=d).collect() }
    }

    /// The longest element `i -> d + 1 - i`.
    pub fn longest(d: usize) -> Self {
        Permutation { images: (1..=d).rev().collect() }
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(i)`, 1-based.
    pub fn at(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.d()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `(self o other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation {
            images: other.images.iter().map(|&x| self.at(x)).collect(),
        }
    }

    /// `w*(i) = d + 1 - w^{-1}(i)`.
    pub fn star(&self) -> Self {
        let d = self.d();
        let inv = self.inverse();
        Permutation {
            images: (1..=d).map(|i| d + 1 - inv.at(i)).collect(),
        }
    }

    /// Cycle length of every point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let d = self.d();
        let mut len = vec![0; d];
        for start in 1..=d {
            if len[start - 1] != 0 {
                continue;
            }
            let mut cycle = vec![start];
            let mut x = self.at(start);
            while x != start {
                cycle.push(x);
                x = self.at(x);
            }
            for &y in &cycle {
                len[y - 1] = cycle.len();
            }
        }
        len
    }

    /// Order of the permutation (lcm of its cycle lengths).
    pub fn order(&self) -> usize {
        self.cycle_lengths().into_iter().fold(1, |acc, l| acc.lcm(&l))
    }

    /// All permutations of `1..=d` in lexicographic order.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=d).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        while next_permutation(&mut cur) {
            out.push(Permutation { images: cur.clone() });
        }
        out
    }

    /// One-line notation `w(1)w(2)...w(d)`; entries are comma separated when `d > 9`.
    pub fn label(&self) -> String {
        let sep = if self.d() > 9 { "," } else { "" };
        self.images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Records of `w`: values `w(i)` larger than every earlier value, as
/// `(value, position)` in increasing position order.
pub fn records(w: &Permutation) -> Vec<(usize, usize)> {
    let mut best = 0;
    let mut out = Vec::new();
    for (p, &x) in w.images().iter().enumerate() {
        if x > best {
            best = x;
            out.push((x, p + 1));
        }
    }
    out
}

/// The losers' permutation: `w'(i) = min({w(1..=i+1)} \ {w'(1..i)})`.
///
/// Values are relabelled to `1..d-1` (the overall maximum `d` is always a
/// record and never loses).
pub fn losers_permutation(w: &Permutation) -> Result<Permutation> {
    let d = w.d();
    if d < 2 {
        return Err(KisinError::InvalidInput("losers' permutation needs d >= 2".into()));
    }
    let mut pool: BTreeSet<usize> = BTreeSet::new();
    pool.insert(w.at(1));
    let mut out = Vec::with_capacity(d - 1);
    for i in 1..d {
        pool.insert(w.at(i + 1));
        let m = *pool.iter().next().expect("pool is nonempty");
        pool.remove(&m);
        out.push(m);
    }
    // The survivor is d, so the losers are exactly 1..d-1.
    Permutation::new(out)
}

/// Filling `ord : I -> {1..d}` of the triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdTableau {
    d: usize,
    entries: Vec<usize>,
}

impl OrdTableau {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[TriIndex::new(self.d).pos(i, j)]
    }

    /// Row `i` as `[ord(i,i), ..., ord(i,d)]`.
    pub fn row(&self, i: usize) -> Vec<usize> {
        (i..=self.d).map(|j| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Level set `{x : ord(x) <= s}`.
    pub fn level_set(&self, s: usize) -> BTreeSet<(usize, usize)> {
        TriIndex::new(self.d).cells().filter(|&(i, j)| self.get(i, j) <= s).collect()
    }
}

/// Greedy column filling: for `s = 1..d`, the value `s` is written into the
/// last `w(s)` columns, each time in the highest free cell of the column.
pub fn ord_tableau(w: &Permutation) -> OrdTableau {
    let d = w.d();
    let ix = TriIndex::new(d);
    let mut entries = vec![0; ix.len()];
    let mut next_free = vec![1usize; d + 1];
    for s in 1..=d {
        for j in (d + 1 - w.at(s))..=d {
            let i = next_free[j];
            debug_assert!(i <= j, "column {j} overflow");
            entries[ix.pos(i, j)] = s;
            next_free[j] += 1;
        }
    }
    OrdTableau { d, entries }
}

/// Tableau whose level sets are `I_s(w) = J({w*(1), ..., w*(s)})`, the chain
/// attached to `w` by the extremal-point description; it is the greedy
/// filling of `w*`.
pub fn level_tableau(w: &Permutation) -> OrdTableau {
    ord_tableau(&w.star())
}

/// An admissible subset `J` of `I` together with its label `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSubset {
    pub d: usize,
    pub members: BTreeSet<(usize, usize)>,
    /// Elements of `T`, increasing.
    pub t: Vec<usize>,
}

impl AdmissibleSubset {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.members.contains(&(i, j))
    }

    /// Membership mask in storage order of [`TriIndex`].
    pub fn mask(&self) -> Vec<bool> {
        TriIndex::new(self.d).cells().map(|c| self.members.contains(&c)).collect()
    }
}

/// `J(T) = {(i,j) : i <= |T|, j > d - t_i}` with `t_1 > ... > t_s`.
pub fn admissible_from_subset(d: usize, t: &[usize]) -> Result<AdmissibleSubset> {
    let mut sorted: Vec<usize> = t.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != t.len() || sorted.iter().any(|&x| x == 0 || x > d) {
        return Err(KisinError::InvalidInput(format!("{t:?} is not a subset of 1..{d}")));
    }
    let mut members = BTreeSet::new();
    for (row, &ti) in sorted.iter().rev().enumerate() {
        let i = row + 1;
        for j in (d - ti + 1)..=d {
            members.insert((i, j));
        }
    }
    Ok(AdmissibleSubset { d, members, t: sorted })
}

/// Closure test: `(i,j) in J` forces `(i,j+1)` and `(i-1,j-1)` into `J`.
pub fn is_admissible(d: usize, members: &BTreeSet<(usize, usize)>) -> bool {
    let ix = TriIndex::new(d);
    members.iter().all(|&(i, j)| {
        ix.contains(i, j)
            && (j == d || members.contains(&(i, j + 1)))
            && (i == 1 || members.contains(&(i - 1, j - 1)))
    })
}

/// Inverse of [`admissible_from_subset`]: `t_i` is the size of row `i` of `J`.
pub fn subset_from_admissible(d: usize, members: &BTreeSet<(usize, usize)>) -> Result<AdmissibleSubset> {
    if !is_admissible(d, members) {
        return Err(KisinError::InvalidInput("subset of I is not admissible".into()));
    }
    let t: Vec<usize> = (1..=d)
        .map(|i| members.iter().filter(|&&(r, _)| r == i).count())
        .filter(|&c| c > 0)
        .collect();
    let out = admissible_from_subset(d, &t)?;
    if &out.members != members {
        return Err(KisinError::Internal("admissible subset does not match its label".into()));
    }
    Ok(out)
}

/// All admissible subsets, one per `T` in `2^{1..d}` (bitmask order).
pub fn all_admissible(d: usize) -> Vec<AdmissibleSubset> {
    (0u32..(1 << d))
        .map(|mask| {
            let t: Vec<usize> = (1..=d).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            admissible_from_subset(d, &t).expect("valid subset")
        })
        .collect()
}

/// `rho_w = ((b-1) * sum_{n>=1} (d+1-i-w^n(i)) / b^n)_i`, summed exactly over
/// one cycle: a sequence of period `L` gives `sum_{n=1}^{L} a_n b^{L-n} / (b^L - 1)`.
pub fn rho_w(w: &Permutation, b: u64) -> RationalVector {
    assert!(b >= 2, "b must be at least 2");
    let d = w.d();
    let bb = BigInt::from(b);
    let lens = w.cycle_lengths();
    (1..=d)
        .map(|i| {
            let l = lens[i - 1];
            let mut num = BigInt::zero();
            let mut x = i;
            for n in 1..=l {
                x = w.at(x);
                let a = BigInt::from(d as i64 + 1 - i as i64 - x as i64);
                num += a * bb.pow((l - n) as u32);
            }
            let den = bb.pow(l as u32) - BigInt::one();
            Rational::new(num * (&bb - BigInt::one()), den)
        })
        .collect()
}

/// `2 rho / (b+1)` with `rho_i = (d+1)/2 - i`.
pub fn two_rho_over(d: usize, b: u64) -> RationalVector {
    (1..=d)
        .map(|i| Rational::new(BigInt::from(d as i64 + 1 - 2 * i as i64), BigInt::from(b + 1)))
        .collect()
}

/// `w1 ≼ w2`: for every `s`, the sequence `(sum_{i<=s} w1^n(i))_{n>=1}` is
/// lexicographically at most the one of `w2`.
///
/// Both sequences are periodic with period dividing `lcm(ord w1, ord w2)`,
/// so comparing that many terms decides the infinite comparison.
pub fn precedes(w1: &Permutation, w2: &Permutation) -> bool {
    assert_eq!(w1.d(), w2.d(), "permutations of different sizes");
    let d = w1.d();
    let period = w1.order().lcm(&w2.order());
    let (mut p1, mut p2) = (w1.clone(), w2.clone());
    let mut decided = vec![false; d + 1];
    for _ in 0..period {
        let (mut s1, mut s2) = (0usize, 0usize);
        for (s, done) in decided.iter_mut().enumerate().skip(1) {
            s1 += p1.at(s);
            s2 += p2.at(s);
            if *done {
                continue;
            }
            if s1 < s2 {
                *done = true;
            } else if s1 > s2 {
                return false;
            }
        }
        p1 = w1.compose(&p1);
        p2 = w2.compose(&p2);
    }
    true
}

/// `true` iff `z` lies in `C* = {sum z = 0, z_1 + ... + z_s >= 0}`.
pub fn in_weyl_dual(z: &[Rational]) -> bool {
    let mut acc = Rational::zero();
    for x in z {
        acc += x;
        if acc < Rational::zero() {
            return false;
        }
    }
    acc.is_zero()
}

/// Same order read through the vectors `rho_w` (valid for `b >= b0`):
/// `rho_{w1} - rho_{w2}` lies in `C*`.
pub fn precedes_via_rho(w1: &Permutation, w2: &Permutation, b: u64) -> bool {
    let diff = crate::rational::sub(&rho_w(w1, b), &rho_w(w2, b));
    in_weyl_dual(&diff)
}

/// Covering relations `(lower, upper)` of `≼` on `S_d`, sorted.
pub fn hasse_diagram(d: usize) -> Vec<(Permutation, Permutation)> {
    let perms = Permutation::all(d);
    let n = perms.len();
    let words = n.div_ceil(64);
    let mut above = vec![vec![0u64; words]; n];
    for a in 0..n {
        for c in 0..n {
            if a != c && precedes(&perms[a], &perms[c]) {
                above[a][c / 64] |= 1 << (c % 64);
            }
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for c in 0..n {
            if above[a][c / 64] & (1 << (c % 64)) == 0 {
                continue;
            }
            // a < c is a cover iff no m with a < m < c.
            let between = (0..n).any(|m| {
                above[a][m / 64] & (1 << (m % 64)) != 0 && above[m][c / 64] & (1 << (c % 64)) != 0
            });
            if !between {
                edges.push((perms[a].clone(), perms[c].clone()));
            }
        }
    }
    edges
}

/// Maximal elements of `≼` on `S_d`.
pub fn maximal_elements(d: usize) -> Vec<Permutation> {
    let perms = Permutation::all(d);
    perms
        .iter()
        .filter(|w| !perms.iter().any(|v| v != *w && precedes(w, v)))
        .cloned()
        .collect()
}

/// DOT export: one node per permutation, one edge per covering relation.
pub fn hasse_dot(d: usize) -> String {
    let mut out = String::from("digraph precedes {\n");
    for w in Permutation::all(d) {
        out.push_str(&format!("  \"{}\";\n", w.label()));
    }
    for (lo, hi) in hasse_diagram(d) {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", lo.label(), hi.label()));
    }
    out.push_str("}\n");
    out
}
