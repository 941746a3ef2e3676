//! Coordinates on `E = R^I`, the transforms between `q` and `mu`, the lattice
//! `R`, the linear forms `S_T`, `mu_vec`, `delta_vec`, and the dimension
//! functional.

pub mod cones;
pub mod d2;
pub mod phi;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KisinError, Result};
use crate::index::TriIndex;
use crate::perm::admissible_from_subset;
use crate::rational::{dot, fmt_rat, int, parse_rat, Rational, RationalVector};

pub use cones::{build_cones, jeux_graph, qdual_membership, Cone, KisinCones};
pub use d2::{d2_lattice_invariants, D2Invariants};
pub use phi::{phi_from_q, read_back, validate_phi, PhiFunctions, PhiReport, PiecewiseAffine};

/// The data `(d, b, h = 0?)`. Everything downstream depends only on these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KisinInstance {
    pub d: usize,
    pub b: u64,
    pub h_zero: bool,
}

impl KisinInstance {
    pub fn new(d: usize, b: u64, h_zero: bool) -> Result<Self> {
        if d == 0 {
            return Err(KisinError::InvalidInput("d must be at least 1".into()));
        }
        if b < 2 {
            return Err(KisinError::InvalidInput("b must be at least 2".into()));
        }
        Ok(KisinInstance { d, b, h_zero })
    }

    pub fn index(&self) -> TriIndex {
        TriIndex::new(self.d)
    }

    /// `b0 = 1 + floor((d-1)^2 / 4)`.
    pub fn b0(&self) -> u64 {
        b0(self.d)
    }

    /// `d(d-1)/2` when `h = 0`, else 0.
    pub fn slack(&self) -> i64 {
        if self.h_zero {
            (self.d * (self.d - 1) / 2) as i64
        } else {
            0
        }
    }

    pub fn b_rat(&self) -> Rational {
        int(self.b as i64)
    }

    /// Matrix of `q -> mu` (one row per cell, storage order).
    pub fn mu_matrix(&self) -> Vec<RationalVector> {
        let ix = self.index();
        let d = self.d;
        let b = self.b_rat();
        ix.cells()
            .map(|(i, j)| {
                let mut row = vec![Rational::zero(); ix.len()];
                row[ix.pos(j, j)] += &b;
                row[ix.pos(j, d)] -= Rational::one();
                for s in i..j {
                    row[ix.pos(s, j)] += &b;
                    row[ix.pos(s, j - 1)] -= &b;
                }
                row
            })
            .collect()
    }
}

pub fn b0(d: usize) -> u64 {
    1 + ((d - 1) * (d - 1) / 4) as u64
}

/// A point of `E` in `q`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoint {
    pub inst: KisinInstance,
    pub values: RationalVector,
}

/// A point of `E` in `mu`-coordinates; the top row holds the elementary-divisor exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTriangle {
    pub inst: KisinInstance,
    pub values: RationalVector,
}

macro_rules! triangle_accessors {
    ($t:ty) => {
        impl $t {
            pub fn new(inst: KisinInstance, values: RationalVector) -> Result<Self> {
                let n = inst.index().len();
                if values.len() != n {
                    return Err(KisinError::DimensionMismatch { expected: n, got: values.len() });
                }
                Ok(Self { inst, values })
            }

            pub fn zero(inst: KisinInstance) -> Self {
                Self { inst, values: vec![Rational::zero(); inst.index().len()] }
            }

            pub fn get(&self, i: usize, j: usize) -> &Rational {
                &self.values[self.inst.index().pos(i, j)]
            }

            pub fn set(&mut self, i: usize, j: usize, v: Rational) {
                let p = self.inst.index().pos(i, j);
                self.values[p] = v;
            }

            /// Row `i` from `(i,i)` to `(i,d)`.
            pub fn row(&self, i: usize) -> Vec<Rational> {
                (i..=self.inst.d).map(|j| self.get(i, j).clone()).collect()
            }
        }
    };
}

triangle_accessors!(QPoint);
triangle_accessors!(MuTriangle);

impl QPoint {
    pub fn from_fn(inst: KisinInstance, f: impl Fn(usize, usize) -> Rational) -> Self {
        QPoint { inst, values: inst.index().cells().map(|(i, j)| f(i, j)).collect() }
    }

    /// `q_{i,j} in (1/b)Z` and `q_{i,d} in Z`.
    pub fn in_lattice(&self) -> bool {
        let b = self.inst.b_rat();
        let d = self.inst.d;
        self.inst.index().cells().all(|(i, j)| {
            let v = self.get(i, j);
            (v * &b).is_integer() && (j != d || v.is_integer())
        })
    }
}

impl MuTriangle {
    pub fn from_fn(inst: KisinInstance, f: impl Fn(usize, usize) -> Rational) -> Self {
        MuTriangle { inst, values: inst.index().cells().map(|(i, j)| f(i, j)).collect() }
    }

    /// Integer entries and every row sum divisible by `b - 1`.
    pub fn in_lattice(&self) -> bool {
        if !self.values.iter().all(|v| v.is_integer()) {
            return false;
        }
        let m = BigInt::from(self.inst.b - 1);
        (1..=self.inst.d).all(|i| {
            let s: Rational = self.row(i).iter().sum();
            s.to_integer().mod_floor(&m).is_zero()
        })
    }

    /// Top row `(mu_{1,1}, ..., mu_{1,d})`.
    pub fn top_row(&self) -> Vec<Rational> {
        self.row(1)
    }
}

/// `mu_{i,j} = b q_{j,j} - q_{j,d} + b sum_{s=i}^{j-1} (q_{s,j} - q_{s,j-1})`.
pub fn mu_from_q(q: &QPoint) -> MuTriangle {
    let inst = q.inst;
    let d = inst.d;
    let b = inst.b_rat();
    MuTriangle::from_fn(inst, |i, j| {
        let mut v = &b * q.get(j, j) - q.get(j, d);
        for s in i..j {
            v += &b * (q.get(s, j) - q.get(s, j - 1));
        }
        v
    })
}

/// Inverse transform:
/// `q_{i,j} = (mu_{i,i} + sum_{s=i+1}^{j} (mu_{i,s} - mu_{i+1,s})
///            + sum_{s=j+1}^{d} (mu_{i,s} - mu_{i+1,s}) / b) / (b - 1)`.
pub fn q_from_mu(m: &MuTriangle) -> QPoint {
    let inst = m.inst;
    let d = inst.d;
    let b = inst.b_rat();
    let bm1 = int(inst.b as i64 - 1);
    let below = |i: usize, s: usize| -> Rational {
        if i < d {
            m.get(i + 1, s).clone()
        } else {
            Rational::zero()
        }
    };
    QPoint::from_fn(inst, |i, j| {
        let mut v = m.get(i, i).clone();
        for s in (i + 1)..=j {
            v += m.get(i, s) - below(i, s);
        }
        for s in (j + 1)..=d {
            v += (m.get(i, s) - below(i, s)) / &b;
        }
        v / &bm1
    })
}

/// `b (b-1) q_{i,j}` as an integer-coefficient form in the `mu` row `i` and row `i+1`.
pub fn scaled_q_from_mu_rows(b: i64, d: usize, i: usize, j: usize, mu: impl Fn(usize, usize) -> i64) -> i64 {
    let below = |s: usize| if i < d { mu(i + 1, s) } else { 0 };
    let mut v = b * mu(i, i);
    for s in (i + 1)..=j {
        v += b * (mu(i, s) - below(s));
    }
    for s in (j + 1)..=d {
        v += mu(i, s) - below(s);
    }
    v
}

/// Coefficient vector of `mu_{1,i}` in `q`-coordinates.
pub fn mu_vec(inst: &KisinInstance, i: usize) -> RationalVector {
    inst.mu_matrix()[inst.index().pos(1, i)].clone()
}

/// `delta`: `b` on every cell plus `2i - 1 - d - b i` on `(i, d)`, so that
/// `<delta, q> = dim(phi)`.
pub fn delta_vec(inst: &KisinInstance) -> RationalVector {
    let ix = inst.index();
    let d = inst.d as i64;
    let b = inst.b as i64;
    let mut v = vec![inst.b_rat(); ix.len()];
    for i in 1..=inst.d {
        v[ix.pos(i, inst.d)] += int(2 * i as i64 - 1 - d - b * i as i64);
    }
    v
}

/// `S_T(x)`: sum of the coordinates of `x` over the admissible set `J(T)`.
pub fn s_t(inst: &KisinInstance, x: &[Rational], t: &[usize]) -> Result<Rational> {
    let j = admissible_from_subset(inst.d, t)?;
    let ix = inst.index();
    Ok(j.members.iter().map(|&(a, c)| x[ix.pos(a, c)].clone()).sum())
}

/// Closed form `S_T(mu_vec_i) = b [d+1-i in T] - [|T| >= i]`.
pub fn s_t_mu_vec_closed(inst: &KisinInstance, t: &[usize], i: usize) -> Rational {
    let b = inst.b as i64;
    let d = inst.d;
    let ind = if t.contains(&(d + 1 - i)) { b } else { 0 };
    int(ind - if t.len() >= i { 1 } else { 0 })
}

/// Closed form `S_T(delta) = -s(d-s) + b sum_i (t_i - i)` with `t_1 < ... < t_s`.
pub fn s_t_delta_closed(inst: &KisinInstance, t: &[usize]) -> Rational {
    let mut ts = t.to_vec();
    ts.sort_unstable();
    let s = ts.len() as i64;
    let d = inst.d as i64;
    let b = inst.b as i64;
    let shift: i64 = ts.iter().enumerate().map(|(k, &x)| x as i64 - (k as i64 + 1)).sum();
    int(-s * (d - s) + b * shift)
}

/// `sum_j (d+1-j) mu_{1,j} - sum_I mu_{i,j}`.
pub fn dim_mu_form(m: &MuTriangle) -> Rational {
    let d = m.inst.d;
    let top: Rational = (1..=d).map(|j| int((d + 1 - j) as i64) * m.get(1, j)).sum();
    let all: Rational = m.values.iter().sum();
    top - all
}

/// `b sum_I q_{i,j} + sum_i (2i - 1 - d - b i) q_{i,d}`.
pub fn dim_q_form(q: &QPoint) -> Rational {
    dot(&delta_vec(&q.inst), &q.values)
}

/// Evaluates both expressions of the dimension functional and insists they agree.
pub fn dim_phi(q: &QPoint) -> Result<Rational> {
    let a = dim_q_form(q);
    let b = dim_mu_form(&mu_from_q(q));
    if a != b {
        return Err(KisinError::Internal(format!("dimension forms disagree: {a} vs {b}")));
    }
    Ok(a)
}

/// Same from `mu`-coordinates.
pub fn dim_phi_mu(m: &MuTriangle) -> Result<Rational> {
    dim_phi(&q_from_mu(m))
}

/// `-(sum_j j mu_{1,j}) mod (b-1)`, the predicted residue of the dimension.
pub fn predicted_residue(inst: &KisinInstance, top: &[i64]) -> i64 {
    let m = inst.b as i64 - 1;
    let s: i64 = top.iter().enumerate().map(|(k, &x)| (k as i64 + 1) * x).sum();
    (-s).rem_euclid(m.max(1))
}

// JSON triangles: {"d": d, "b": b, "q": {"i,j": "p/q"}} (key "mu" for MuTriangle).

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriangleJson {
    pub d: usize,
    pub b: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<BTreeMap<String, String>>,
}

fn to_map(inst: &KisinInstance, values: &[Rational]) -> BTreeMap<String, String> {
    inst.index().cells().zip(values).map(|((i, j), v)| (format!("{i},{j}"), fmt_rat(v))).collect()
}

fn from_map(inst: &KisinInstance, map: &BTreeMap<String, String>) -> Result<RationalVector> {
    let ix = inst.index();
    let mut out = vec![None; ix.len()];
    for (k, v) in map {
        let (i, j) = k
            .split_once(',')
            .and_then(|(a, c)| Some((a.trim().parse::<usize>().ok()?, c.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| KisinError::Parse(format!("bad cell key {k:?}")))?;
        if !ix.contains(i, j) {
            return Err(KisinError::Parse(format!("cell {k:?} outside the triangle")));
        }
        out[ix.pos(i, j)] = Some(parse_rat(v)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(p, v)| v.ok_or_else(|| KisinError::Parse(format!("missing cell {:?}", ix.cell(p)))))
        .collect()
}

impl QPoint {
    pub fn to_json(&self) -> TriangleJson {
        TriangleJson { d: self.inst.d, b: self.inst.b, q: Some(to_map(&self.inst, &self.values)), mu: None }
    }

    pub fn from_json(j: &TriangleJson, h_zero: bool) -> Result<Self> {
        let inst = KisinInstance::new(j.d, j.b, h_zero)?;
        let map = j.q.as_ref().ok_or_else(|| KisinError::Parse("missing \"q\"".into()))?;
        QPoint::new(inst, from_map(&inst, map)?)
    }
}

impl MuTriangle {
    pub fn to_json(&self) -> TriangleJson {
        TriangleJson { d: self.inst.d, b: self.inst.b, q: None, mu: Some(to_map(&self.inst, &self.values)) }
    }

    pub fn from_json(j: &TriangleJson, h_zero: bool) -> Result<Self> {
        let inst = KisinInstance::new(j.d, j.b, h_zero)?;
        let map = j.mu.as_ref().ok_or_else(|| KisinError::Parse("missing \"mu\"".into()))?;
        MuTriangle::new(inst, from_map(&inst, map)?)
    }
}
