//! The polyhedra `K(b) = (2 rho/(b+1) + Reg*) ∩ C` and `K'(b) = K(b) + C*`,
//! their finite vertex counts, and the closed-form vertex coordinates known for
//! `d <= 5`.

use serde::Serialize;

use crate::error::{KisinError, Result};
use crate::kisin_model::cones::{reg_normals, weyl_chamber, weyl_dual_generators};
use crate::kisin_model::KisinInstance;
use crate::perm::two_rho_over;
use crate::polyhedra::{enumerate_vertices, to_hpolyhedron, vertices_of_sum_with_cone, HPolyhedron, VPolyhedron};
use crate::rational::{add, fmt_vec, int, lex_cmp, scale, Rational, RationalVector};

#[derive(Debug, Clone)]
pub struct KPolytopes {
    pub inst: KisinInstance,
    pub k: HPolyhedron,
    /// Vertices of `K`, sorted.
    pub k_vertices: Vec<RationalVector>,
    /// Vertices of `K + C*`, sorted.
    pub k_prime_vertices: Vec<RationalVector>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KPolytopesJson {
    pub d: usize,
    pub b: u64,
    pub k_count: usize,
    pub k_prime_count: usize,
    pub k_vertices: Vec<Vec<String>>,
    pub k_prime_vertices: Vec<Vec<String>>,
}

impl KPolytopes {
    pub fn to_json(&self) -> KPolytopesJson {
        KPolytopesJson {
            d: self.inst.d,
            b: self.inst.b,
            k_count: self.k_vertices.len(),
            k_prime_count: self.k_prime_vertices.len(),
            k_vertices: self.k_vertices.iter().map(|v| fmt_vec(v)).collect(),
            k_prime_vertices: self.k_prime_vertices.iter().map(|v| fmt_vec(v)).collect(),
        }
    }
}

/// `K` in H-form: the cone `2 rho/(b+1) + Reg*` (generated by the normals of
/// `Reg`) converted to halfspaces, cut by `C`.
pub fn k_polytope(inst: &KisinInstance) -> HPolyhedron {
    let apex = VPolyhedron {
        dim: inst.d,
        vertices: vec![two_rho_over(inst.d, inst.b)],
        rays: reg_normals(inst),
        lines: Vec::new(),
    };
    to_hpolyhedron(&apex).intersect(&weyl_chamber(inst.d))
}

pub fn k_polytopes(inst: &KisinInstance) -> KPolytopes {
    let k = k_polytope(inst);
    let v = enumerate_vertices(&k);
    // K is unbounded (it recedes along C within the zero-sum hyperplane);
    // only its finite vertices are counted.
    let mut k_prime_vertices = vertices_of_sum_with_cone(&k, &v.vertices, &weyl_dual_generators(inst.d));
    k_prime_vertices.sort_by(|a, b| lex_cmp(a, b));
    KPolytopes { inst: *inst, k, k_vertices: v.vertices, k_prime_vertices }
}

/// Smallest `b` for which the closed-form coordinates of `K'(b)` hold.
pub fn table2_validity(d: usize) -> Option<u64> {
    match d {
        2 | 3 => Some(2),
        4 => Some(3),
        5 => Some(6),
        _ => None,
    }
}

/// A vertex as a sum of terms `numerator / (b + shift)`.
type Closed = &'static [(&'static [i64], i64)];

const D2: &[Closed] = &[&[(&[1, -1], 1)]];
// The middle vector is sometimes printed as (-2,-2,4)/(b+2); that point is
// not in C, hence cannot be a vertex of K + C* (whose vertices lie in K).
const D3: &[Closed] = &[&[(&[2, 0, -2], 1)], &[(&[2, 2, -4], 2)], &[(&[4, -2, -2], 2)]];
const D4: &[Closed] = &[
    &[(&[3, 1, -1, -3], 1)],
    &[(&[3, 3, 3, -9], 3)],
    &[(&[9, -3, -3, -3], 3)],
    &[(&[1, -1, -1, 1], -1), (&[4, 0, 0, -4], 1)],
    &[(&[-1, 1, 1, -1], -1), (&[4, 0, 0, -4], 1)],
];
const D5: &[Closed] = &[
    &[(&[4, 2, 0, -2, -4], 1)],
    &[(&[4, 4, 4, 4, -16], 4)],
    &[(&[16, -4, -4, -4, -4], 4)],
    &[(&[3, -2, -2, -2, 3], -1), (&[7, 0, 0, 0, -7], 1)],
    &[(&[-3, 2, 2, 2, -3], -1), (&[7, 0, 0, 0, -7], 1)],
    &[(&[-2, 2, 0, 0, 0], 0), (&[6, 0, 0, 0, -6], 1)],
    &[(&[0, 0, 0, -2, 2], 0), (&[6, 0, 0, 0, -6], 1)],
    &[(&[4, 0, 0, 0, -4], 1), (&[0, 2, 2, -4, 0], 2)],
    &[(&[4, 0, 0, 0, -4], 1), (&[0, 4, -2, -2, 0], 2)],
];

/// The closed-form vertices of `K'(b)` evaluated at `b`, sorted; refuses
/// outside the validity domain.
pub fn table2_points(d: usize, b: u64) -> Result<Vec<RationalVector>> {
    let rows: &[Closed] = match d {
        2 => D2,
        3 => D3,
        4 => D4,
        5 => D5,
        _ => return Err(KisinError::OutsideValidityDomain(format!("no closed-form vertex list for d = {d}"))),
    };
    let min_b = table2_validity(d).expect("listed");
    if b < min_b {
        return Err(KisinError::OutsideValidityDomain(format!("closed-form vertices for d = {d} need b >= {min_b}, got b = {b}")));
    }
    let b = b as i64;
    let mut out: Vec<RationalVector> = rows
        .iter()
        .map(|terms| {
            terms.iter().fold(vec![int(0); d], |acc, (num, shift)| {
                let v: RationalVector = num.iter().map(|&x| int(x)).collect();
                add(&acc, &scale(&v, &Rational::new(1.into(), (b + shift).into())))
            })
        })
        .collect();
    out.sort_by(|a, b| lex_cmp(a, b));
    Ok(out)
}

/// `K'(b)` for `d <= 5`, with the same validity refusal as [`table2_points`].
pub fn k_prime_checked(inst: &KisinInstance) -> Result<KPolytopes> {
    if let Some(min_b) = table2_validity(inst.d) {
        if inst.b < min_b {
            return Err(KisinError::OutsideValidityDomain(format!(
                "d = {} requires b >= {min_b}, got b = {}",
                inst.d, inst.b
            )));
        }
    }
    Ok(k_polytopes(inst))
}
