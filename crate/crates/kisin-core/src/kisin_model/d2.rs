//! Rank-2 oracle: the functions attached to the lattice spanned by
//! `e_1 + c e_2`-type data with `c = u^gamma`, in closed form.

use serde::Serialize;

use super::phi::PiecewiseAffine;
use super::{mu_from_q, KisinInstance, MuTriangle, QPoint};
use crate::error::{KisinError, Result};
use crate::rational::{fmt_rat, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2Invariants {
    pub inst: KisinInstance,
    pub phi1: PiecewiseAffine,
    pub phi2: PiecewiseAffine,
    pub psi1: PiecewiseAffine,
    pub psi2: PiecewiseAffine,
    pub mu1: Rational,
    pub mu2: Rational,
    /// The coordinates read off the closed forms.
    pub q: QPoint,
}

impl D2Invariants {
    pub fn mu(&self) -> MuTriangle {
        mu_from_q(&self.q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Piecewise {
            slope: String,
            starts: Vec<String>,
            values: Vec<String>,
        }
        let pw = |f: &PiecewiseAffine| Piecewise {
            slope: fmt_rat(&f.slope),
            starts: f.starts.iter().map(fmt_rat).collect(),
            values: f.values.iter().map(fmt_rat).collect(),
        };
        serde_json::json!({
            "b": self.inst.b,
            "phi": [pw(&self.phi1), pw(&self.phi2)],
            "psi": [pw(&self.psi1), pw(&self.psi2)],
            "mu": [fmt_rat(&self.mu1), fmt_rat(&self.mu2)],
            "q": self.q.to_json().q,
        })
    }
}

/// Closed forms for `gamma < delta < alpha`.
pub fn d2_lattice_invariants(alpha: i64, gamma: i64, delta: i64, b: u64) -> Result<D2Invariants> {
    if !(gamma < delta && delta < alpha) {
        return Err(KisinError::InvalidInput(format!(
            "need gamma < delta < alpha, got gamma={gamma}, delta={delta}, alpha={alpha}"
        )));
    }
    let inst = KisinInstance::new(2, b, false)?;
    let bb = inst.b_rat();
    let (a, g, dl) = (int(alpha), int(gamma), int(delta));
    let one = int(1);

    let break1 = &a + (&bb - &one) * (&dl - &g) / &bb;
    let top = &a + &dl - &g;
    let mu1 = &bb * &top - &dl;
    let mu2 = &bb * &g - &a;

    let phi1 = PiecewiseAffine {
        slope: bb.clone(),
        starts: vec![g.clone(), break1.clone()],
        values: vec![mu2.clone(), &bb * &break1 - &g],
    };
    let phi2 = PiecewiseAffine {
        slope: bb.clone(),
        starts: vec![top.clone()],
        values: vec![&bb * &top - &a + &g - &dl],
    };
    let psi1 = PiecewiseAffine { slope: &one / &bb, starts: vec![mu1.clone()], values: vec![(&mu1 + &g) / &bb] };
    let psi2 = PiecewiseAffine {
        slope: &one / &bb,
        starts: vec![mu2.clone(), (&bb - &one) * &top],
        values: vec![g.clone(), top.clone()],
    };
    let q = QPoint::new(inst, vec![break1, g, top])?;
    Ok(D2Invariants { inst, phi1, phi2, psi1, psi2, mu1, mu2, q })
}
