//! Closed-form dimensions of `X_mu` for `d = 2` and `d = 3`.

use serde::Serialize;

use crate::bounds::regularity;
use crate::error::{KisinError, Result};
use crate::kisin_model::KisinInstance;
use crate::rational::{ceil, deficiency, frac, int, to_i64};

fn check_d(inst: &KisinInstance, d: usize) -> Result<()> {
    if inst.d != d {
        return Err(KisinError::DimensionMismatch { expected: d, got: inst.d });
    }
    Ok(())
}

/// `mu1 - (b-1) ceil((b mu1 + mu2)/(b^2-1))`, cross-checked against "the
/// largest integer `<= (mu1-mu2)/(b+1)` congruent to `mu1` mod `b-1`".
/// `None` when `b-1` does not divide `mu1 + mu2`, or when the formula is
/// negative: then the smallest admissible `mu_{2,2}` already exceeds `mu1`
/// and the variety is empty.
pub fn dim_d2_closed(mu1: i64, mu2: i64, inst: &KisinInstance) -> Result<Option<i64>> {
    check_d(inst, 2)?;
    if mu1 < mu2 {
        return Err(KisinError::InvalidInput(format!("need mu1 >= mu2, got ({mu1}, {mu2})")));
    }
    let b = inst.b as i64;
    if (mu1 + mu2).rem_euclid(b - 1) != 0 {
        return Ok(None);
    }
    let by_ceiling = mu1 - (b - 1) * to_i64(&ceil(&frac(b * mu1 + mu2, b * b - 1)));
    let top = (mu1 - mu2).div_euclid(b + 1);
    let by_congruence = top - (top - mu1).rem_euclid(b - 1);
    if by_ceiling != by_congruence {
        return Err(KisinError::Internal(format!(
            "the two d = 2 closed forms disagree at ({mu1}, {mu2}), b = {b}: {by_ceiling} vs {by_congruence}"
        )));
    }
    Ok((by_ceiling >= 0).then_some(by_ceiling))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct D3Closed {
    pub value: i64,
    /// `(mu1 - b^2-b-1, mu2, mu3 + b^2+b+1)` is integrally `b`-regular, the
    /// range where the formula is proven.
    pub valid: bool,
}

/// `2 mu1 + mu2 - 2(b-1) ceil(x) - (b-1) ceil(mu2/(b-1) - (b+1) m)` with
/// `x = (b mu1 + mu3)/(b^2-1)` and `m = max(def(x)/b, def(x) - (b-1)/(b+1))`.
///
/// `m` selects the better of the two candidate optima: `def/b` is the larger
/// term exactly when `def <= b/(b+1)`, the case where the first candidate
/// wins. Taking the smaller term undercounts by `b - 1` whenever `def` is
/// small.
pub fn dim_d3_closed(mu: [i64; 3], inst: &KisinInstance) -> Result<D3Closed> {
    check_d(inst, 3)?;
    let [mu1, mu2, mu3] = mu;
    if mu1 < mu2 || mu2 < mu3 {
        return Err(KisinError::InvalidInput(format!("need mu1 >= mu2 >= mu3, got {mu:?}")));
    }
    let b = inst.b as i64;
    if (mu1 + mu2 + mu3).rem_euclid(b - 1) != 0 {
        return Err(KisinError::InvalidInput(format!("b - 1 = {} does not divide the sum of {mu:?}", b - 1)));
    }
    let x = frac(b * mu1 + mu3, b * b - 1);
    let def = deficiency(&x);
    let m = std::cmp::max(&def / int(b), &def - frac(b - 1, b + 1));
    let inner = frac(mu2, b - 1) - int(b + 1) * m;
    let value = 2 * mu1 + mu2 - 2 * (b - 1) * to_i64(&ceil(&x)) - (b - 1) * to_i64(&ceil(&inner));
    let shift = b * b + b + 1;
    let valid = regularity(&[mu1 - shift, mu2, mu3 + shift], inst).integrally_b_regular;
    Ok(D3Closed { value, valid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d2_examples() {
        let i2 = KisinInstance::new(2, 2, false).unwrap();
        let i3 = KisinInstance::new(2, 3, false).unwrap();
        assert_eq!(dim_d2_closed(3, 0, &i2).unwrap(), Some(1));
        assert_eq!(dim_d2_closed(2, 0, &i3).unwrap(), Some(0));
        assert_eq!(dim_d2_closed(2, 1, &i3).unwrap(), None);
        assert_eq!(dim_d2_closed(4, 4, &i3).unwrap(), Some(0));
        assert_eq!(dim_d2_closed(1, 1, &i3).unwrap(), None);
    }

    #[test]
    fn d3_flat_is_outside_range() {
        let i = KisinInstance::new(3, 2, false).unwrap();
        assert!(!dim_d3_closed([5, 5, 5], &i).unwrap().valid);
    }
}
