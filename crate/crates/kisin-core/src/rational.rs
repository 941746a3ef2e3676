//! Exact rational scalars and small vector helpers.
//!
//! Every quantity in the crate is a [`Rational`] kept in lowest terms with
//! unbounded integers. Text form is `p/q` (or `p` when the denominator is 1).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::KisinError;

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ivec(xs: &[i64]) -> RationalVector {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn zeros(n: usize) -> RationalVector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, k: usize) -> RationalVector {
    let mut v = zeros(n);
    v[k] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RationalVector {
    a.iter().map(|x| x * s).collect()
}

pub fn sum(a: &[Rational]) -> Rational {
    a.iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Largest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// `ceil(x) - x`, in `[0, 1)`.
pub fn deficiency(x: &Rational) -> Rational {
    Rational::from_integer(ceil(x)) - x
}

pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer out of i64 range")
}

/// Converts an integral rational to `i64`, `None` when it is not an integer.
pub fn rat_to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn fmt_rat(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rational, KisinError> {
    let s = s.trim();
    let bad = || KisinError::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn parse_vec(v: &[String]) -> Result<RationalVector, KisinError> {
    v.iter().map(|s| parse_rat(s)).collect()
}

pub fn lcm_denominators(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(ints)
}

pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Lexicographic order on rational vectors.
pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    a.iter().cmp(b.iter())
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}
