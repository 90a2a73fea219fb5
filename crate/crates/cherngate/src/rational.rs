//! Exact rational scalars.
//!
//! All coefficients in the engine are arbitrary-precision rationals, kept
//! reduced to lowest terms with a positive denominator by the underlying
//! representation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `1/n!`
pub fn inv_factorial(n: usize) -> Rational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    BigRational::new(BigInt::one(), f)
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// Residue of an integer-valued rational modulo `m`, in `0..m`.
///
/// Returns `None` when `r` is not an integer.
pub fn residue_mod(r: &Rational, m: u64) -> Option<BigInt> {
    if !r.is_integer() {
        return None;
    }
    let m = BigInt::from(m);
    let mut v = r.to_integer() % &m;
    if v.is_negative() {
        v += &m;
    }
    Some(v)
}

/// Serialize a rational as its canonical string form (`-7/12`, `3`).
pub mod rational_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coefficients of the series t/(1 - e^{-t}) up to degree `n`:
/// 1, 1/2, 1/12, 0, -1/720, ...
///
/// Computed by inverting (1 - e^{-t})/t = sum_k (-1)^k t^k/(k+1)!.
pub fn todd_series_coeffs(n: usize) -> Vec<Rational> {
    let d: Vec<Rational> = (0..=n)
        .map(|k| {
            let c = inv_factorial(k + 1);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    invert_series(&d)
}

/// Coefficients of the series t/(e^t - 1) up to degree `n`:
/// 1, -1/2, 1/12, 0, -1/720, ...
pub fn exp_recip_series_coeffs(n: usize) -> Vec<Rational> {
    todd_series_coeffs(n)
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c } else { -c })
        .collect()
}

/// Multiplicative inverse of a power series given by its coefficients,
/// to the same truncation order. The constant term must be nonzero.
pub fn invert_series(d: &[Rational]) -> Vec<Rational> {
    assert!(!d.is_empty() && !d[0].is_zero(), "series not invertible");
    let mut out = Vec::with_capacity(d.len());
    out.push(d[0].recip());
    for k in 1..d.len() {
        let mut acc = Rational::zero();
        for i in 0..k {
            acc += &out[i] * &d[k - i];
        }
        out.push(-acc / &d[0]);
    }
    out
}
