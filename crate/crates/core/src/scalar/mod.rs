//! Scalar values in two modes: exact arbitrary-precision rationals and
//! high-precision reals.
//!
//! Any operation whose inputs are all exact stays exact; a real input
//! contaminates the result to real mode at the operand's precision.

pub mod real;

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub use real::{Real, DEFAULT_PRECISION_BITS, TAIL_PRECISION_BITS};

use crate::error::{Error, Result};

/// A number that is either an exact rational or a high-precision real.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Real(Real),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(x: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(x)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn exact(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    pub fn real(r: Real) -> Self {
        Scalar::Real(r)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }

    /// Real-mode view at the given precision (used when mixing modes).
    pub fn to_real(&self, prec: usize) -> Real {
        match self {
            Scalar::Exact(r) => Real::from_rational(r, prec),
            Scalar::Real(x) => x.clone(),
        }
    }

    fn promote(a: &Scalar, b: &Scalar) -> Option<usize> {
        match (a, b) {
            (Scalar::Exact(_), Scalar::Exact(_)) => None,
            (Scalar::Real(x), Scalar::Real(y)) => Some(x.precision_bits().max(y.precision_bits())),
            (Scalar::Real(x), _) => Some(x.precision_bits()),
            (_, Scalar::Real(y)) => Some(y.precision_bits()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match Self::promote(self, other) {
            None => Scalar::Exact(self.as_exact().unwrap() + other.as_exact().unwrap()),
            Some(p) => Scalar::Real(self.to_real(p).add(&other.to_real(p))),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match Self::promote(self, other) {
            None => Scalar::Exact(self.as_exact().unwrap() - other.as_exact().unwrap()),
            Some(p) => Scalar::Real(self.to_real(p).sub(&other.to_real(p))),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match Self::promote(self, other) {
            None => Scalar::Exact(self.as_exact().unwrap() * other.as_exact().unwrap()),
            Some(p) => Scalar::Real(self.to_real(p).mul(&other.to_real(p))),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        match Self::promote(self, other) {
            None => Scalar::Exact(self.as_exact().unwrap() / other.as_exact().unwrap()),
            Some(p) => Scalar::Real(self.to_real(p).div(&other.to_real(p))),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Real(x) => Scalar::Real(x.neg()),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Real(x) => Scalar::Real(x.abs()),
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Real(x) => Scalar::Real(x.recip()),
        }
    }

    pub fn powi(&self, e: i64) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                let p = num::pow::pow(r.clone(), e.unsigned_abs() as usize);
                Scalar::Exact(if e < 0 { p.recip() } else { p })
            }
            Scalar::Real(x) => Scalar::Real(x.powi(e)),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Real(x) => x.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Real(x) => x.is_negative(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Real(x) => x.is_zero(),
        }
    }

    pub fn cmp_scalar(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let p = Self::promote(self, other).unwrap_or(DEFAULT_PRECISION_BITS);
                self.to_real(p).cmp_real(&other.to_real(p))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Real(x) => x.to_f64(),
        }
    }

    /// n-th root; exact inputs promote to real mode at `prec` bits.
    pub fn nth_root(&self, n: u32, prec: usize) -> Scalar {
        Scalar::Real(self.to_real(prec).nth_root(n))
    }

    /// `|self - other| <= tol * max(|self|, |other|, 1)`.
    pub fn close_to(&self, other: &Scalar, tol: &Scalar) -> bool {
        let diff = self.sub(other).abs();
        let mut scale = self.abs();
        let ob = other.abs();
        if ob.cmp_scalar(&scale) == Ordering::Greater {
            scale = ob;
        }
        if Scalar::one().cmp_scalar(&scale) == Ordering::Greater {
            scale = Scalar::one();
        }
        diff.cmp_scalar(&tol.mul(&scale)) != Ordering::Greater
    }

    /// Mode tag used in machine-readable output: `exact` or `real@bits`.
    pub fn mode_tag(&self) -> String {
        match self {
            Scalar::Exact(_) => "exact".into(),
            Scalar::Real(x) => format!("real@{}", x.precision_bits()),
        }
    }

    /// Value rendering used in machine-readable output.
    pub fn value_string(&self) -> String {
        match self {
            Scalar::Exact(r) => format_rational(r),
            Scalar::Real(x) => x.to_decimal_string(),
        }
    }
}

/// `f64` view of a rational that stays finite for huge numerators/denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    Real::from_rational(r, 128).to_f64()
}

/// Rationals render as `numerator/denominator` (or plain integer).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b`, integers, and decimal literals (`0.3` -> `3/10`) exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse rational from {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let ip: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let fp: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = num::pow::pow(BigInt::from(10), frac_part.len());
        let frac = BigRational::new(fp, scale);
        let whole = BigRational::from_integer(ip.abs());
        let total = whole + frac;
        return Ok(if neg { -total } else { total });
    }
    let i: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(i))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value_string())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => {
                let mut m = serializer.serialize_map(Some(2))?;
                m.serialize_entry("mode", "exact")?;
                m.serialize_entry("value", &self.value_string())?;
                m.end()
            }
            Scalar::Real(x) => {
                let mut m = serializer.serialize_map(Some(3))?;
                m.serialize_entry("mode", &self.mode_tag())?;
                m.serialize_entry("precision_bits", &x.precision_bits())?;
                m.serialize_entry("value", &self.value_string())?;
                m.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_stays_exact() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::from_ratio(1, 6);
        let c = a.add(&b);
        assert_eq!(c.as_exact().unwrap(), &BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn real_contaminates() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::Real(Real::from_u64(2, 256));
        assert!(!a.mul(&b).is_exact());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/8").unwrap(), BigRational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("0.3").unwrap(), BigRational::new(3.into(), 10.into()));
        assert_eq!(parse_rational("-2.5").unwrap(), BigRational::new((-5).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn ordering_across_modes() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::Real(Real::from_f64(0.5, 128));
        assert_eq!(a.cmp_scalar(&b), Ordering::Less);
    }

    #[test]
    fn rational_to_f64_handles_huge_values() {
        let mut n = BigInt::from(1);
        for _ in 0..50 {
            n *= 1_000_000_007u64;
        }
        let r = BigRational::new(n.clone(), n + 1);
        let v = rational_to_f64(&r);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
