//! Arbitrary-precision real numbers backing the non-exact computation mode.
//!
//! Thin wrapper around `astro_float::BigFloat` that carries its working
//! precision (binary significand bits) and panics on NaN, which can only
//! arise from domain errors that the callers rule out (negative arguments
//! to ln/sqrt and the like).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num::bigint::BigInt;
use num::rational::BigRational;

/// Default significand size in bits for real-mode computations.
pub const DEFAULT_PRECISION_BITS: usize = 256;
/// Wider default used for tail computations, where normalizers like
/// q^(delta n^2) push exponents far beyond double range.
pub const TAIL_PRECISION_BITS: usize = 512;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// High-precision real number with an explicit precision in bits.
#[derive(Clone, Debug)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        assert!(!v.is_nan(), "real-mode operation produced NaN");
        Real { v, prec }
    }

    pub fn precision_bits(&self) -> usize {
        self.prec
    }

    pub fn zero(prec: usize) -> Self {
        Real::wrap(BigFloat::from_i64(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Real::wrap(BigFloat::from_i64(1, prec), prec)
    }

    pub fn from_u64(x: u64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_u64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_f64(x, prec), prec)
    }

    fn from_bigint(x: &BigInt, prec: usize) -> BigFloat {
        // Horner over base-2^64 digits, most significant first.
        let (sign, digits) = x.to_u64_digits();
        let p = prec.max(64 * digits.len() + 64);
        let two64 = BigFloat::from_u64(1u64 << 32, p).powi(2, p, RM);
        let mut acc = BigFloat::from_i64(0, p);
        for w in digits.iter().rev() {
            acc = acc.mul(&two64, p, RM).add(&BigFloat::from_u64(*w, p), p, RM);
        }
        if sign == num::bigint::Sign::Minus {
            acc.inv_sign();
        }
        acc
    }

    /// Converts an exact rational, correctly rounded to `prec` bits.
    pub fn from_rational(r: &BigRational, prec: usize) -> Self {
        let num = Self::from_bigint(r.numer(), prec);
        let den = Self::from_bigint(r.denom(), prec);
        Real::wrap(num.div(&den, prec, RM), prec)
    }

    fn join(&self, other: &Real) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Real) -> Real {
        let p = self.join(other);
        Real::wrap(self.v.add(&other.v, p, RM), p)
    }

    pub fn sub(&self, other: &Real) -> Real {
        let p = self.join(other);
        Real::wrap(self.v.sub(&other.v, p, RM), p)
    }

    pub fn mul(&self, other: &Real) -> Real {
        let p = self.join(other);
        Real::wrap(self.v.mul(&other.v, p, RM), p)
    }

    pub fn div(&self, other: &Real) -> Real {
        let p = self.join(other);
        Real::wrap(self.v.div(&other.v, p, RM), p)
    }

    pub fn neg(&self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn recip(&self) -> Real {
        Real::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    /// Integer power with sign handling; `0^0 = 1`.
    pub fn powi(&self, e: i64) -> Real {
        if e == 0 {
            return Real::one(self.prec);
        }
        let p = self.prec;
        let pos = self.v.powi(e.unsigned_abs() as usize, p, RM);
        if e < 0 {
            Real::wrap(pos.reciprocal(p, RM), p)
        } else {
            Real::wrap(pos, p)
        }
    }

    /// General power for positive base.
    pub fn pow(&self, e: &Real) -> Real {
        let p = self.join(e);
        Real::wrap(with_consts(|cc| self.v.pow(&e.v, p, RM, cc)), p)
    }

    /// `self^(a/b)` for positive base; integer exponents take the exact path.
    pub fn pow_rational(&self, e: &BigRational) -> Real {
        if e.is_integer() {
            if let Some(i) = int_to_i64(e.numer()) {
                return self.powi(i);
            }
        }
        self.pow(&Real::from_rational(e, self.prec))
    }

    pub fn exp(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn ln(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    /// Positive n-th root of a positive value.
    pub fn nth_root(&self, n: u32) -> Real {
        assert!(n > 0);
        if n == 1 {
            return self.clone();
        }
        if self.v.is_zero() {
            return Real::zero(self.prec);
        }
        let inv_n = Real::from_u64(n as u64, self.prec).recip();
        self.ln().mul(&inv_n).exp()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn cmp_real(&self, other: &Real) -> Ordering {
        match self.v.cmp(&other.v) {
            Some(s) if s < 0 => Ordering::Less,
            Some(s) if s > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("NaN in real comparison"),
        }
    }

    /// Lossy conversion for display and float interop.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let (words, n, sign, e, _) = self.v.as_raw_parts().expect("finite value");
        // value = 0.mantissa * 2^e, mantissa normalized, little endian words
        let mut top = 0u128;
        for (i, w) in words.iter().rev().take(2).enumerate() {
            if i == 0 {
                top = (*w as u128) << 64;
            } else {
                top |= *w as u128;
            }
        }
        let _ = n;
        let frac = top as f64 / 2f64.powi(128);
        let mag = frac * 2f64.powi(e);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Deterministic decimal rendering (scientific form).
    pub fn to_decimal_string(&self) -> String {
        with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "Err".into())
    }

    /// Relative tolerance the crate promises at this precision: 2^(-prec/2).
    pub fn contract_tolerance(prec: usize) -> Real {
        Real::from_u64(2, prec).powi(-((prec / 2) as i64))
    }
}

fn int_to_i64(x: &BigInt) -> Option<i64> {
    use num::ToPrimitive;
    x.to_i64()
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_real(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_real(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    #[test]
    fn rational_roundtrip() {
        let r = BigRational::new(BigInt::from_i64(7).unwrap(), BigInt::from_i64(3).unwrap());
        let x = Real::from_rational(&r, 256);
        assert!((x.to_f64() - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn huge_integer_conversion() {
        let mut big = BigInt::from_u64(1).unwrap();
        for _ in 0..100 {
            big *= 1_000_003u64;
        }
        let r = BigRational::from_integer(big.clone());
        let x = Real::from_rational(&r, 256);
        let expect = 100.0 * (1_000_003f64).ln();
        assert!((x.ln().to_f64() - expect).abs() < 1e-9);
    }

    #[test]
    fn tiny_magnitudes_survive() {
        // q^{-2520}: far below f64 range, must stay meaningful
        let q = Real::from_u64(3, 512);
        let x = q.powi(-2520);
        assert!(x.is_positive());
        let log2 = x.ln().div(&Real::from_u64(2, 512).ln());
        assert!((log2.to_f64() + 2520.0 * 3f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn pow_rational_integer_fast_path() {
        let q = Real::from_u64(2, 256);
        let e = BigRational::from_i64(10).unwrap();
        assert!((q.pow_rational(&e).to_f64() - 1024.0).abs() < 1e-12);
        let half = BigRational::new(BigInt::from_i64(3).unwrap(), BigInt::from_i64(2).unwrap());
        assert!((q.pow_rational(&half).to_f64() - 2f64.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn nth_root_inverts_powi() {
        let x = Real::from_u64(7, 256).powi(11);
        let back = x.nth_root(11);
        assert!((back.to_f64() - 7.0).abs() < 1e-12);
    }
}
