//! Finite fields of order q <= 16 with precomputed operation tables.
//!
//! Prime fields use modular arithmetic; prime-power fields represent
//! elements as polynomials over the prime subfield, packed base-p into an
//! integer index, reduced by a fixed irreducible polynomial:
//!
//!   GF(4):  x^2 + x + 1          over GF(2)
//!   GF(8):  x^3 + x + 1          over GF(2)
//!   GF(16): x^4 + x + 1          over GF(2)
//!   GF(9):  x^2 + 2x + 2         over GF(3)
//!
//! Tables are built once per order and shared process-wide.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const SUPPORTED_ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

/// Irreducible polynomial coefficients (ascending degree, including the
/// leading 1) for each supported prime-power order.
fn modulus_poly(q: u32) -> Option<&'static [u8]> {
    match q {
        4 => Some(&[1, 1, 1]),
        8 => Some(&[1, 1, 0, 1]),
        16 => Some(&[1, 1, 0, 0, 1]),
        9 => Some(&[2, 2, 1]),
        _ => None,
    }
}

/// A finite field with lookup tables for all operations.
#[derive(Debug)]
pub struct FiniteField {
    q: u32,
    p: u32,
    degree: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>, // inv[0] unused
}

impl FiniteField {
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    fn build(q: u32) -> Result<FiniteField> {
        if !SUPPORTED_ORDERS.contains(&q) {
            return Err(Error::UnsupportedOrder(q));
        }
        let (p, degree) = factor_prime_power(q);
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        if degree == 1 {
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = ((a + b) % n) as u8;
                    mul[a * n + b] = ((a * b) % n) as u8;
                }
            }
        } else {
            let modp = modulus_poly(q).expect("modulus for prime power");
            let unpack = |x: usize| -> Vec<u8> {
                let mut digits = vec![0u8; degree as usize];
                let mut v = x;
                for d in digits.iter_mut() {
                    *d = (v % p as usize) as u8;
                    v /= p as usize;
                }
                digits
            };
            let pack = |digits: &[u8]| -> usize {
                digits.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
            };
            for a in 0..n {
                let da = unpack(a);
                for b in 0..n {
                    let db = unpack(b);
                    let sum: Vec<u8> =
                        da.iter().zip(&db).map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8).collect();
                    add[a * n + b] = pack(&sum) as u8;
                    // polynomial product reduced by the modulus
                    let mut prod = vec![0u32; 2 * degree as usize];
                    for (i, &x) in da.iter().enumerate() {
                        for (j, &y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
                        }
                    }
                    for i in (degree as usize..prod.len()).rev() {
                        let c = prod[i];
                        if c == 0 {
                            continue;
                        }
                        prod[i] = 0;
                        for (k, &m) in modp[..degree as usize].iter().enumerate() {
                            let idx = i - degree as usize + k;
                            prod[idx] = (prod[idx] + c * (p - m as u32)) % p;
                        }
                    }
                    let reduced: Vec<u8> = prod[..degree as usize].iter().map(|&x| x as u8).collect();
                    mul[a * n + b] = pack(&reduced) as u8;
                }
            }
        }
        let mut neg = vec![0u8; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u8;
                    break;
                }
            }
        }
        let mut inv = vec![0u8; n];
        for a in 1..n {
            let mut found = false;
            for b in 1..n {
                if mul[a * n + b] == 1 {
                    inv[a] = b as u8;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::UnsupportedOrder(q));
            }
        }
        Ok(FiniteField { q, p, degree, add, mul, neg, inv })
    }

    /// Shared field instance for a supported order.
    pub fn get(q: u32) -> Result<&'static FiniteField> {
        static FIELDS: OnceLock<Vec<(u32, FiniteField)>> = OnceLock::new();
        let all = FIELDS.get_or_init(|| {
            SUPPORTED_ORDERS
                .iter()
                .map(|&q| (q, FiniteField::build(q).expect("supported order")))
                .collect()
        });
        all.iter()
            .find(|(o, _)| *o == q)
            .map(|(_, f)| f)
            .ok_or(Error::UnsupportedOrder(q))
    }
}

fn factor_prime_power(q: u32) -> (u32, u32) {
    for p in [2u32, 3, 5, 7, 11, 13] {
        if q % p == 0 {
            let mut m = 0;
            let mut v = q;
            while v % p == 0 {
                v /= p;
                m += 1;
            }
            assert_eq!(v, 1, "{q} is not a power of {p}");
            return (p, m);
        }
    }
    unreachable!("unsupported order")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_is_xor() {
        let f = FiniteField::get(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf4_is_not_z4() {
        let f = FiniteField::get(4).unwrap();
        // the two non-subfield elements square to each other, not themselves
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(3, 3), 2);
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn unsupported_order_rejected() {
        assert!(matches!(FiniteField::get(6), Err(Error::UnsupportedOrder(6))));
        assert!(FiniteField::get(32).is_err());
    }

    #[test]
    fn field_axioms_spot_checks() {
        for q in SUPPORTED_ORDERS {
            let f = FiniteField::get(q).unwrap();
            let n = q as u8;
            for a in 0..n {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..n {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..n {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }
}
