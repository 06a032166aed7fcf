//! Lazy enumeration of the subspace lattice.
//!
//! A k-dimensional subspace has a unique RREF basis, determined by the
//! strictly increasing pivot columns and the free entries. Enumeration
//! iterates pivot patterns lexicographically, then free entries
//! lexicographically, so two runs produce byte-identical streams.

use num::bigint::BigInt;
use num::ToPrimitive;

use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::qcombinat::{gaussian_binomial, qr};

/// Default cap on the number of subspaces materialized by one enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Number of k-dimensional subspaces of F_q^n as a big integer.
pub fn layer_count(n: u32, k: u32, q: u32) -> BigInt {
    gaussian_binomial(n as i64, k as i64, &qr(q)).to_integer()
}

/// Number of all subspaces of F_q^n.
pub fn lattice_count(n: u32, q: u32) -> BigInt {
    (0..=n).map(|k| layer_count(n, k, q)).sum()
}

fn check_cap(count: &BigInt, cap: u64) -> Result<()> {
    if count > &BigInt::from(cap) {
        let count = count.to_u128().unwrap_or(u128::MAX);
        return Err(Error::EnumerationCap { count, cap: cap as u128 });
    }
    Ok(())
}

/// Streaming enumeration of one Grassmannian layer.
pub struct Grassmannian {
    n: u32,
    k: u32,
    q: u32,
    pivots: Vec<u32>,
    free_values: Vec<u8>,
    free_positions: Vec<(usize, usize)>,
    exhausted: bool,
    fresh_pattern: bool,
}

impl Grassmannian {
    pub fn new(n: u32, k: u32, q: u32, cap: u64) -> Result<Grassmannian> {
        if k > n {
            return Err(Error::InvalidParameter(format!("k={k} exceeds n={n}")));
        }
        crate::gfspace::field::FiniteField::get(q)?;
        check_cap(&layer_count(n, k, q), cap)?;
        let pivots: Vec<u32> = (0..k).collect();
        let mut g = Grassmannian {
            n,
            k,
            q,
            pivots,
            free_values: Vec::new(),
            free_positions: Vec::new(),
            exhausted: false,
            fresh_pattern: true,
        };
        g.reload_free_positions();
        Ok(g)
    }

    fn reload_free_positions(&mut self) {
        self.free_positions.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in (p + 1)..self.n {
                if !self.pivots.contains(&c) {
                    self.free_positions.push((i, c as usize));
                }
            }
        }
        self.free_values = vec![0; self.free_positions.len()];
        self.fresh_pattern = true;
    }

    fn build(&self) -> Subspace {
        let n = self.n as usize;
        let mut rows = vec![0u8; self.k as usize * n];
        for (i, &p) in self.pivots.iter().enumerate() {
            rows[i * n + p as usize] = 1;
        }
        for (vi, &(r, c)) in self.free_positions.iter().enumerate() {
            rows[r * n + c] = self.free_values[vi];
        }
        Subspace::from_rref_unchecked(self.n, self.q, rows)
    }

    fn advance_values(&mut self) -> bool {
        // odometer, last position fastest
        for i in (0..self.free_values.len()).rev() {
            if (self.free_values[i] as u32) + 1 < self.q {
                self.free_values[i] += 1;
                for v in &mut self.free_values[i + 1..] {
                    *v = 0;
                }
                return true;
            }
        }
        false
    }

    fn advance_pattern(&mut self) -> bool {
        let k = self.k as usize;
        if k == 0 {
            return false;
        }
        let n = self.n;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - (k - i) as u32 {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                self.reload_free_positions();
                return true;
            }
        }
        false
    }
}

impl Iterator for Grassmannian {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.exhausted {
            return None;
        }
        if self.fresh_pattern {
            self.fresh_pattern = false;
            return Some(self.build());
        }
        if self.advance_values() {
            return Some(self.build());
        }
        if self.advance_pattern() {
            self.fresh_pattern = false;
            return Some(self.build());
        }
        self.exhausted = true;
        None
    }
}

/// All subspaces of F_q^n, layer by layer with k ascending.
pub fn enumerate_all(n: u32, q: u32, cap: u64) -> Result<impl Iterator<Item = Subspace>> {
    check_cap(&lattice_count(n, q), cap)?;
    let layers: Vec<Grassmannian> =
        (0..=n).map(|k| Grassmannian::new(n, k, q, cap)).collect::<Result<_>>()?;
    Ok(layers.into_iter().flatten())
}

/// Convenience collector for one layer.
pub fn layer(n: u32, k: u32, q: u32, cap: u64) -> Result<Vec<Subspace>> {
    Ok(Grassmannian::new(n, k, q, cap)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_gaussians() {
        for (n, q) in [(5u32, 2u32), (4, 3), (3, 4), (3, 5)] {
            for k in 0..=n {
                let got = Grassmannian::new(n, k, q, DEFAULT_ENUM_CAP).unwrap().count();
                let expect = layer_count(n, k, q).to_u64().unwrap() as usize;
                assert_eq!(got, expect, "n={n} k={k} q={q}");
            }
        }
    }

    #[test]
    fn no_duplicates_and_canonical() {
        let all: Vec<Subspace> = enumerate_all(4, 2, DEFAULT_ENUM_CAP).unwrap().collect();
        assert_eq!(all.len(), 67);
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 67);
        // re-canonicalizing is a no-op
        for s in &all {
            let rows: Vec<Vec<u8>> = s.rows().map(|r| r.to_vec()).collect();
            let again = Subspace::from_spanning(4, 2, &rows).unwrap();
            assert_eq!(&again, s);
        }
    }

    #[test]
    fn zero_layer_is_zero_subspace() {
        let xs = layer(5, 0, 2, 10).unwrap();
        assert_eq!(xs, vec![Subspace::zero(5, 2)]);
        let xs: Vec<Subspace> = enumerate_all(0, 3, 10).unwrap().collect();
        assert_eq!(xs.len(), 1);
    }

    #[test]
    fn lattice_totals() {
        assert_eq!(lattice_count(3, 2), BigInt::from(16));
        assert_eq!(lattice_count(4, 2), BigInt::from(67));
        assert_eq!(lattice_count(5, 2), BigInt::from(374));
        assert_eq!(lattice_count(4, 3), BigInt::from(212));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            enumerate_all(5, 2, 100).err().unwrap(),
            Error::EnumerationCap { .. }
        ));
        assert!(Grassmannian::new(4, 2, 2, 10).is_err());
    }

    #[test]
    fn deterministic_stream() {
        let a: Vec<Subspace> = enumerate_all(4, 3, DEFAULT_ENUM_CAP).unwrap().collect();
        let b: Vec<Subspace> = enumerate_all(4, 3, DEFAULT_ENUM_CAP).unwrap().collect();
        assert_eq!(a, b);
    }
}
