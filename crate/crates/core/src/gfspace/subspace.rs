//! Canonical subspace representation: the reduced row echelon basis.
//!
//! Two subspaces are equal iff their RREF bytes are equal, and the
//! lexicographic order on those bytes is the total order used for all
//! deterministic tie-breaking downstream.

use std::cmp::Ordering;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::field::FiniteField;
use crate::error::{Error, Result};

/// A subspace of F_q^n, stored as its RREF basis (dim x n, row major).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: u32,
    q: u32,
    rows: Vec<u8>,
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(n: u32, q: u32) -> Subspace {
        Subspace { n, q, rows: Vec::new() }
    }

    /// The whole space F_q^n.
    pub fn full(n: u32, q: u32) -> Subspace {
        let mut rows = vec![0u8; (n * n) as usize];
        for i in 0..n as usize {
            rows[i * n as usize + i] = 1;
        }
        Subspace { n, q, rows }
    }

    /// Span of the first `t` standard basis vectors.
    pub fn coordinate_subspace(n: u32, q: u32, t: u32) -> Subspace {
        assert!(t <= n);
        let mut rows = vec![0u8; (t * n) as usize];
        for i in 0..t as usize {
            rows[i * n as usize + i] = 1;
        }
        Subspace { n, q, rows }
    }

    /// Canonicalizes a spanning set into a subspace.
    pub fn from_spanning(n: u32, q: u32, spanning: &[Vec<u8>]) -> Result<Subspace> {
        let field = FiniteField::get(q)?;
        for r in spanning {
            if r.len() != n as usize {
                return Err(Error::InvalidParameter(format!(
                    "row length {} does not match ambient dimension {n}",
                    r.len()
                )));
            }
            if r.iter().any(|&x| x as u32 >= q) {
                return Err(Error::InvalidParameter("entry outside field range".into()));
            }
        }
        let mut flat: Vec<u8> = Vec::with_capacity(spanning.len() * n as usize);
        for r in spanning {
            flat.extend_from_slice(r);
        }
        let (rank, rows) = rref(field, flat, spanning.len(), n as usize);
        let _ = rank;
        Ok(Subspace { n, q, rows })
    }

    /// Internal fast path: rows already known to be canonical RREF.
    pub(crate) fn from_rref_unchecked(n: u32, q: u32, rows: Vec<u8>) -> Subspace {
        Subspace { n, q, rows }
    }

    pub fn ambient(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> u32 {
        if self.n == 0 {
            0
        } else {
            (self.rows.len() / self.n as usize) as u32
        }
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i * self.n as usize..(i + 1) * self.n as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.rows.chunks_exact(self.n.max(1) as usize).take(self.dim() as usize)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::AmbientMismatch {
                n1: self.n,
                q1: self.q,
                n2: other.n,
                q2: other.q,
            });
        }
        Ok(())
    }

    /// dim(x ∩ y) = dim x + dim y - rank(stacked bases).
    pub fn intersection_dim(&self, other: &Subspace) -> Result<u32> {
        self.check_ambient(other)?;
        let field = FiniteField::get(self.q)?;
        let mut flat = self.rows.clone();
        flat.extend_from_slice(&other.rows);
        let total_rows = (self.dim() + other.dim()) as usize;
        let (rank, _) = rref(field, flat, total_rows, self.n as usize);
        Ok(self.dim() + other.dim() - rank as u32)
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        Ok(self.intersection_dim(other)? == other.dim())
    }

    /// True iff the two subspaces meet only in 0.
    pub fn is_disjoint(&self, other: &Subspace) -> Result<bool> {
        Ok(self.intersection_dim(other)? == 0)
    }

    /// Compact encoding: one hex digit per entry, rows joined by ':'.
    pub fn to_hex(&self) -> String {
        const HEX: &[u8; 16] = b"0123456789abcdef";
        if self.dim() == 0 {
            return "".into();
        }
        let mut out = String::new();
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                out.push(':');
            }
            for &e in row {
                out.push(HEX[e as usize] as char);
            }
        }
        out
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.q, &self.rows).cmp(&(other.n, other.q, &other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Subspace", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("q", &self.q)?;
        let rows: Vec<Vec<u8>> = self.rows().map(|r| r.to_vec()).collect();
        s.serialize_field("rows", &rows)?;
        s.end()
    }
}

/// Gauss-Jordan canonicalization. Takes a flattened `rows x cols` matrix,
/// returns (rank, RREF rows with zero rows dropped).
pub fn rref(field: &FiniteField, mut flat: Vec<u8>, rows: usize, cols: usize) -> (usize, Vec<u8>) {
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let mut found = None;
        for r in pivot_row..rows {
            if flat[r * cols + col] != 0 {
                found = Some(r);
                break;
            }
        }
        let Some(r) = found else { continue };
        if r != pivot_row {
            for c in 0..cols {
                flat.swap(pivot_row * cols + c, r * cols + c);
            }
        }
        let inv = field.inv(flat[pivot_row * cols + col]);
        for c in col..cols {
            flat[pivot_row * cols + c] = field.mul(flat[pivot_row * cols + c], inv);
        }
        for r2 in 0..rows {
            if r2 != pivot_row && flat[r2 * cols + col] != 0 {
                let factor = flat[r2 * cols + col];
                for c in col..cols {
                    let delta = field.mul(factor, flat[pivot_row * cols + c]);
                    flat[r2 * cols + c] = field.sub(flat[r2 * cols + c], delta);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    flat.truncate(pivot_row * cols);
    (pivot_row, flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_zero_and_identity() {
        let f = FiniteField::get(2).unwrap();
        let (rank, rows) = rref(f, vec![0, 0, 0, 0, 0, 0], 2, 3);
        assert_eq!(rank, 0);
        assert!(rows.is_empty());
        let (rank, rows) = rref(f, vec![1, 0, 0, 1], 2, 2);
        assert_eq!(rank, 2);
        assert_eq!(rows, vec![1, 0, 0, 1]);
    }

    #[test]
    fn rref_dependent_rows() {
        // third row is the sum of the first two over F_2
        let s = Subspace::from_spanning(3, 2, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]])
            .unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn rref_idempotent() {
        let f = FiniteField::get(3).unwrap();
        let m = vec![2, 1, 0, 1, 1, 1, 0, 2, 2];
        let (r1, c1) = rref(f, m, 3, 3);
        let (r2, c2) = rref(f, c1.clone(), r1, 3);
        assert_eq!(r1, r2);
        assert_eq!(c1, c2);
    }

    #[test]
    fn containment_and_intersection() {
        let plane = Subspace::coordinate_subspace(3, 2, 2);
        let line = Subspace::coordinate_subspace(3, 2, 1);
        let zero = Subspace::zero(3, 2);
        assert!(plane.contains(&line).unwrap());
        assert!(!line.contains(&plane).unwrap());
        assert!(plane.contains(&zero).unwrap());
        assert!(plane.contains(&plane).unwrap());
        assert_eq!(plane.intersection_dim(&plane).unwrap(), 2);
        assert_eq!(plane.intersection_dim(&zero).unwrap(), 0);
        // two distinct planes of F_2^3 share a line
        let other = Subspace::from_spanning(3, 2, &[vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(plane.intersection_dim(&other).unwrap(), 1);
    }

    #[test]
    fn spanning_input_validation() {
        assert!(Subspace::from_spanning(3, 2, &[vec![0, 2, 0]]).is_err());
        assert!(Subspace::from_spanning(3, 2, &[vec![1, 0]]).is_err());
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let a = Subspace::zero(3, 2);
        let b = Subspace::zero(4, 2);
        assert!(a.intersection_dim(&b).is_err());
    }

    #[test]
    fn hex_encoding() {
        let s = Subspace::coordinate_subspace(3, 2, 2);
        assert_eq!(s.to_hex(), "100:010");
    }
}
