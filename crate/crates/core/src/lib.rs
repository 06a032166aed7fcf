#![allow(clippy::manual_is_multiple_of)]

//! Biased measures on the subspace lattice of F_q^n, with exact
//! verification of the extremal bounds for intersecting families.
//!
//! The crate provides:
//! - exact q-arithmetic and the summation identities behind it ([`qcombinat`]),
//! - finite fields and canonical subspace enumeration ([`gfspace`]),
//! - the sigma-biased measure, its concentration moments, and tail
//!   normalizations ([`measure`]),
//! - intersecting-family constructions, an exact maximum-measure search,
//!   and the arithmetic counterexamples ([`families`]),
//! - the dual certificate for the star bound, exact per-block and as a
//!   float assembly over the whole lattice ([`certificate`]).

pub mod certificate;
pub mod error;
pub mod families;
pub mod gfspace;
pub mod measure;
pub mod qcombinat;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{parse_rational, Real, Scalar, DEFAULT_PRECISION_BITS, TAIL_PRECISION_BITS};
