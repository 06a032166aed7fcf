//! Finite-field arithmetic and the subspace lattice of F_q^n.

pub mod field;
pub mod grassmannian;
pub mod subspace;

pub use field::{FiniteField, SUPPORTED_ORDERS};
pub use grassmannian::{
    enumerate_all, lattice_count, layer, layer_count, Grassmannian, DEFAULT_ENUM_CAP,
};
pub use subspace::{rref, Subspace};
