//! Extremal s-union families and s-union antichains in the lattice of
//! subspaces of GF(q)^n: exact constructions, closed-form bounds, and
//! exhaustive / branch-and-bound certification at small parameters.

pub mod cli;
pub mod error;
pub mod families;
pub mod gfq;
pub mod qbinom;
pub mod repro;
pub mod search;
pub mod subspace;

pub use error::{Error, Result};
pub use gfq::{Field, Matrix};
pub use qbinom::{gaussian_binomial, BigNat, BoundReport};
pub use subspace::{Family, Subspace};
