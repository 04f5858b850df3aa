//! Ordered configuration spaces of star graphs: the cube complex model, exact
//! integral homology, chessboard nerves, the Mayer–Vietoris page of the
//! particle-on-a-leaf cover and the FI_{d,o} calculus acting on it.
//!
//! Elimination is generic over the integer scalar; the aliases below name
//! the instantiations used throughout.

pub mod config;
pub mod error;
pub mod fio;
pub mod homology;
pub mod nerve;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};

/// Sparse integer matrix with 64-bit entries, the usual boundary type.
pub type SmallIntMatrix = homology::SparseMatrix<i64>;
/// Sparse integer matrix with arbitrary-precision entries.
pub type IntMatrix = homology::SparseMatrix<num_bigint::BigInt>;
/// The integers, computed with checked 64-bit arithmetic.
pub type Z64 = scalar::Integers<i64>;
/// The integers, computed with big integers.
pub type BigZ = scalar::Integers<num_bigint::BigInt>;
