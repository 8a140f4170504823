//! Exact rational linear algebra: numbers, dense matrices, sparse echelon
//! forms and modular determinants.

mod matrix;
mod rat;
mod sparse;

pub use matrix::{coordinates_in_span, is_prime_u64, QMatrix};
pub use rat::Rat;
pub use sparse::{Echelon, PivotSide, SparseVec};

/// The largest prime below 2^62; used to certify nonvanishing determinants.
pub const CERT_PRIME: u64 = 4_611_686_018_427_387_847;
