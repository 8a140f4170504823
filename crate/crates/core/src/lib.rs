//! Exact computations for noncommutative differential calculi on the
//! symmetric groups: exterior algebras built from a conjugacy class,
//! de Rham cohomology, flat connections with constant coefficients,
//! invariant metrics, and the braided Hopf structure of the
//! Fomin-Kirillov algebras.
//!
//! All arithmetic is over the rationals; nothing here uses floating point.

pub mod algebra;
pub mod cache;
pub mod crossed;
pub mod derham;
pub mod error;
pub mod expr;
pub mod flat;
pub mod geometry;
pub mod hopf;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod suite;

pub use error::{Error, Result};
