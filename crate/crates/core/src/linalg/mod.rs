//! Exact linear algebra over the rationals.

mod dense;
mod sparse;

pub use dense::{RationalMatrix, Rref};
pub use sparse::SparseEchelon;
