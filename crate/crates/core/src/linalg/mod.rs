//! Exact linear algebra generic over [`Scalar`](crate::scalar::Scalar).

mod dense;
mod sparse;

pub use dense::{EchelonBasis, Kernel, Matrix};
pub use sparse::{SparseEchelon, SparseMatrix, SparseVec};
