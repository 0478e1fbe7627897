//! Exact computations on pairs of dual reflexive Gorenstein cones.

pub mod dual;
pub mod error;
pub mod gkz;
pub mod gpoly;
pub mod graded;
pub mod jacobian;
pub mod job;
pub mod koszul;
pub mod lattice;
pub mod linalg;
pub mod scalar;
pub mod sheaf;

pub use dual::Dual;
pub use error::{Error, Result};
pub use graded::GradedDims;
pub use scalar::{Field, Rational, Scalar};

/// Rationals with one nilpotent `ε`, used for exact first derivatives.
pub type DualRational = Dual<Rational>;
/// Dense exact rational matrix.
pub type QMatrix = linalg::Matrix<Rational>;
/// Sparse exact rational matrix.
pub type QSparseMatrix = linalg::SparseMatrix<Rational>;
