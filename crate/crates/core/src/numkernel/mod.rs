//! Field-generic dense linear algebra over exact Gaussian rationals and
//! double-precision complex numbers.

pub mod eigen;
pub mod matrix;
pub mod reduce;
pub mod scalar;

pub use eigen::{characteristic_polynomial, eigen_structure, EigenBlock, EigenStructure};
pub use matrix::Matrix;
pub use reduce::{column_space, inverse, nullspace, rank, rref, solve, Rref};
pub use scalar::{Exact, Float, Scalar};
