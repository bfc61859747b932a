//! Verification workbench for enhanced ADHM representations of numerical
//! type `(1, c, 1)`.
//!
//! A representation `X = (A, B, I, J, A', B', F)` lives in [`rep`]; its
//! deformation complex and tangent space in [`deformation`]; the holomorphic
//! 2-form, its Gram matrix and the degeneracy verdict in [`symplectic`]; the
//! Jordan-type normal forms and the degeneracy predictor in [`normalform`].
//! Everything is generic over the scalar realization in [`numkernel`].

pub mod deformation;
pub mod error;
pub mod normalform;
pub mod numkernel;
pub mod rep;
pub mod symplectic;

pub use error::{Error, Result};

pub use deformation::{DeformationComplex, TangentVector};
pub use normalform::{CaseKind, CaseLabel, CaseParams, Classification, DiagonalParams};
pub use rep::{DimVector, EnhancedRep, ResidualSet, Stability};
pub use symplectic::GramReport;
pub use numkernel::{EigenStructure, Exact, Float, Matrix, Scalar};

