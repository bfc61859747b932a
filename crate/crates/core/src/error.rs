use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite entry in a float matrix")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("vector is not in the image of d0")]
    NotInImage,
    #[error("irrational spectrum: characteristic polynomial does not split over Gaussian rationals")]
    IrrationalSpectrum,
    #[error("exact eigenvalue search too large (constant-term norm {0} exceeds the search bound)")]
    SpectrumSearchTooLarge(String),
    #[error("exact eigen-structure is only supported up to dimension 3 (got {0})")]
    ExactDimensionTooLarge(usize),
    #[error("numerical Jordan structure is inconsistent for eigenvalue cluster {0}")]
    NumericalJordan(String),
    #[error("unsupported dimension vector {0}")]
    UnsupportedDims(String),
    #[error("representation does not satisfy the enhanced ADHM equations: {0}")]
    NotOnVariety(String),
    #[error("representation is not stable: {0}")]
    Unstable(String),
    #[error("invalid normal-form parameters: {0}")]
    InvalidParams(String),
    #[error("normal-form template does not commute: {0}")]
    NonCommutingTemplate(String),
    #[error("sampler gave up after {0} rejections")]
    SamplerExhausted(usize),
    #[error("base point is not a diagonal (case i) normal form")]
    NotCaseI,
    #[error("vector is not tangent at the case (i) point: {0}")]
    NotTangent(String),
}
