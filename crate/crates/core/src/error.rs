use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {n} is outside the supported range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },

    #[error("malformed matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (|A - A*| = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("outside the numeric domain: {0}")]
    Domain(String),

    #[error("expansion order {n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("state vector is not normalized (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("quadratic form expected real, found imaginary part {imag:.3e}")]
    ImaginaryResidue { imag: f64 },

    #[error("unknown inequality id `{0}`")]
    UnknownId(String),

    #[error("instance does not fit inequality {id}: {reason}")]
    ShapeMismatch { id: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not build a `{ensemble}` instance satisfying its condition after {attempts} attempts")]
    ConditionUnsatisfiable {
        ensemble: &'static str,
        attempts: usize,
    },
}

impl Error {
    /// Stable short name of the variant, used to tally inconclusive trials.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionOutOfRange { .. } => "dimension_out_of_range",
            Error::InvalidMatrix(_) => "invalid_matrix",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NotPsd { .. } => "not_psd",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Domain(_) => "domain",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::NotUnitVector { .. } => "not_unit_vector",
            Error::ImaginaryResidue { .. } => "imaginary_residue",
            Error::UnknownId(_) => "unknown_id",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::ConditionUnsatisfiable { .. } => "condition_unsatisfiable",
        }
    }
}
