//! Dense complex matrices and the decompositions the rest of the crate is
//! built on.

mod eigen;
mod matrix;
mod polar;
mod power;
mod svd;

pub use eigen::{check_hermitian, hermitian_eig, hermitian_eigvals, HermitianEigen, HERMITIAN_TOL};
pub use matrix::{ComplexMatrix, MAX_DIM};
pub use polar::{abs_adjoint, abs_op, polar, PolarFactors};
pub use power::{
    mat_power, spectral_radius, SpectralRadius, GELFAND_MAX_STEPS, GELFAND_STEP_TOL,
    SPECTRAL_RADIUS_TOL,
};
pub use svd::{ell, operator_norm, svd, SingularTriple};

pub(crate) use eigen::{eigvals_in_place, recompose_with};
