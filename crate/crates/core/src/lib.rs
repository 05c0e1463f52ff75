//! Numerical range, operator norms and operator inequalities for small
//! dense complex matrices.

pub mod binomial;
pub mod error;
pub mod inequality;
pub mod linalg;
pub mod radius;
pub mod random;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
