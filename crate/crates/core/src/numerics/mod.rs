//! Dense linear algebra substrate.

mod eigen;
mod matrix;
mod orth;
mod power;
mod scalar;
mod svd;
mod tolerance;

pub use eigen::{sym_eigen, SymmetricEigen};
pub use matrix::Matrix;
pub use orth::{complete_orthonormal, orthonormal_basis};
pub use power::spectral_power;
pub use scalar::{inner, norm, norm_sqr, random_unit_vector, random_vector, Field, Scalar};
pub use svd::{singular_values, svd, Svd};
pub use tolerance::Tolerances;
