use super::eigen::sym_eigen;
use super::matrix::Matrix;
use super::scalar::Scalar;
use super::tolerance::Tolerances;
use crate::error::{Error, Result};

/// `A^p` for positive semidefinite `A`, taken on the range of `A`.
///
/// Eigenvalues below `rank_tol · λ_max` are mapped to zero for every exponent,
/// so negative exponents give the pseudo-power and `p = 0` gives the projection
/// onto the range.
pub fn spectral_power<S: Scalar>(a: &Matrix<S>, exponent: f64, tol: &Tolerances) -> Result<Matrix<S>> {
    let e = sym_eigen(a, tol)?;
    let max = e.max().max(0.0);
    if let Some(&min) = e.values.last() {
        if min < -tol.sym * max.max(f64::MIN_POSITIVE) && min < 0.0 {
            return Err(Error::NegativeEigenvalue { value: min, max });
        }
    }
    let cutoff = tol.rank * max;
    Ok(e.reassemble(|l| if l > cutoff && l > 0.0 { l.powf(exponent) } else { 0.0 }))
}
