use super::eigen::sym_eigen;
use super::matrix::Matrix;
use super::orth::complete_orthonormal;
use super::scalar::{norm, Scalar};
use super::tolerance::Tolerances;
use crate::error::Result;

/// Thin SVD `a = left · diag(singular) · rightᴴ` with `k = min(rows, cols)` columns.
#[derive(Debug, Clone)]
pub struct Svd<S> {
    pub left: Matrix<S>,
    pub singular: Vec<f64>,
    pub right: Matrix<S>,
}

impl<S: Scalar> Svd<S> {
    pub fn reassemble(&self) -> Matrix<S> {
        let mut us = self.left.clone();
        for (k, &s) in self.singular.iter().enumerate() {
            for x in us.col_mut(k) {
                *x = x.scale(s);
            }
        }
        us.matmul(&self.right.adjoint())
    }
}

/// Singular values only, descending, computed from the smaller Gram matrix.
pub fn singular_values<S: Scalar>(a: &Matrix<S>, tol: &Tolerances) -> Result<Vec<f64>> {
    let g = if a.rows() >= a.cols() { a.gram() } else { a.outer_gram() };
    let e = sym_eigen(&g, tol)?;
    Ok(e.values.iter().map(|&l| l.max(0.0).sqrt()).collect())
}

/// SVD through the eigendecomposition of `aᴴa` (or `aaᴴ` when wide).
pub fn svd<S: Scalar>(a: &Matrix<S>, tol: &Tolerances) -> Result<Svd<S>> {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint(), tol)?;
        return Ok(Svd {
            left: t.right,
            singular: t.singular,
            right: t.left,
        });
    }
    let (m, n) = a.shape();
    let e = sym_eigen(&a.gram(), tol)?;
    let singular: Vec<f64> = e.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let right = e.vectors;
    let cutoff = tol.rank.sqrt() * singular.first().copied().unwrap_or(0.0);

    let mut left_cols: Vec<Vec<S>> = Vec::with_capacity(n);
    for (k, &sv) in singular.iter().enumerate().take(n) {
        if sv <= cutoff || sv == 0.0 {
            break;
        }
        let mut u = a.mul_vec(right.col(k));
        let len = norm(&u);
        for x in &mut u {
            *x = x.scale(1.0 / len);
        }
        left_cols.push(u);
    }
    let left = complete_orthonormal(m, left_cols, n);
    Ok(Svd {
        left,
        singular,
        right,
    })
}
