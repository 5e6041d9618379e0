//! Cyclic Jacobi eigensolver for real symmetric and complex Hermitian matrices.

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::tolerance::Tolerances;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending; column `k` of `vectors` pairs with `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<S> {
    pub values: Vec<f64>,
    pub vectors: Matrix<S>,
}

impl<S: Scalar> SymmetricEigen<S> {
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `Q · diag(f(λ)) · Qᴴ`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> Matrix<S> {
        let n = self.vectors.rows();
        let mut out = Matrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let q = self.vectors.col(k);
            for j in 0..n {
                let qj = q[j].conj().scale(w);
                for i in 0..n {
                    out[(i, j)] += q[i] * qj;
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a symmetric (Hermitian) matrix.
///
/// The input is symmetrised before iterating, so the admissible asymmetry
/// `tol.sym` only decides whether the input is accepted.
pub fn sym_eigen<S: Scalar>(a: &Matrix<S>, tol: &Tolerances) -> Result<SymmetricEigen<S>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > tol.sym * scale {
        return Err(Error::NotSymmetric {
            residual: if scale > 0.0 { defect / scale } else { defect },
        });
    }

    let mut w = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            S::from_real(a[(i, i)].re())
        } else {
            (a[(i, j)] + a[(j, i)].conj()).scale(0.5)
        }
    });
    let mut v = Matrix::<S>::identity(n);

    for sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&w);
        if off == 0.0 || off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[(p, q)];
                let b = apq.abs();
                if b == 0.0 {
                    continue;
                }
                let app = w[(p, p)].re();
                let aqq = w[(q, q)].re();
                // Once an entry no longer moves the diagonal, drop it.
                if sweep > 3 && app.abs() + 100.0 * b == app.abs() && aqq.abs() + 100.0 * b == aqq.abs()
                {
                    w[(p, q)] = S::zero();
                    w[(q, p)] = S::zero();
                    continue;
                }
                rotate(&mut w, &mut v, p, q, apq, b, app, aqq);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re()).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.select_columns(&order);
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm<S: Scalar>(w: &Matrix<S>) -> f64 {
    let n = w.rows();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += w[(i, j)].abs_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Applies `w ← Jᴴ w J`, `v ← v J` for the unitary `J` that annihilates `w[p, q]`.
///
/// `J = D · R` where `D = diag(1, conj(apq)/|apq|)` makes the pivot real and `R`
/// is the classical real Jacobi rotation.
#[allow(clippy::too_many_arguments)]
fn rotate<S: Scalar>(
    w: &mut Matrix<S>,
    v: &mut Matrix<S>,
    p: usize,
    q: usize,
    apq: S,
    b: f64,
    app: f64,
    aqq: f64,
) {
    let n = w.rows();
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = apq.conj().scale(1.0 / b);

    let jpp = S::from_real(c);
    let jpq = S::from_real(s);
    let jqp = phase.scale(-s);
    let jqq = phase.scale(c);

    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * jpp + wkq * jqp;
        w[(k, q)] = wkp * jpq + wkq * jqq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = jpp.conj() * wpk + jqp.conj() * wqk;
        w[(q, k)] = jpq.conj() * wpk + jqq.conj() * wqk;
    }
    w[(p, q)] = S::zero();
    w[(q, p)] = S::zero();
    w[(p, p)] = S::from_real(w[(p, p)].re());
    w[(q, q)] = S::from_real(w[(q, q)].re());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
