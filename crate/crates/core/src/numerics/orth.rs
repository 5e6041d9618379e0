use super::matrix::Matrix;
use super::scalar::{inner, norm, Scalar};

/// Orthonormal basis for the span of `vectors`' columns.
///
/// Gram–Schmidt with one reorthogonalisation pass, pivoting each step on the
/// column with the largest remaining residual. Columns whose residual drops
/// below `rank_tol` times the largest input norm are treated as dependent.
/// Returns the basis (possibly with fewer columns than the input).
pub fn orthonormal_basis<S: Scalar>(vectors: &Matrix<S>, rank_tol: f64) -> Matrix<S> {
    let rows = vectors.rows();
    let mut residual: Vec<Vec<S>> = vectors.to_columns();
    let scale = residual.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let cutoff = rank_tol * scale;
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut remaining: Vec<usize> = (0..residual.len()).collect();

    while !remaining.is_empty() && basis.len() < rows {
        let (pos, best) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &k)| (pos, norm(&residual[k])))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= cutoff || best == 0.0 {
            break;
        }
        let k = remaining.remove(pos);
        let mut q = std::mem::take(&mut residual[k]);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&q, b);
                for (x, &y) in q.iter_mut().zip(b) {
                    *x -= y * c;
                }
            }
        }
        let len = norm(&q);
        if len <= cutoff || len == 0.0 {
            continue;
        }
        for x in &mut q {
            *x = x.scale(1.0 / len);
        }
        for &r in &remaining {
            let c = inner(&residual[r], &q);
            for (x, &y) in residual[r].iter_mut().zip(&q) {
                *x -= y * c;
            }
        }
        basis.push(q);
    }
    Matrix::from_columns(rows, &basis).expect("basis columns have matching length")
}

/// Extends orthonormal `cols` to `target` orthonormal columns using coordinate vectors.
pub fn complete_orthonormal<S: Scalar>(rows: usize, mut cols: Vec<Vec<S>>, target: usize) -> Matrix<S> {
    let mut e = 0;
    while cols.len() < target && e < rows {
        let mut q = vec![S::zero(); rows];
        q[e] = S::one();
        e += 1;
        for _ in 0..2 {
            for b in &cols {
                let c = inner(&q, b);
                for (x, &y) in q.iter_mut().zip(b) {
                    *x -= y * c;
                }
            }
        }
        let len = norm(&q);
        if len > 1e-8 {
            cols.push(q.into_iter().map(|x| x.scale(1.0 / len)).collect());
        }
    }
    Matrix::from_columns(rows, &cols).expect("columns have matching length")
}
