//! Finite frames: analysis/synthesis, frame operator, bounds, canonical Parseval
//! transform and constructors for unit-norm tight frames.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{norm, spectral_power, sym_eigen, Matrix, Scalar, SymmetricEigen, Tolerances};

/// Optimal frame bounds: extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// `upper / lower`, infinite when the frame does not span.
    #[serde(with = "crate::report::serde_inf")]
    pub tight_ratio: f64,
}

impl FrameBounds {
    pub(crate) fn from_extremes(lower: f64, upper: f64) -> Self {
        let lower = lower.max(0.0);
        let upper = upper.max(lower);
        let tight_ratio = if lower > 0.0 { upper / lower } else { f64::INFINITY };
        Self {
            lower,
            upper,
            tight_ratio,
        }
    }
}

/// `M` vectors in dimension `N`, stored as the columns of an `N × M` matrix.
///
/// Immutable: every transform returns a new frame with its caches recomputed.
#[derive(Debug, Clone)]
pub struct Frame<S> {
    vectors: Matrix<S>,
    gram: Matrix<S>,
    operator: Matrix<S>,
    eigen: SymmetricEigen<S>,
    bounds: FrameBounds,
    tol: Tolerances,
}

impl<S: Scalar> Frame<S> {
    pub fn new(vectors: Matrix<S>) -> Result<Self> {
        Self::with_tolerances(vectors, Tolerances::default())
    }

    pub fn with_tolerances(vectors: Matrix<S>, tol: Tolerances) -> Result<Self> {
        if vectors.cols() == 0 || vectors.rows() == 0 {
            return Err(Error::EmptyFrame);
        }
        // Matrix construction already rejects non-finite data; re-check for
        // matrices built through the unchecked paths.
        for (j, c) in vectors.columns().enumerate() {
            if let Some(i) = c.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
        let gram = vectors.gram();
        let operator = vectors.outer_gram();
        let eigen = sym_eigen(&operator, &tol)?;
        let lower = if eigen.min() <= tol.rank * eigen.max() { 0.0 } else { eigen.min() };
        let bounds = FrameBounds::from_extremes(lower, eigen.max());
        Ok(Self {
            vectors,
            gram,
            operator,
            eigen,
            bounds,
            tol,
        })
    }

    pub fn from_columns(dim: usize, columns: &[Vec<S>]) -> Result<Self> {
        Self::new(Matrix::from_columns(dim, columns)?)
    }

    /// The standard basis of `S^dim`.
    pub fn orthonormal(dim: usize) -> Result<Self> {
        Self::new(Matrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn count(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vectors(&self) -> &Matrix<S> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[S] {
        self.vectors.col(i)
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn frame_operator(&self) -> &Matrix<S> {
        &self.operator
    }

    /// Eigendecomposition of the frame operator.
    pub fn spectrum(&self) -> &SymmetricEigen<S> {
        &self.eigen
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn bounds(&self) -> FrameBounds {
        self.bounds
    }

    pub fn is_spanning(&self) -> bool {
        self.bounds.lower > 0.0
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.columns().map(norm).collect()
    }

    /// Same vectors, different tolerances.
    pub fn retuned(&self, tol: Tolerances) -> Result<Self> {
        Self::with_tolerances(self.vectors.clone(), tol)
    }

    /// The frame formed by the listed vectors, in the given order.
    pub fn subframe(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            if i >= self.count() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    count: self.count(),
                });
            }
        }
        Self::with_tolerances(self.vectors.select_columns(indices), self.tol)
    }

    fn check_len(&self, expected: usize, got: usize) -> Result<()> {
        if expected != got {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }

    /// Analysis operator: `(⟨x, φ_i⟩)_i`.
    pub fn analyze(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_len(self.dim(), x.len())?;
        Ok(self.vectors.adjoint_mul_vec(x))
    }

    /// Synthesis operator: `Σ a_i φ_i`.
    pub fn synthesize(&self, coeffs: &[S]) -> Result<Vec<S>> {
        self.check_len(self.count(), coeffs.len())?;
        Ok(self.vectors.mul_vec(coeffs))
    }

    /// `S x = Σ ⟨x, φ_i⟩ φ_i`.
    pub fn apply_frame_operator(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_len(self.dim(), x.len())?;
        Ok(self.operator.mul_vec(x))
    }

    fn require_spanning(&self) -> Result<()> {
        if !self.is_spanning() {
            return Err(Error::NotSpanning {
                lower: self.eigen.min(),
            });
        }
        Ok(())
    }

    /// `{S^{-1/2} φ_i}`, a Parseval frame.
    pub fn canonical_parseval(&self) -> Result<Self> {
        self.require_spanning()?;
        let root = spectral_power(&self.operator, -0.5, &self.tol)?;
        Self::with_tolerances(root.matmul(&self.vectors), self.tol)
    }

    /// `Σ c_i S^{-1} φ_i`; inverts [`Frame::analyze`].
    pub fn reconstruct(&self, coeffs: &[S]) -> Result<Vec<S>> {
        self.require_spanning()?;
        let y = self.synthesize(coeffs)?;
        let inv = self.eigen.reassemble(|l| if l > 0.0 { 1.0 / l } else { 0.0 });
        Ok(inv.mul_vec(&y))
    }

    /// Largest deviation of a column norm from 1.
    pub fn unit_norm_residual(&self) -> f64 {
        self.norms().iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Deterministic unit-norm tight frame with bounds `(M/N, M/N)`.
    ///
    /// Complex build: the first `N` rows of the `M × M` DFT matrix over `√N`.
    /// Real build: a constant row (plus the alternating row when both `N` and
    /// `M` are even) and cosine/sine row pairs at the lowest frequencies.
    pub fn harmonic(dim: usize, count: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyFrame);
        }
        if count < dim {
            return Err(Error::CountTooSmall { dim, count });
        }
        let rows = harmonic_rows::<S>(dim, count);
        let vectors = Matrix::from_fn(dim, count, |i, k| rows[i][k]);
        let frame = Self::new(vectors)?;
        let target = count as f64 / dim as f64;
        let slack = 10.0 * frame.tol.eigen * target;
        let b = frame.bounds();
        if frame.unit_norm_residual() > slack || (b.lower - target).abs() > slack || (b.upper - target).abs() > slack {
            return Err(Error::NotTight { ratio: b.tight_ratio });
        }
        Ok(frame)
    }

    /// Seeded unit-norm tight frame via alternating projection.
    ///
    /// Starts from a Gaussian matrix, then alternates column normalisation
    /// with the tightening step `V ← √(M/N) · S^{-1/2} V` until both the norm
    /// residual and `tight_ratio − 1` are below `tol`.
    pub fn random_unit_tight(
        dim: usize,
        count: usize,
        seed: u64,
        iters: Option<usize>,
        tol: f64,
    ) -> std::result::Result<Self, ConvergenceFailure<S>> {
        let fail = |e: Error| ConvergenceFailure::Invalid(e);
        if dim == 0 {
            return Err(fail(Error::EmptyFrame));
        }
        if count < dim {
            return Err(fail(Error::CountTooSmall { dim, count }));
        }
        let iters = iters.unwrap_or(10 * dim * count);
        let tols = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = Matrix::from_fn(dim, count, |_, _| S::sample_gaussian(&mut rng));
        let scale = (count as f64 / dim as f64).sqrt();
        let mut best: Option<(f64, Frame<S>)> = None;

        for it in 0..=iters {
            normalize_columns(&mut v);
            let frame = Self::with_tolerances(v.clone(), tols).map_err(fail)?;
            let tight_residual = frame.bounds().tight_ratio - 1.0;
            let norm_residual = frame.unit_norm_residual();
            if tight_residual < tol && norm_residual < tol {
                return Ok(frame);
            }
            let score = tight_residual.max(norm_residual);
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, frame.clone()));
            }
            if it == iters {
                break;
            }
            let root = spectral_power(frame.frame_operator(), -0.5, &tols).map_err(fail)?;
            v = root.matmul(&v).scale(scale);
        }
        let (_, best) = best.expect("at least one iterate");
        Err(ConvergenceFailure::NotConverged {
            iterations: iters,
            norm_residual: best.unit_norm_residual(),
            tight_residual: best.bounds().tight_ratio - 1.0,
            best: Box::new(best),
        })
    }
}

/// Failure of [`Frame::random_unit_tight`]; carries the best iterate when the
/// iteration ran out of steps.
#[derive(Debug)]
pub enum ConvergenceFailure<S> {
    Invalid(Error),
    NotConverged {
        iterations: usize,
        norm_residual: f64,
        tight_residual: f64,
        best: Box<Frame<S>>,
    },
}

impl<S: Scalar> std::fmt::Display for ConvergenceFailure<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConvergenceFailure::Invalid(e) => e.fmt(f),
            ConvergenceFailure::NotConverged {
                iterations,
                norm_residual,
                tight_residual,
                ..
            } => Error::DidNotConverge {
                iterations: *iterations,
                norm_residual: *norm_residual,
                tight_residual: *tight_residual,
            }
            .fmt(f),
        }
    }
}

impl<S: Scalar> std::error::Error for ConvergenceFailure<S> {}

impl<S: Scalar> From<ConvergenceFailure<S>> for Error {
    fn from(value: ConvergenceFailure<S>) -> Self {
        match value {
            ConvergenceFailure::Invalid(e) => e,
            ConvergenceFailure::NotConverged {
                iterations,
                norm_residual,
                tight_residual,
                ..
            } => Error::DidNotConverge {
                iterations,
                norm_residual,
                tight_residual,
            },
        }
    }
}

fn normalize_columns<S: Scalar>(v: &mut Matrix<S>) {
    for j in 0..v.cols() {
        let n = norm(v.col(j));
        if n > 0.0 {
            for x in v.col_mut(j) {
                *x = x.scale(1.0 / n);
            }
        }
    }
}

fn harmonic_rows<S: Scalar>(dim: usize, count: usize) -> Vec<Vec<S>> {
    let m = count as f64;
    let angle = |j: usize, k: usize| 2.0 * PI * ((j * k) % count) as f64 / m;
    match S::FIELD {
        crate::numerics::Field::Complex => {
            let c = 1.0 / (dim as f64).sqrt();
            (0..dim)
                .map(|j| {
                    (0..count)
                        .map(|k| {
                            let t = angle(j, k);
                            S::from_parts(c * t.cos(), c * t.sin()).expect("complex field")
                        })
                        .collect()
                })
                .collect()
        }
        crate::numerics::Field::Real => {
            let flat = 1.0 / (dim as f64).sqrt();
            let pair = (2.0 / dim as f64).sqrt();
            let mut rows: Vec<Vec<S>> = Vec::with_capacity(dim);
            let freqs = if dim % 2 == 1 {
                rows.push(vec![S::from_real(flat); count]);
                1..=(dim - 1) / 2
            } else if count % 2 == 1 {
                1..=dim / 2
            } else {
                rows.push(vec![S::from_real(flat); count]);
                rows.push((0..count).map(|k| S::from_real(if k % 2 == 0 { flat } else { -flat })).collect());
                1..=(dim - 2) / 2
            };
            for j in freqs {
                rows.push((0..count).map(|k| S::from_real(pair * angle(j, k).cos())).collect());
                rows.push((0..count).map(|k| S::from_real(pair * angle(j, k).sin())).collect());
            }
            rows
        }
    }
}
