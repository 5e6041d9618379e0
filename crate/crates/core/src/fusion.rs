//! Fusion frames: weighted subspaces, the fusion operator `Σ v_i² P_i`, its
//! bounds and reconstruction, and the near-tightness certificate for fusion
//! frames built from blocks of a unit-norm tight RIP frame.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, FrameBounds};
use crate::numerics::{
    norm, norm_sqr, orthonormal_basis, random_unit_vector, sym_eigen, Matrix, Scalar, SymmetricEigen, Tolerances,
};
use crate::partition::Partition;
use crate::report::{fmt_f64, fmt_indices, serde_inf, CsvRows};
use crate::rip::{check_partition_inequality, riesz_bounds, PartitionInequality, RipReport};

/// Subspace of `S^N` stored by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace<S> {
    basis: Matrix<S>,
    source_indices: Option<Vec<usize>>,
    /// Set when the spanning vectors were linearly dependent.
    rank_deficient: bool,
}

impl<S: Scalar> Subspace<S> {
    /// Span of the columns of `vectors`.
    pub fn span(vectors: &Matrix<S>, tol: &Tolerances) -> Result<Self> {
        let basis = orthonormal_basis(vectors, tol.rank.sqrt());
        if basis.cols() == 0 {
            return Err(Error::TrivialSubspace);
        }
        Ok(Self {
            rank_deficient: basis.cols() < vectors.cols(),
            basis,
            source_indices: None,
        })
    }

    /// Wraps a basis that is already orthonormal (checked against `tol.eigen`).
    pub fn from_orthonormal(basis: Matrix<S>, tol: &Tolerances) -> Result<Self> {
        if basis.cols() == 0 {
            return Err(Error::TrivialSubspace);
        }
        let residual = basis.orthonormality_defect();
        if residual > tol.eigen * (basis.cols() as f64).sqrt().max(1.0) * 10.0 {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self {
            basis,
            source_indices: None,
            rank_deficient: false,
        })
    }

    pub fn with_source(mut self, indices: Vec<usize>) -> Self {
        self.source_indices = Some(indices);
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn source_indices(&self) -> Option<&[usize]> {
        self.source_indices.as_deref()
    }

    pub fn is_rank_deficient(&self) -> bool {
        self.rank_deficient
    }

    /// Orthogonal projection `B (Bᴴ x)`.
    pub fn project(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(self.basis.mul_vec(&self.basis.adjoint_mul_vec(x)))
    }

    /// `B Bᴴ` as a dense matrix.
    pub fn projector(&self) -> Matrix<S> {
        self.basis.matmul(&self.basis.adjoint())
    }

    /// `‖x − P x‖`.
    pub fn distance(&self, x: &[S]) -> Result<f64> {
        let p = self.project(x)?;
        Ok(norm(&x.iter().zip(&p).map(|(&a, &b)| a - b).collect::<Vec<_>>()))
    }
}

/// Extreme eigenvalues of the fusion operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Weighted family `{(W_i, v_i)}` with cached fusion operator `S_W = Σ v_i² P_i`.
#[derive(Debug, Clone)]
pub struct FusionFrame<S> {
    subspaces: Vec<Subspace<S>>,
    weights: Vec<f64>,
    operator: Matrix<S>,
    eigen: SymmetricEigen<S>,
    bounds: FusionBounds,
    tol: Tolerances,
}

impl<S: Scalar> FusionFrame<S> {
    pub fn new(subspaces: Vec<Subspace<S>>, weights: Vec<f64>, tol: Tolerances) -> Result<Self> {
        let n = subspaces.first().map(Subspace::ambient_dim).ok_or(Error::TooFewSubspaces(0))?;
        if weights.len() != subspaces.len() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidWeights);
        }
        if let Some(bad) = subspaces.iter().find(|s| s.ambient_dim() != n) {
            return Err(Error::AmbientMismatch(n, bad.ambient_dim()));
        }
        let mut operator = Matrix::zeros(n, n);
        for (sub, &w) in subspaces.iter().zip(&weights) {
            operator = operator.add(&sub.projector().scale(w * w));
        }
        let eigen = sym_eigen(&operator, &tol)?;
        let lower = if eigen.min() <= tol.rank * eigen.max() { 0.0 } else { eigen.min() };
        let bounds = FusionBounds {
            lower: lower.max(0.0),
            upper: eigen.max(),
        };
        Ok(Self {
            subspaces,
            weights,
            operator,
            eigen,
            bounds,
            tol,
        })
    }

    /// `W_j = span{φ_i : i ∈ I_j}`; unit weights unless given.
    pub fn from_partition(f: &Frame<S>, partition: &Partition, weights: Option<Vec<f64>>) -> Result<Self> {
        if partition.count() != f.count() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} indices, frame has {} vectors",
                partition.count(),
                f.count()
            )));
        }
        let subspaces = partition
            .blocks()
            .iter()
            .map(|b| Ok(Subspace::span(&f.vectors().select_columns(b), f.tolerances())?.with_source(b.clone())))
            .collect::<Result<Vec<_>>>()?;
        let weights = weights.unwrap_or_else(|| vec![1.0; partition.len()]);
        Self::new(subspaces, weights, *f.tolerances())
    }

    pub fn ambient_dim(&self) -> usize {
        self.operator.rows()
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace<S>] {
        &self.subspaces
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn operator(&self) -> &Matrix<S> {
        &self.operator
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn bounds(&self) -> FusionBounds {
        self.bounds
    }

    pub fn is_equi_dimensional(&self) -> bool {
        self.subspaces.windows(2).all(|w| w[0].dim() == w[1].dim())
    }

    /// `Σ v_i² ‖P_i x‖²`.
    pub fn energy(&self, x: &[S]) -> Result<f64> {
        let mut acc = 0.0;
        for (sub, &w) in self.subspaces.iter().zip(&self.weights) {
            acc += w * w * norm_sqr(&sub.project(x)?);
        }
        Ok(acc)
    }

    /// Fusion measurements `{v_i P_i x}`.
    pub fn measure(&self, x: &[S]) -> Result<Vec<Vec<S>>> {
        self.subspaces
            .iter()
            .zip(&self.weights)
            .map(|(sub, &w)| Ok(sub.project(x)?.into_iter().map(|v| v.scale(w)).collect()))
            .collect()
    }

    /// `x = Σ v_i S_W^{-1}(v_i P_i x)`.
    pub fn reconstruct(&self, measurements: &[Vec<S>]) -> Result<Vec<S>> {
        if self.bounds.lower <= 0.0 {
            return Err(Error::NotAFusionFrame {
                lower: self.eigen.min(),
            });
        }
        if measurements.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: measurements.len(),
            });
        }
        let n = self.ambient_dim();
        let mut acc = vec![S::zero(); n];
        for (i, ((m, sub), &w)) in measurements.iter().zip(&self.subspaces).zip(&self.weights).enumerate() {
            let residual = sub.distance(m)?;
            let scale = norm(m).max(1.0);
            if residual > 10.0 * self.tol.eigen * scale * (n as f64).sqrt() {
                return Err(Error::MeasurementOutsideSubspace { index: i, residual });
            }
            for (a, &v) in acc.iter_mut().zip(m) {
                *a += v.scale(w);
            }
        }
        let inv = self.eigen.reassemble(|l| if l > 0.0 { 1.0 / l } else { 0.0 });
        Ok(inv.mul_vec(&acc))
    }
}

/// Near-tightness certificate for the block fusion frame of a unit-norm tight
/// frame: measured bounds against `[M/((1+ε)N), M(1+ε)/N]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearTightnessReport {
    pub epsilon_input: f64,
    pub witness: Vec<usize>,
    pub theoretical: FusionBounds,
    pub measured: FusionBounds,
    pub holds: bool,
    /// Smallest `ε'` with measured bounds `(C/(1+ε'), C(1+ε'))`.
    pub nearly_tight_epsilon: f64,
    pub nearly_tight_constant: f64,
    /// `nearly_tight_epsilon ≤ epsilon_input`.
    pub epsilon_nearly_tight: bool,
    pub outside_hypothesis: bool,
    pub blocks: Vec<Vec<usize>>,
    pub block_dims: Vec<usize>,
    /// Blocks whose vectors turned out linearly dependent.
    pub rank_deficient_blocks: Vec<usize>,
}

impl CsvRows for NearTightnessReport {
    fn headers(&self) -> Vec<&'static str> {
        vec![
            "block",
            "indices",
            "dim",
            "rank_deficient",
            "epsilon_input",
            "theoretical_lower",
            "theoretical_upper",
            "measured_lower",
            "measured_upper",
            "holds",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(j, b)| {
                vec![
                    j.to_string(),
                    fmt_indices(b),
                    self.block_dims[j].to_string(),
                    self.rank_deficient_blocks.contains(&j).to_string(),
                    fmt_f64(self.epsilon_input),
                    fmt_f64(self.theoretical.lower),
                    fmt_f64(self.theoretical.upper),
                    fmt_f64(self.measured.lower),
                    fmt_f64(self.measured.upper),
                    self.holds.to_string(),
                ]
            })
            .collect()
    }
}

/// Preconditions shared by the fusion certificates: unit-norm, tight,
/// blocks within the RIP cap and a RIP report that reproduces on this frame.
pub(crate) fn check_rip_pipeline<S: Scalar>(
    f: &Frame<S>,
    partition: &Partition,
    rip: &RipReport,
    cap: usize,
    tight_tol: f64,
) -> Result<()> {
    if let Some((index, n)) = f
        .norms()
        .into_iter()
        .enumerate()
        .find(|(_, n)| (n - 1.0).abs() > tight_tol)
    {
        return Err(Error::NotUnitNorm { index, norm: n });
    }
    let ratio = f.bounds().tight_ratio;
    if !(ratio <= 1.0 + tight_tol) {
        return Err(Error::NotTight { ratio });
    }
    if partition.count() != f.count() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} indices, frame has {} vectors",
            partition.count(),
            f.count()
        )));
    }
    partition.check_cap(cap)?;
    check_rip_report(f, rip)
}

pub(crate) fn check_rip_report<S: Scalar>(f: &Frame<S>, rip: &RipReport) -> Result<()> {
    let recomputed = riesz_bounds(f, &rip.witness)?.epsilon;
    let same = if rip.epsilon_hat.is_infinite() || recomputed.is_infinite() {
        rip.epsilon_hat == recomputed
    } else {
        (recomputed - rip.epsilon_hat).abs() <= f.tolerances().eigen * (1.0 + rip.epsilon_hat)
    };
    if !same {
        return Err(Error::RipReportMismatch {
            reported: rip.epsilon_hat,
            recomputed,
        });
    }
    Ok(())
}

/// Default tightness/unit-norm tolerance for certificate preconditions.
pub const TIGHT_TOL: f64 = 1e-8;

/// Certifies that the block fusion frame `{W_j, 1}` of a unit-norm tight frame
/// with RIP constant `ε` (for sets of size `rip.s ≥ max |I_j|`) has bounds in
/// `[M/((1+ε)N), M(1+ε)/N]`.
pub fn certify_near_tight<S: Scalar>(f: &Frame<S>, partition: &Partition, rip: &RipReport) -> Result<NearTightnessReport> {
    check_rip_pipeline(f, partition, rip, rip.s, TIGHT_TOL)?;
    let ff = FusionFrame::from_partition(f, partition, None)?;
    Ok(near_tightness(f, &ff, partition, rip))
}

pub(crate) fn near_tightness<S: Scalar>(
    f: &Frame<S>,
    ff: &FusionFrame<S>,
    partition: &Partition,
    rip: &RipReport,
) -> NearTightnessReport {
    let eps = rip.epsilon_hat;
    let ratio = f.count() as f64 / f.dim() as f64;
    let theoretical = FusionBounds {
        lower: ratio / (1.0 + eps),
        upper: ratio * (1.0 + eps),
    };
    let measured = ff.bounds();
    let slack = 10.0 * f.tolerances().eigen * ratio;
    let holds = theoretical.lower <= measured.lower + slack && measured.upper <= theoretical.upper + slack;
    let (nt_eps, nt_c) = if measured.lower > 0.0 {
        ((measured.upper / measured.lower).sqrt() - 1.0, (measured.upper * measured.lower).sqrt())
    } else {
        (f64::INFINITY, 0.0)
    };
    NearTightnessReport {
        epsilon_input: eps,
        witness: rip.witness.clone(),
        theoretical,
        measured,
        holds,
        nearly_tight_epsilon: nt_eps,
        nearly_tight_constant: nt_c,
        epsilon_nearly_tight: nt_eps <= eps + slack,
        outside_hypothesis: !(eps < 1.0),
        blocks: partition.blocks().to_vec(),
        block_dims: ff.subspaces().iter().map(Subspace::dim).collect(),
        rank_deficient_blocks: ff
            .subspaces()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_rank_deficient())
            .map(|(j, _)| j)
            .collect(),
    }
}

/// Sub-block form of the near-tightness certificate: for `J_j ⊂ I_j` with
/// `Σ|J_j| ≤ s`, the block-partition inequality on the union of the `J_j`
/// holds at the frame's RIP constant.
pub fn certify_subblock_inequality<S: Scalar>(
    f: &Frame<S>,
    partition: &Partition,
    sub_blocks: &[Vec<usize>],
    coeffs: &[S],
    rip: &RipReport,
) -> Result<PartitionInequality> {
    let total: usize = sub_blocks.iter().map(Vec::len).sum();
    if total > rip.s {
        return Err(Error::BlockTooLarge { size: total, cap: rip.s });
    }
    for sub in sub_blocks {
        let owner = partition.blocks().iter().find(|b| sub.iter().all(|i| b.contains(i)));
        if owner.is_none() {
            return Err(Error::InvalidPartition("sub-block is not contained in a single block".into()));
        }
    }
    check_rip_report(f, rip)?;
    let eps = if rip.epsilon_hat.is_finite() { Some(rip.epsilon_hat) } else { None };
    check_partition_inequality(f, sub_blocks, coeffs, eps)
}

/// Observed and exact extremes of `‖P φ‖² / Σ_{i∈I} |⟨φ, φ_i⟩|²` for one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionEnergyCheck {
    #[serde(with = "serde_inf")]
    pub epsilon: f64,
    pub observed_min: f64,
    pub observed_max: f64,
    /// `1/λ_max` and `1/λ_min` of the block frame operator on its span.
    pub exact_min: f64,
    pub exact_max: f64,
    pub lower: f64,
    #[serde(with = "serde_inf")]
    pub upper: f64,
    pub trials: usize,
    /// Trials whose φ was orthogonal to the block span (both sides zero).
    pub degenerate_trials: usize,
    pub holds: bool,
}

/// Projection energy onto a block span against the block's analysis energy,
/// over `trials` seeded random unit vectors.
pub fn check_projection_energy<S: Scalar>(f: &Frame<S>, block: &[usize], epsilon: f64, trials: usize, seed: u64) -> Result<ProjectionEnergyCheck> {
    let r = riesz_bounds(f, block)?;
    if r.is_dependent() {
        return Err(Error::NotRieszBasis {
            measured: r.epsilon,
            supplied: epsilon,
        });
    }
    let eps = crate::rip::resolve_epsilon(r.epsilon, Some(epsilon), f.tolerances())?;
    let vectors = f.vectors().select_columns(block);
    let sub = Subspace::span(&vectors, f.tolerances())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut degenerate = 0;
    let tiny = f.tolerances().rank;
    for _ in 0..trials {
        let x: Vec<S> = random_unit_vector(&mut rng, f.dim());
        let proj = norm_sqr(&sub.project(&x)?);
        let analysis = norm_sqr(&vectors.adjoint_mul_vec(&x));
        if analysis <= tiny {
            degenerate += 1;
            continue;
        }
        let q = proj / analysis;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    let lower = 1.0 / (1.0 + eps);
    let upper = 1.0 + eps;
    let exact_min = 1.0 / r.lambda_max;
    let exact_max = 1.0 / r.lambda_min;
    let slack = 10.0 * f.tolerances().eigen * upper;
    let observed_ok = lo > hi || (lo >= lower - slack && hi <= upper + slack);
    Ok(ProjectionEnergyCheck {
        epsilon: eps,
        observed_min: if lo > hi { f64::NAN } else { lo },
        observed_max: if lo > hi { f64::NAN } else { hi },
        exact_min,
        exact_max,
        lower,
        upper,
        trials,
        degenerate_trials: degenerate,
        holds: observed_ok && exact_min >= lower - slack && exact_max <= upper + slack,
    })
}

/// Local/global composition check: frames `{φ_ij}` inside each `W_i` against
/// the fusion bounds of `{(W_i, v_i)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalGlobalReport {
    pub local_bounds: Vec<FrameBounds>,
    /// `inf A_i`, `sup B_i`.
    pub local_lower: f64,
    pub local_upper: f64,
    pub fusion: FusionBounds,
    /// Measured bounds of `{v_i φ_ij}`.
    pub composed: FrameBounds,
    /// `[A·C, B·D]`.
    pub bracket: (f64, f64),
    /// `[C'/B, D'/A]` with `(C', D')` the composed bounds; must contain the fusion bounds.
    pub reverse_bracket: (f64, f64),
    pub holds_forward: bool,
    pub holds_reverse: bool,
    pub holds: bool,
}

/// `locals[i]` holds the local frame vectors (as columns) of subspace `i`.
pub fn check_local_global<S: Scalar>(ff: &FusionFrame<S>, locals: &[Matrix<S>]) -> Result<LocalGlobalReport> {
    if locals.len() != ff.len() {
        return Err(Error::DimensionMismatch {
            expected: ff.len(),
            got: locals.len(),
        });
    }
    let tol = ff.tolerances();
    let n = ff.ambient_dim();
    let mut local_bounds = Vec::with_capacity(locals.len());
    let mut composed = Matrix::zeros(n, 0);
    for (i, ((phi, sub), &w)) in locals.iter().zip(ff.subspaces()).zip(ff.weights()).enumerate() {
        if phi.rows() != n || phi.cols() == 0 {
            return Err(Error::LocalNotSpanning { index: i });
        }
        for c in phi.columns() {
            let residual = sub.distance(c)?;
            if residual > 10.0 * tol.eigen * norm(c).max(1.0) * (n as f64).sqrt() {
                return Err(Error::LocalNotSpanning { index: i });
            }
        }
        // Local frame bounds on W_i via coordinates in the subspace basis.
        let coords = sub.basis().adjoint_matmul(phi);
        let e = sym_eigen(&coords.outer_gram(), tol)?;
        if e.min() <= tol.rank * e.max() {
            return Err(Error::LocalNotSpanning { index: i });
        }
        local_bounds.push(FrameBounds::from_extremes(e.min(), e.max()));
        composed = composed.hstack(&phi.scale(w))?;
    }
    let composed = Frame::with_tolerances(composed, *tol)?.bounds();
    let a = local_bounds.iter().map(|b| b.lower).fold(f64::INFINITY, f64::min);
    let b = local_bounds.iter().map(|b| b.upper).fold(0.0, f64::max);
    let fusion = ff.bounds();
    let bracket = (a * fusion.lower, b * fusion.upper);
    let reverse_bracket = (composed.lower / b, composed.upper / a);
    let slack = 10.0 * tol.eigen * bracket.1.max(reverse_bracket.1).max(1.0);
    let holds_forward = bracket.0 <= composed.lower + slack && composed.upper <= bracket.1 + slack;
    let holds_reverse = reverse_bracket.0 <= fusion.lower + slack && fusion.upper <= reverse_bracket.1 + slack;
    Ok(LocalGlobalReport {
        local_bounds,
        local_lower: a,
        local_upper: b,
        fusion,
        composed,
        bracket,
        reverse_bracket,
        holds_forward,
        holds_reverse,
        holds: holds_forward && holds_reverse,
    })
}

impl CsvRows for LocalGlobalReport {
    fn headers(&self) -> Vec<&'static str> {
        vec!["subspace", "local_lower", "local_upper", "fusion_lower", "fusion_upper", "composed_lower", "composed_upper", "holds"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.local_bounds
            .iter()
            .enumerate()
            .map(|(i, b)| {
                vec![
                    i.to_string(),
                    fmt_f64(b.lower),
                    fmt_f64(b.upper),
                    fmt_f64(self.fusion.lower),
                    fmt_f64(self.fusion.upper),
                    fmt_f64(self.composed.lower),
                    fmt_f64(self.composed.upper),
                    self.holds.to_string(),
                ]
            })
            .collect()
    }
}
