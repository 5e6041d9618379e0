//! Orthonormal block replacement: whiten chosen blocks of an RIP family and
//! certify the restricted-isometry bracket of the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{check_rip_report, Subspace};
use crate::frame::Frame;
use crate::geometry::principal_angles;
use crate::numerics::{norm_sqr, random_unit_vector, singular_values, spectral_power, Matrix, Scalar, Tolerances};
use crate::partition::Partition;
use crate::report::{fmt_f64, fmt_indices, serde_inf, CsvRows};
use crate::rip::{resolve_epsilon, riesz_bounds, subset_spectrum_range, RipMethod, RipReport};

/// `ψ_i = S_J^{-1/2} φ_i` for `i ∈ block`, with `S_J` the block's frame
/// operator; computed as `Φ_J G_J^{-1/2}`, which is the same map.
pub fn whiten_block<S: Scalar>(f: &Frame<S>, block: &[usize]) -> Result<Matrix<S>> {
    whiten_labelled(f, block, 0)
}

fn whiten_labelled<S: Scalar>(f: &Frame<S>, block: &[usize], label: usize) -> Result<Matrix<S>> {
    let r = riesz_bounds(f, block)?;
    if r.is_dependent() {
        return Err(Error::DependentBlock {
            block: label,
            lambda_min: r.lambda_min,
        });
    }
    let g = f.gram().principal_submatrix(block);
    let root = spectral_power(&g, -0.5, f.tolerances())?;
    Ok(f.vectors().select_columns(block).matmul(&root))
}

/// A frame with some blocks replaced by their whitened versions.
#[derive(Debug, Clone)]
pub struct ReplacedFrame<S> {
    pub original: Frame<S>,
    pub frame: Frame<S>,
    pub partition: Partition,
    pub replaced_blocks: Vec<usize>,
}

pub fn replace_blocks<S: Scalar>(f: &Frame<S>, partition: &Partition, replaced: &[usize]) -> Result<ReplacedFrame<S>> {
    if partition.count() != f.count() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} indices, frame has {} vectors",
            partition.count(),
            f.count()
        )));
    }
    let mut ids = replaced.to_vec();
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("block listed twice".into()));
    }
    let mut vectors = f.vectors().clone();
    for &j in &ids {
        let block = partition.block(j)?;
        let w = whiten_labelled(f, block, j)?;
        for (k, &i) in block.iter().enumerate() {
            vectors.col_mut(i).copy_from_slice(w.col(k));
        }
    }
    Ok(ReplacedFrame {
        original: f.clone(),
        frame: Frame::with_tolerances(vectors, *f.tolerances())?,
        partition: partition.clone(),
        replaced_blocks: ids,
    })
}

/// `(1/(16ε²)) (1 − 4ε/(1−ε)²)² / (1+ε)⁶`, the growth bound on `K₁`.
pub fn k1_bound(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let h = 1.0 - 4.0 * epsilon / ((1.0 - epsilon) * (1.0 - epsilon));
    if h <= 0.0 {
        return Err(Error::FormulaNegative(epsilon));
    }
    Ok(h * h / (16.0 * epsilon * epsilon * (1.0 + epsilon).powi(6)))
}

/// Largest integer strictly below [`k1_bound`].
pub fn k1_limit(epsilon: f64) -> Result<u64> {
    let bound = k1_bound(epsilon)?;
    let floor = bound.floor();
    Ok(if floor == bound { floor as u64 - 1 } else { floor as u64 })
}

/// Bracket `[lower, upper]` on `‖Σ a_i ψ_i‖ / ‖a‖` after replacing `k1` blocks.
pub fn replacement_bracket(epsilon: f64, k1: usize) -> (f64, f64) {
    let e = epsilon;
    let cross = 4.0 * e * (1.0 + e) * (k1 as f64).sqrt();
    let lower = (1.0 - 4.0 * e / ((1.0 - e) * (1.0 - e))) / ((1.0 + e) * (1.0 + e)) - cross;
    let upper = (1.0 + e).powf(1.5) + cross;
    (lower, upper)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplacementReport {
    pub k1: usize,
    pub replaced_blocks: Vec<usize>,
    pub s: usize,
    pub epsilon_input: f64,
    pub theoretical_lower: f64,
    pub theoretical_upper: f64,
    /// Square roots of the extreme subset Gram eigenvalues of the replaced family.
    pub measured_lower: f64,
    pub measured_upper: f64,
    pub original_lower: f64,
    pub original_upper: f64,
    /// `None` when ε = 0 (no limit) or the closing formula is not positive.
    pub k1_max: Option<u64>,
    pub k1_within_limit: bool,
    /// `theoretical_lower ≤ 0`: the bracket says nothing about the lower side.
    pub bracket_vacuous: bool,
    /// `None` when the bracket is vacuous.
    pub holds: Option<bool>,
    /// `measured_upper ≤ original_upper + 4ε(1+ε)√K₁`.
    pub upper_drift_holds: bool,
    pub method: RipMethod,
    pub subsets_checked: u64,
}

impl CsvRows for ReplacementReport {
    fn headers(&self) -> Vec<&'static str> {
        vec![
            "k1",
            "replaced_blocks",
            "s",
            "epsilon_input",
            "theoretical_lower",
            "theoretical_upper",
            "measured_lower",
            "measured_upper",
            "k1_max",
            "bracket_vacuous",
            "holds",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.k1.to_string(),
            fmt_indices(&self.replaced_blocks),
            self.s.to_string(),
            fmt_f64(self.epsilon_input),
            fmt_f64(self.theoretical_lower),
            fmt_f64(self.theoretical_upper),
            fmt_f64(self.measured_lower),
            fmt_f64(self.measured_upper),
            self.k1_max.map_or_else(|| "none".into(), |k| k.to_string()),
            self.bracket_vacuous.to_string(),
            self.holds.map_or_else(|| "n/a".into(), |h| h.to_string()),
        ]]
    }
}

/// Sweeps size-`s` subsets of the replaced family and compares the norm
/// extremes to the bracket at the ORIGINAL frame's `ε = rip_before.epsilon_hat`.
pub fn certify_replacement<S: Scalar>(
    rf: &ReplacedFrame<S>,
    s: usize,
    rip_before: &RipReport,
    method: RipMethod,
    budget: u64,
) -> Result<ReplacementReport> {
    if rip_before.s != s {
        return Err(Error::InvalidArgument(format!(
            "RIP report is for s = {}, certification asked for s = {s}",
            rip_before.s
        )));
    }
    check_rip_report(&rf.original, rip_before)?;
    let eps = rip_before.epsilon_hat;
    if !(eps < 1.0) {
        return Err(Error::EpsilonTooLarge(eps));
    }
    rf.partition.check_cap(s)?;
    let after = subset_spectrum_range(&rf.frame, s, method, budget)?;
    let before = subset_spectrum_range(&rf.original, s, method, budget)?;
    let k1 = rf.replaced_blocks.len();
    let (lower, upper) = replacement_bracket(eps, k1);
    let measured_lower = after.lambda_min.max(0.0).sqrt();
    let measured_upper = after.lambda_max.sqrt();
    let original_upper = before.lambda_max.sqrt();
    let k1_max = k1_limit(eps).ok();
    let slack = 10.0 * rf.frame.tolerances().eigen;
    let vacuous = lower <= 0.0;
    let cross = 4.0 * eps * (1.0 + eps) * (k1 as f64).sqrt();
    Ok(ReplacementReport {
        k1,
        replaced_blocks: rf.replaced_blocks.clone(),
        s,
        epsilon_input: eps,
        theoretical_lower: lower,
        theoretical_upper: upper,
        measured_lower,
        measured_upper,
        original_lower: before.lambda_min.max(0.0).sqrt(),
        original_upper,
        k1_max,
        k1_within_limit: eps == 0.0 || k1_max.is_some_and(|m| k1 as u64 <= m),
        bracket_vacuous: vacuous,
        holds: (!vacuous).then_some(lower <= measured_lower + slack && measured_upper <= upper + slack),
        upper_drift_holds: measured_upper <= original_upper + cross + slack,
        method,
        subsets_checked: after.subsets_checked,
    })
}

/// Projection residual of `W₂ = T(W₁)` off `W₁` against `4ε/(1−ε)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResidualCheck {
    pub epsilon: f64,
    /// Smallest ε with `‖φ − Tφ‖² ≤ ε‖φ‖²` on `W₁`.
    pub hypothesis_constant: f64,
    /// `max ‖ψ − P₁ψ‖²/‖ψ‖²` over `W₂`, from the top singular value of `(I − P₁)B₂`.
    pub worst_residual_ratio: f64,
    pub sampled_residual_ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `t` is an `N × N` matrix whose restriction to `w1` maps onto `w2`.
pub fn check_projection_residual<S: Scalar>(
    w1: &Subspace<S>,
    w2: &Subspace<S>,
    t: &Matrix<S>,
    epsilon: f64,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ProjectionResidualCheck> {
    let n = w1.ambient_dim();
    if w2.ambient_dim() != n || t.shape() != (n, n) {
        return Err(Error::AmbientMismatch(n, w2.ambient_dim()));
    }
    if !(epsilon < 1.0) {
        return Err(Error::EpsilonTooLarge(epsilon));
    }
    let b1 = w1.basis();
    let tb1 = t.matmul(b1);
    let moved = b1.sub(&tb1);
    let hypothesis = singular_values(&moved, tol)?.first().map_or(0.0, |s| s * s);
    let slack = 10.0 * tol.eigen;
    if hypothesis > epsilon + slack {
        return Err(Error::HypothesisViolated(format!(
            "sup ‖φ − Tφ‖²/‖φ‖² = {hypothesis} exceeds {epsilon}"
        )));
    }
    let image = Subspace::span(&tb1, tol)?;
    let onto = image.dim() == w2.dim()
        && principal_angles(&image, w2, tol)?.cosines.iter().all(|&c| c >= 1.0 - 1e-8);
    if !onto {
        return Err(Error::HypothesisViolated("T(W₁) differs from W₂".into()));
    }
    let b2 = w2.basis();
    let off = b2.sub(&b1.matmul(&b1.adjoint_matmul(b2)));
    let worst = singular_values(&off, tol)?.first().map_or(0.0, |s| s * s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = 0.0f64;
    for _ in 0..trials {
        let u: Vec<S> = random_unit_vector(&mut rng, w2.dim());
        sampled = sampled.max(norm_sqr(&off.mul_vec(&u)));
    }
    let bound = 4.0 * epsilon / ((1.0 - epsilon) * (1.0 - epsilon));
    Ok(ProjectionResidualCheck {
        epsilon,
        hypothesis_constant: hypothesis,
        worst_residual_ratio: worst,
        sampled_residual_ratio: sampled,
        bound,
        holds: worst <= bound + slack && sampled <= worst + slack,
    })
}

/// Projection residual inside a block: `W₁ = span{φ_i : i ∈ sub_block}`,
/// `T = S_I^{-1/2}` for the enclosing block `I`, `W₂ = T(W₁)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockResidualCheck {
    /// Riesz constant of the block.
    #[serde(with = "serde_inf")]
    pub epsilon: f64,
    /// `ε/(1+ε)`, the hypothesis constant passed to the inner check.
    pub inner_epsilon: f64,
    pub inner: ProjectionResidualCheck,
    /// `4ε'/(1−ε')²` with ε' the measured hypothesis constant.
    pub bound_measured: f64,
    /// `4ε(1+ε)`.
    pub bound_instantiated: f64,
    pub holds_measured: bool,
    pub holds_instantiated: bool,
    pub holds: bool,
}

pub fn check_block_residual<S: Scalar>(
    f: &Frame<S>,
    block: &[usize],
    sub_block: &[usize],
    epsilon: Option<f64>,
    trials: usize,
    seed: u64,
) -> Result<BlockResidualCheck> {
    if sub_block.is_empty() || sub_block.iter().any(|i| !block.contains(i)) {
        return Err(Error::InvalidPartition("sub-block must be a non-empty subset of the block".into()));
    }
    let tol = f.tolerances();
    let r = riesz_bounds(f, block)?;
    if r.is_dependent() {
        return Err(Error::DependentBlock {
            block: 0,
            lambda_min: r.lambda_min,
        });
    }
    let eps = resolve_epsilon(r.epsilon, epsilon, tol)?;
    let phi = f.vectors().select_columns(block);
    let t = spectral_power(&phi.outer_gram(), -0.5, tol)?;
    let w1 = Subspace::span(&f.vectors().select_columns(sub_block), tol)?;
    let w2 = Subspace::span(&t.matmul(w1.basis()), tol)?;
    let inner_epsilon = eps / (1.0 + eps);
    let inner = check_projection_residual(&w1, &w2, &t, inner_epsilon, trials, seed, tol)?;
    let h = inner.hypothesis_constant;
    let bound_measured = 4.0 * h / ((1.0 - h) * (1.0 - h));
    let bound_instantiated = 4.0 * eps * (1.0 + eps);
    let slack = 10.0 * tol.eigen;
    let holds_measured = inner.worst_residual_ratio <= bound_measured + slack;
    let holds_instantiated = inner.worst_residual_ratio <= bound_instantiated + slack;
    Ok(BlockResidualCheck {
        epsilon: eps,
        inner_epsilon,
        holds: inner.holds && holds_measured && holds_instantiated,
        inner,
        bound_measured,
        bound_instantiated,
        holds_measured,
        holds_instantiated,
    })
}
