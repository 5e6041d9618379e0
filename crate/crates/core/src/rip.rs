//! ε-Riesz constants of vector subsets and restricted-isometry certification.
//!
//! The constant is multiplicative: a family is ε-Riesz when its Gram spectrum
//! lies in `[1/(1+ε), 1+ε]`. The additive compressed-sensing constant
//! `δ = max(λ_max − 1, 1 − λ_min)` is reported alongside, never used in brackets.

use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::numerics::{norm_sqr, spectral_power, sym_eigen, Matrix, Scalar, Tolerances};
use crate::report::{fmt_f64, fmt_indices, serde_inf, CsvRows};
use crate::subsets;

/// Default cap on the number of subsets an exhaustive search may visit.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Riesz bounds of one subset of frame vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    pub subset: Vec<usize>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `max(λ_max − 1, 1/λ_min − 1)`; `+∞` for a dependent subset.
    #[serde(with = "serde_inf")]
    pub epsilon: f64,
}

impl RieszBounds {
    pub fn delta(&self) -> f64 {
        (self.lambda_max - 1.0).max(1.0 - self.lambda_min)
    }

    pub fn is_dependent(&self) -> bool {
        self.epsilon.is_infinite()
    }
}

fn epsilon_from_extremes(lambda_min: f64, lambda_max: f64, tol: &Tolerances) -> f64 {
    if lambda_min <= tol.rank * lambda_max.max(f64::MIN_POSITIVE) {
        return f64::INFINITY;
    }
    (lambda_max - 1.0).max(1.0 / lambda_min - 1.0).max(0.0)
}

fn validate_subset(count: usize, subset: &[usize]) -> Result<()> {
    let mut seen = vec![false; count];
    for &i in subset {
        if i >= count {
            return Err(Error::IndexOutOfRange { index: i, count });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex { index: i });
        }
    }
    Ok(())
}

/// Extreme Gram eigenvalues of a validated subset, read from the cached Gram.
fn gram_extremes<S: Scalar>(f: &Frame<S>, subset: &[usize]) -> (f64, f64) {
    match subset.len() {
        0 => (0.0, 0.0),
        1 => {
            let g = f.gram()[(subset[0], subset[0])].re();
            (g, g)
        }
        _ => {
            let g = f.gram().principal_submatrix(subset);
            let e = sym_eigen(&g, f.tolerances()).expect("Gram submatrix is Hermitian");
            (e.min(), e.max())
        }
    }
}

pub fn riesz_bounds<S: Scalar>(f: &Frame<S>, subset: &[usize]) -> Result<RieszBounds> {
    validate_subset(f.count(), subset)?;
    if subset.is_empty() {
        return Err(Error::InvalidSize { size: 0, count: f.count() });
    }
    let (lambda_min, lambda_max) = gram_extremes(f, subset);
    Ok(RieszBounds {
        subset: subset.to_vec(),
        lambda_min,
        lambda_max,
        epsilon: epsilon_from_extremes(lambda_min, lambda_max, f.tolerances()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RipMethod {
    Exhaustive,
    Randomized { samples: u64, seed: u64 },
}

/// Result of a restricted-isometry search over subsets of size `s`.
///
/// With [`RipMethod::Exhaustive`] `epsilon_hat` is the RIP constant; with
/// [`RipMethod::Randomized`] it is a lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipReport {
    pub s: usize,
    #[serde(with = "serde_inf")]
    pub epsilon_hat: f64,
    pub witness: Vec<usize>,
    pub method: RipMethod,
    pub subsets_checked: u64,
    /// Additive constant `max(λ_max − 1, 1 − λ_min)` of the witness; informational.
    pub delta_equivalent: f64,
    pub witness_lambda_min: f64,
    pub witness_lambda_max: f64,
    /// `epsilon_hat ≥ 1`: the certified bounds assume `ε < 1`; results are still reported.
    pub outside_hypothesis: bool,
}

impl RipReport {
    pub fn is_exact(&self) -> bool {
        self.method == RipMethod::Exhaustive
    }
}

impl CsvRows for RipReport {
    fn headers(&self) -> Vec<&'static str> {
        vec![
            "s",
            "epsilon_hat",
            "witness",
            "method",
            "subsets_checked",
            "delta_equivalent",
            "witness_lambda_min",
            "witness_lambda_max",
            "outside_hypothesis",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let method = match self.method {
            RipMethod::Exhaustive => "exhaustive".to_string(),
            RipMethod::Randomized { samples, seed } => format!("randomized(samples={samples},seed={seed})"),
        };
        vec![vec![
            self.s.to_string(),
            fmt_f64(self.epsilon_hat),
            fmt_indices(&self.witness),
            method,
            self.subsets_checked.to_string(),
            fmt_f64(self.delta_equivalent),
            fmt_f64(self.witness_lambda_min),
            fmt_f64(self.witness_lambda_max),
            self.outside_hypothesis.to_string(),
        ]]
    }
}

/// Running maximum of ε with the colex-first witness on ties.
#[derive(Debug, Clone)]
struct Best {
    epsilon: f64,
    lambda_min: f64,
    lambda_max: f64,
    witness: Option<Vec<usize>>,
    checked: u64,
}

impl Best {
    fn empty() -> Self {
        Self {
            epsilon: f64::NEG_INFINITY,
            lambda_min: 0.0,
            lambda_max: 0.0,
            witness: None,
            checked: 0,
        }
    }

    fn beats(&self, other: &Best) -> bool {
        match (&self.witness, &other.witness) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(a), Some(b)) => match self.epsilon.partial_cmp(&other.epsilon) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => subsets::colex_cmp(a, b) == Ordering::Less,
                _ => false,
            },
        }
    }

    fn merge(self, other: Best) -> Best {
        let checked = self.checked + other.checked;
        let mut out = if other.beats(&self) { other } else { self };
        out.checked = checked;
        out
    }

    fn visit<S: Scalar>(self, f: &Frame<S>, subset: &[usize]) -> Best {
        let (lo, hi) = gram_extremes(f, subset);
        let candidate = Best {
            epsilon: epsilon_from_extremes(lo, hi, f.tolerances()),
            lambda_min: lo,
            lambda_max: hi,
            witness: Some(subset.to_vec()),
            checked: 1,
        };
        self.merge(candidate)
    }

    fn into_report(self, s: usize, method: RipMethod) -> RipReport {
        let delta = (self.lambda_max - 1.0).max(1.0 - self.lambda_min);
        RipReport {
            s,
            epsilon_hat: self.epsilon,
            witness: self.witness.unwrap_or_default(),
            method,
            subsets_checked: self.checked,
            delta_equivalent: delta,
            witness_lambda_min: self.lambda_min,
            witness_lambda_max: self.lambda_max,
            outside_hypothesis: !(self.epsilon < 1.0),
        }
    }
}

fn check_size<S: Scalar>(f: &Frame<S>, s: usize) -> Result<()> {
    if s == 0 || s > f.count() {
        return Err(Error::InvalidSize {
            size: s,
            count: f.count(),
        });
    }
    Ok(())
}

fn sweep_all<S: Scalar>(f: &Frame<S>, s: usize) -> Best {
    subsets::par_fold(f.count(), s, Best::empty, |acc, subset, _| acc.visit(f, subset), Best::merge)
}

/// Maximum ε over every subset of size exactly `s`.
///
/// Smaller subsets need not be visited: by eigenvalue interlacing a subset's
/// ε never exceeds that of any superset.
pub fn rip_exhaustive<S: Scalar>(f: &Frame<S>, s: usize, budget: u64) -> Result<RipReport> {
    check_size(f, s)?;
    let total = subsets::binomial(f.count(), s);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            count: f.count(),
            size: s,
            subsets: total,
            budget,
        });
    }
    Ok(sweep_all(f, s).into_report(s, RipMethod::Exhaustive))
}

/// Maximum ε over `samples` seeded random `s`-subsets: a lower bound on the
/// RIP constant. When `samples` covers all `C(M, s)` subsets every subset is
/// visited once and the result equals [`rip_exhaustive`].
pub fn rip_randomized<S: Scalar>(f: &Frame<S>, s: usize, samples: u64, seed: u64) -> Result<RipReport> {
    check_size(f, s)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let method = RipMethod::Randomized { samples, seed };
    let total = subsets::binomial(f.count(), s);
    if total <= samples as u128 {
        return Ok(sweep_all(f, s).into_report(s, method));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn: Vec<Vec<usize>> = (0..samples)
        .map(|_| {
            let mut v = sample(&mut rng, f.count(), s).into_vec();
            v.sort_unstable();
            v
        })
        .collect();
    let best = drawn
        .par_chunks(256)
        .map(|chunk| chunk.iter().fold(Best::empty(), |acc, subset| acc.visit(f, subset)))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Best::empty(), Best::merge);
    Ok(best.into_report(s, method))
}

/// Smallest and largest Gram eigenvalue over a family of `s`-subsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRange {
    pub s: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub argmin: Vec<usize>,
    pub argmax: Vec<usize>,
    pub method: RipMethod,
    pub subsets_checked: u64,
}

#[derive(Debug, Clone)]
struct Range {
    lo: f64,
    hi: f64,
    argmin: Option<Vec<usize>>,
    argmax: Option<Vec<usize>>,
    checked: u64,
}

impl Range {
    fn empty() -> Self {
        Self {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            argmin: None,
            argmax: None,
            checked: 0,
        }
    }

    // Strict comparisons keep the colex-first extremiser as long as `self`
    // precedes `other` in enumeration order.
    fn merge(mut self, other: Range) -> Range {
        if other.lo < self.lo {
            self.lo = other.lo;
            self.argmin = other.argmin;
        }
        if other.hi > self.hi {
            self.hi = other.hi;
            self.argmax = other.argmax;
        }
        self.checked += other.checked;
        self
    }

    fn visit<S: Scalar>(self, f: &Frame<S>, subset: &[usize]) -> Range {
        let (lo, hi) = gram_extremes(f, subset);
        self.merge(Range {
            lo,
            hi,
            argmin: Some(subset.to_vec()),
            argmax: Some(subset.to_vec()),
            checked: 1,
        })
    }
}

/// Extreme Gram eigenvalues over all (or `samples` seeded random) subsets of
/// size exactly `s`, which by interlacing also bound every smaller subset.
pub fn subset_spectrum_range<S: Scalar>(f: &Frame<S>, s: usize, method: RipMethod, budget: u64) -> Result<SpectrumRange> {
    check_size(f, s)?;
    let total = subsets::binomial(f.count(), s);
    let full = || subsets::par_fold(f.count(), s, Range::empty, |acc, subset, _| acc.visit(f, subset), Range::merge);
    let range = match method {
        RipMethod::Exhaustive => {
            if total > budget as u128 {
                return Err(Error::BudgetExceeded {
                    count: f.count(),
                    size: s,
                    subsets: total,
                    budget,
                });
            }
            full()
        }
        RipMethod::Randomized { samples, .. } if total <= samples as u128 => full(),
        RipMethod::Randomized { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).fold(Range::empty(), |acc, _| {
                let mut v = sample(&mut rng, f.count(), s).into_vec();
                v.sort_unstable();
                acc.visit(f, &v)
            })
        }
    };
    Ok(SpectrumRange {
        s,
        lambda_min: range.lo,
        lambda_max: range.hi,
        argmin: range.argmin.unwrap_or_default(),
        argmax: range.argmax.unwrap_or_default(),
        method,
        subsets_checked: range.checked,
    })
}

/// The three quantities of the block-partition inequality
/// `Σ_j‖v_j‖²/(1+ε)² ≤ ‖Σ_j v_j‖² ≤ (1+ε)² Σ_j‖v_j‖²` with `v_j = Σ_{i∈I_j} a_i φ_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionInequality {
    #[serde(with = "serde_inf")]
    pub epsilon: f64,
    pub lhs: f64,
    pub mid: f64,
    #[serde(with = "serde_inf")]
    pub rhs: f64,
    /// `Σ_j ‖v_j‖²`.
    pub block_sum: f64,
    /// `Σ |a_i|²`.
    pub coefficient_energy: f64,
    /// `Σ_j‖v_j‖²/(1+ε) ≤ Σ|a_i|² ≤ (1+ε) Σ_j‖v_j‖²`.
    pub energy_holds: bool,
    pub holds: bool,
}

/// Checks the block-partition inequality for coefficients `coeffs`, aligned
/// with the blocks flattened in order.
///
/// `epsilon` defaults to the measured constant of the union; a supplied value
/// must be at least the measured one.
pub fn check_partition_inequality<S: Scalar>(
    f: &Frame<S>,
    blocks: &[Vec<usize>],
    coeffs: &[S],
    epsilon: Option<f64>,
) -> Result<PartitionInequality> {
    let union: Vec<usize> = blocks.iter().flatten().copied().collect();
    if blocks.iter().any(Vec::is_empty) || union.is_empty() {
        return Err(Error::InvalidPartition("empty block".into()));
    }
    validate_subset(f.count(), &union).map_err(|e| Error::InvalidPartition(e.to_string()))?;
    if coeffs.len() != union.len() {
        return Err(Error::DimensionMismatch {
            expected: union.len(),
            got: coeffs.len(),
        });
    }
    let measured = riesz_bounds(f, &union)?.epsilon;
    let eps = resolve_epsilon(measured, epsilon, f.tolerances())?;

    let synth = |idx: &[usize], a: &[S]| f.vectors().select_columns(idx).mul_vec(a);
    let mut offset = 0;
    let mut block_sum = 0.0;
    for b in blocks {
        block_sum += norm_sqr(&synth(b, &coeffs[offset..offset + b.len()]));
        offset += b.len();
    }
    let mid = norm_sqr(&synth(&union, coeffs));
    let energy = norm_sqr(coeffs);
    let k = (1.0 + eps) * (1.0 + eps);
    let lhs = block_sum / k;
    let rhs = block_sum * k;
    let slack = 10.0 * f.tolerances().eigen * block_sum.max(mid).max(energy);
    Ok(PartitionInequality {
        epsilon: eps,
        lhs,
        mid,
        rhs,
        block_sum,
        coefficient_energy: energy,
        energy_holds: block_sum / (1.0 + eps) <= energy + slack && energy <= (1.0 + eps) * block_sum + slack,
        holds: lhs <= mid + slack && mid <= rhs + slack,
    })
}

pub(crate) fn resolve_epsilon(measured: f64, supplied: Option<f64>, tol: &Tolerances) -> Result<f64> {
    match supplied {
        None => Ok(measured),
        Some(e) if measured <= e + 10.0 * tol.eigen * (1.0 + e) => Ok(e),
        Some(e) => Err(Error::NotRieszBasis {
            measured,
            supplied: e,
        }),
    }
}

/// Spectral bracket check for one exponent `a`: eigenvalues of `S^a` on the
/// span against `[(1+ε)^{−|a|}, (1+ε)^{|a|}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBoundCheck {
    pub exponent: f64,
    pub min_eig: f64,
    pub max_eig: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Powers of the frame operator of an ε-Riesz family, restricted to its span.
pub fn check_operator_power_bounds<S: Scalar>(
    f: &Frame<S>,
    epsilon: f64,
    exponents: &[f64],
) -> Result<Vec<PowerBoundCheck>> {
    let all: Vec<usize> = (0..f.count()).collect();
    let measured = riesz_bounds(f, &all)?;
    if measured.is_dependent() {
        return Err(Error::NotRieszBasis {
            measured: measured.epsilon,
            supplied: epsilon,
        });
    }
    let eps = resolve_epsilon(measured.epsilon, Some(epsilon), f.tolerances())?;
    let rank = f.count();
    let tol = f.tolerances();
    exponents
        .iter()
        .map(|&a| {
            let p: Matrix<S> = spectral_power(f.frame_operator(), a, tol)?;
            let e = sym_eigen(&p, tol)?;
            // S^a is zero off the span; its top `rank` eigenvalues live on the span.
            let on_span = &e.values[..rank.min(e.values.len())];
            let min_eig = on_span.iter().copied().fold(f64::INFINITY, f64::min);
            let max_eig = on_span.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let upper = (1.0 + eps).powf(a.abs());
            let lower = 1.0 / upper;
            let slack = 10.0 * tol.eigen * upper;
            Ok(PowerBoundCheck {
                exponent: a,
                min_eig,
                max_eig,
                lower,
                upper,
                holds: min_eig >= lower - slack && max_eig <= upper + slack,
            })
        })
        .collect()
}
