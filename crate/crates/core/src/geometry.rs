//! Principal angles between subspaces, near-orthogonality and (near)
//! equi-isoclinic certification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::fusion::{check_rip_pipeline, near_tightness, FusionFrame, NearTightnessReport, Subspace, TIGHT_TOL};
use crate::numerics::{singular_values, Scalar, Tolerances};
use crate::partition::Partition;
use crate::report::{fmt_f64, CsvRows};
use crate::rip::{resolve_epsilon, riesz_bounds, RipReport};

/// Cosines descending, angles ascending; `k = min(dim a, dim b)` of each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalAngles {
    pub cosines: Vec<f64>,
    pub angles: Vec<f64>,
}

pub fn principal_angles<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>, tol: &Tolerances) -> Result<PrincipalAngles> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::AmbientMismatch(a.ambient_dim(), b.ambient_dim()));
    }
    // Put the smaller subspace second so the residual has exactly k columns.
    let (big, small) = if a.dim() >= b.dim() { (a, b) } else { (b, a) };
    let cross = big.basis().adjoint_matmul(small.basis());
    let cosines: Vec<f64> = singular_values(&cross, tol)?.into_iter().map(|c| c.clamp(0.0, 1.0)).collect();
    let residual = small.basis().sub(&big.basis().matmul(&cross));
    let mut sines: Vec<f64> = singular_values(&residual, tol)?.into_iter().map(|s| s.clamp(0.0, 1.0)).collect();
    sines.reverse();
    // acos loses accuracy near 0, asin near π/2; use whichever is well conditioned.
    let angles = cosines
        .iter()
        .zip(&sines)
        .map(|(&c, &s)| if c * c >= 0.5 { s.asin() } else { c.acos() })
        .collect();
    Ok(PrincipalAngles { cosines, angles })
}

/// `max |⟨φ, ψ⟩|` over unit `φ ∈ a`, `ψ ∈ b`, i.e. `cos θ₁`.
pub fn near_orthogonality<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>, tol: &Tolerances) -> Result<f64> {
    Ok(principal_angles(a, b, tol)?.cosines.first().copied().unwrap_or(0.0))
}

/// `2ε(1 + ε/2)`: correlation bound between the spans of two halves of an ε-Riesz family.
pub fn correlation_bound(epsilon: f64) -> f64 {
    2.0 * epsilon * (1.0 + epsilon / 2.0)
}

/// `2ε(1 + ε)²`: near-orthogonality constant of the block fusion frame.
pub fn orthogonality_bound(epsilon: f64) -> f64 {
    2.0 * epsilon * (1.0 + epsilon) * (1.0 + epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCheck {
    pub epsilon: f64,
    pub max_correlation: f64,
    pub bound: f64,
    /// The looser `2ε(1+ε)²`.
    pub bound_loose: f64,
    pub margin: f64,
    pub margin_loose: f64,
    pub holds: bool,
    pub holds_loose: bool,
    /// Correlation equals the bound to within tolerance; the strict form may fail there.
    pub at_equality: bool,
    pub outside_hypothesis: bool,
}

/// Correlation between `span{φ_i : i ∈ first}` and `span{φ_i : i ∈ second}`
/// for an ε-Riesz union `first ∪ second`.
pub fn check_correlation_bound<S: Scalar>(f: &Frame<S>, first: &[usize], second: &[usize], epsilon: Option<f64>) -> Result<CorrelationCheck> {
    if first.is_empty() || second.is_empty() || first.iter().any(|i| second.contains(i)) {
        return Err(Error::InvalidPartition("need two disjoint non-empty blocks".into()));
    }
    let union: Vec<usize> = first.iter().chain(second).copied().collect();
    let measured = riesz_bounds(f, &union).map_err(|e| Error::InvalidPartition(e.to_string()))?;
    let tol = f.tolerances();
    let eps = resolve_epsilon(measured.epsilon, epsilon, tol)?;
    let span = |idx: &[usize]| Subspace::span(&f.vectors().select_columns(idx), tol);
    let mc = near_orthogonality(&span(first)?, &span(second)?, tol)?;
    let bound = correlation_bound(eps);
    let bound_loose = orthogonality_bound(eps);
    let slack = 10.0 * tol.eigen;
    Ok(CorrelationCheck {
        epsilon: eps,
        max_correlation: mc,
        bound,
        bound_loose,
        margin: bound - mc,
        margin_loose: bound_loose - mc,
        holds: mc <= bound + slack,
        holds_loose: mc <= bound_loose + slack,
        at_equality: (bound - mc).abs() <= slack,
        outside_hypothesis: !(eps < 1.0),
    })
}

/// Squared cosines `μ` with `P₁P₂P₁ = μ P₁`, when they all agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoclinicParameter {
    pub lambda: Option<f64>,
    pub spread: f64,
}

pub fn isoclinic_parameter<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>, tol: &Tolerances) -> Result<IsoclinicParameter> {
    let cos2 = squared_cosines(a, b, tol)?;
    let (lo, hi) = extremes(&cos2);
    let spread = hi - lo;
    Ok(IsoclinicParameter {
        lambda: (spread <= tol.iso).then_some((hi + lo) / 2.0),
        spread,
    })
}

fn squared_cosines<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>, tol: &Tolerances) -> Result<Vec<f64>> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::AmbientMismatch(a.ambient_dim(), b.ambient_dim()));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(principal_angles(a, b, tol)?.cosines.iter().map(|c| c * c).collect())
}

fn extremes(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairAngles {
    pub i: usize,
    pub j: usize,
    pub cosines: Vec<f64>,
    pub cos2_min: f64,
    pub cos2_max: f64,
}

/// All pairwise principal cosines of an equi-dimensional family with the
/// optimal `λ` and the smallest `ε` such that every squared cosine lies in
/// `[λ − ε², λ + ε²]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoclinicReport {
    pub pairs: Vec<PairAngles>,
    pub lambda_star: f64,
    pub epsilon_required: f64,
    /// The ε checked, when one was supplied.
    pub epsilon: Option<f64>,
    pub holds: Option<bool>,
}

impl IsoclinicReport {
    pub fn holds_at(&self, epsilon: f64) -> bool {
        self.epsilon_required <= epsilon
    }

    pub fn max_correlation(&self) -> f64 {
        self.pairs.iter().map(|p| p.cosines.first().copied().unwrap_or(0.0)).fold(0.0, f64::max)
    }
}

impl CsvRows for IsoclinicReport {
    fn headers(&self) -> Vec<&'static str> {
        vec!["i", "j", "cos_max", "cos2_min", "cos2_max", "lambda_star", "epsilon_required"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.pairs
            .iter()
            .map(|p| {
                vec![
                    p.i.to_string(),
                    p.j.to_string(),
                    fmt_f64(p.cosines.first().copied().unwrap_or(0.0)),
                    fmt_f64(p.cos2_min),
                    fmt_f64(p.cos2_max),
                    fmt_f64(self.lambda_star),
                    fmt_f64(self.epsilon_required),
                ]
            })
            .collect()
    }
}

pub fn certify_equi_isoclinic<S: Scalar>(subspaces: &[Subspace<S>], epsilon: Option<f64>, tol: &Tolerances) -> Result<IsoclinicReport> {
    if subspaces.len() < 2 {
        return Err(Error::TooFewSubspaces(subspaces.len()));
    }
    let k = subspaces.len();
    let index: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let pairs = index
        .par_iter()
        .map(|&(i, j)| {
            let cosines = principal_angles(&subspaces[i], &subspaces[j], tol)?.cosines;
            if subspaces[i].dim() != subspaces[j].dim() {
                return Err(Error::DimensionMismatch {
                    expected: subspaces[i].dim(),
                    got: subspaces[j].dim(),
                });
            }
            let (cos2_min, cos2_max) = extremes(&cosines.iter().map(|c| c * c).collect::<Vec<_>>());
            Ok(PairAngles {
                i,
                j,
                cosines,
                cos2_min,
                cos2_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lo = pairs.iter().map(|p| p.cos2_min).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.cos2_max).fold(f64::NEG_INFINITY, f64::max);
    let epsilon_required = ((hi - lo) / 2.0).max(0.0).sqrt();
    Ok(IsoclinicReport {
        pairs,
        lambda_star: (hi + lo) / 2.0,
        epsilon_required,
        epsilon,
        holds: epsilon.map(|e| epsilon_required <= e),
    })
}

/// Near-tightness plus near-orthogonality of the block fusion frame of a
/// unit-norm tight frame whose blocks have at most `s/2` vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearOrthogonalReport {
    pub near_tightness: NearTightnessReport,
    pub angles: IsoclinicReport,
    pub max_correlation: f64,
    /// `2ε(1+ε)²`.
    pub orthogonality_bound: f64,
    /// `2ε(1+ε/2)`.
    pub correlation_bound: f64,
    pub holds_near_tight: bool,
    pub holds_orthogonal: bool,
    pub holds_correlation: bool,
    /// `epsilon_required ≤ sqrt(2ε(1+ε)²)`; `None` for blocks of unequal dimension.
    pub holds_isoclinic: Option<bool>,
    pub holds: bool,
}

impl CsvRows for NearOrthogonalReport {
    fn headers(&self) -> Vec<&'static str> {
        vec!["i", "j", "cos_max", "orthogonality_bound", "correlation_bound", "holds_orthogonal", "holds_near_tight"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.angles
            .pairs
            .iter()
            .map(|p| {
                let c = p.cosines.first().copied().unwrap_or(0.0);
                vec![
                    p.i.to_string(),
                    p.j.to_string(),
                    fmt_f64(c),
                    fmt_f64(self.orthogonality_bound),
                    fmt_f64(self.correlation_bound),
                    (c <= self.orthogonality_bound).to_string(),
                    self.holds_near_tight.to_string(),
                ]
            })
            .collect()
    }
}

pub fn certify_near_orthogonal<S: Scalar>(f: &Frame<S>, partition: &Partition, rip: &RipReport) -> Result<NearOrthogonalReport> {
    check_rip_pipeline(f, partition, rip, rip.s / 2, TIGHT_TOL)?;
    if partition.len() < 2 {
        return Err(Error::TooFewSubspaces(partition.len()));
    }
    let ff = FusionFrame::from_partition(f, partition, None)?;
    let near = near_tightness(f, &ff, partition, rip);
    let tol = f.tolerances();
    let eps = rip.epsilon_hat;
    let equi = ff.is_equi_dimensional();
    let angles = if equi {
        certify_equi_isoclinic(ff.subspaces(), Some(orthogonality_bound(eps).sqrt()), tol)?
    } else {
        // Pairwise correlations only; λ is meaningless across dimensions.
        let mut pairs = Vec::new();
        for i in 0..ff.len() {
            for j in i + 1..ff.len() {
                let cosines = principal_angles(&ff.subspaces()[i], &ff.subspaces()[j], tol)?.cosines;
                let (cos2_min, cos2_max) = extremes(&cosines.iter().map(|c| c * c).collect::<Vec<_>>());
                pairs.push(PairAngles {
                    i,
                    j,
                    cosines,
                    cos2_min,
                    cos2_max,
                });
            }
        }
        IsoclinicReport {
            pairs,
            lambda_star: f64::NAN,
            epsilon_required: f64::NAN,
            epsilon: None,
            holds: None,
        }
    };
    let max_correlation = angles.max_correlation();
    let bound = orthogonality_bound(eps);
    let tight_bound = correlation_bound(eps);
    let slack = 10.0 * tol.eigen;
    let holds_orthogonal = max_correlation <= bound + slack;
    let holds_correlation = max_correlation <= tight_bound + slack;
    let holds_isoclinic = angles.holds;
    Ok(NearOrthogonalReport {
        holds: near.holds && holds_orthogonal && holds_isoclinic.unwrap_or(true),
        holds_near_tight: near.holds,
        near_tightness: near,
        angles,
        max_correlation,
        orthogonality_bound: bound,
        correlation_bound: tight_bound,
        holds_orthogonal,
        holds_correlation,
        holds_isoclinic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{random_unit_vector, Matrix};
    use crate::rip::{rip_exhaustive, DEFAULT_BUDGET};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn span(cols: &[Vec<f64>]) -> Subspace<f64> {
        Subspace::span(&Matrix::from_columns(cols[0].len(), cols).unwrap(), &tol()).unwrap()
    }

    fn coords(n: usize, idx: &[usize]) -> Subspace<f64> {
        Subspace::from_orthonormal(Matrix::identity(n).select_columns(idx), &tol()).unwrap()
    }

    #[test]
    fn principal_angle_examples() {
        let a = coords(3, &[0, 1]);
        let p = principal_angles(&a, &a, &tol()).unwrap();
        assert!(p.cosines.iter().all(|c| (c - 1.0).abs() < 1e-14));
        assert!(p.angles.iter().all(|t| t.abs() < 1e-7));

        let p = principal_angles(&coords(2, &[0]), &coords(2, &[1]), &tol()).unwrap();
        assert_eq!(p.cosines, vec![0.0]);
        assert!((p.angles[0] - FRAC_PI_2).abs() < 1e-15);

        for alpha in [0.3f64, 1.0, 2.5, 1e-9] {
            let line = span(&[vec![alpha.cos(), alpha.sin()]]);
            let p = principal_angles(&coords(2, &[0]), &line, &tol()).unwrap();
            assert!((p.cosines[0] - alpha.cos().abs()).abs() < 1e-14);
            let expected = if alpha <= FRAC_PI_2 { alpha } else { std::f64::consts::PI - alpha };
            assert!((p.angles[0] - expected).abs() < 1e-12, "{alpha}: {:?}", p.angles);
        }
        assert!(matches!(principal_angles(&coords(2, &[0]), &coords(3, &[0]), &tol()), Err(Error::AmbientMismatch(2, 3))));
    }

    #[test]
    fn small_angles_are_resolved() {
        let t = 1e-10f64;
        let line = span(&[vec![t.cos(), t.sin(), 0.0]]);
        let p = principal_angles(&coords(3, &[0]), &line, &tol()).unwrap();
        assert!((p.angles[0] - t).abs() < 1e-20);
    }

    #[test]
    fn unequal_dimensions() {
        let p = principal_angles(&coords(4, &[0, 1, 2]), &coords(4, &[2, 3]), &tol()).unwrap();
        assert_eq!(p.cosines.len(), 2);
        assert!((p.cosines[0] - 1.0).abs() < 1e-14 && p.cosines[1].abs() < 1e-14);
    }

    #[test]
    fn near_orthogonality_examples() {
        assert_eq!(near_orthogonality(&coords(4, &[0, 1]), &coords(4, &[2, 3]), &tol()).unwrap(), 0.0);
        assert!((near_orthogonality(&coords(4, &[0, 1]), &coords(4, &[0, 1]), &tol()).unwrap() - 1.0).abs() < 1e-14);
        let m = Frame::<f64>::harmonic(2, 3).unwrap();
        let a = Subspace::span(&m.vectors().select_columns(&[0, 1]), &tol()).unwrap();
        let b = Subspace::span(&m.vectors().select_columns(&[2]), &tol()).unwrap();
        assert!((near_orthogonality(&a, &b, &tol()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn correlation_bound_examples() {
        assert!((correlation_bound(0.1) - 0.21).abs() < 1e-15);
        assert!((orthogonality_bound(0.05) - 0.11025).abs() < 1e-15);
        let f = Frame::<f64>::orthonormal(4).unwrap();
        let c = check_correlation_bound(&f, &[0, 1], &[2], None).unwrap();
        assert_eq!((c.epsilon, c.max_correlation, c.bound), (0.0, 0.0, 0.0));
        assert!(c.holds && c.holds_loose);
        assert!(matches!(check_correlation_bound(&f, &[0, 1], &[1], None), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn correlation_bound_on_harmonic_subsets() {
        let f = Frame::<f64>::harmonic(8, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut tested = 0;
        for _ in 0..200 {
            let idx = rand::seq::index::sample(&mut rng, 12, 4).into_vec();
            let r = riesz_bounds(&f, &idx).unwrap();
            if r.epsilon >= 1.0 {
                continue;
            }
            for split in 1..4 {
                let c = check_correlation_bound(&f, &idx[..split], &idx[split..], None).unwrap();
                assert!(c.holds && c.holds_loose, "{idx:?} {c:?}");
            }
            tested += 1;
        }
        assert!(tested > 20);
    }

    #[test]
    fn isoclinic_examples() {
        let a = coords(4, &[0, 1]);
        let same = isoclinic_parameter(&a, &a, &tol()).unwrap();
        assert!((same.lambda.unwrap() - 1.0).abs() < 1e-14);
        let orth = isoclinic_parameter(&a, &coords(4, &[2, 3]), &tol()).unwrap();
        assert_eq!(orth.lambda, Some(0.0));
        let line = span(&[vec![0.6, 0.8]]);
        let p = isoclinic_parameter(&coords(2, &[0]), &line, &tol()).unwrap();
        assert!((p.lambda.unwrap() - 0.36).abs() < 1e-14 && p.spread == 0.0);
        assert!(matches!(isoclinic_parameter(&a, &coords(4, &[3]), &tol()), Err(Error::DimensionMismatch { .. })));
        let skew = span(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]]);
        assert_eq!(isoclinic_parameter(&a, &skew, &tol()).unwrap().lambda, None);
    }

    #[test]
    fn equi_isoclinic_examples() {
        let blocks: Vec<_> = (0..3).map(|j| coords(6, &[2 * j, 2 * j + 1])).collect();
        let r = certify_equi_isoclinic(&blocks, Some(0.0), &tol()).unwrap();
        assert_eq!((r.lambda_star, r.epsilon_required, r.holds), (0.0, 0.0, Some(true)));
        assert_eq!(r.pairs.len(), 3);
        assert_eq!((r.pairs[2].i, r.pairs[2].j), (1, 2));

        let copies = vec![blocks[0].clone(); 4];
        let r = certify_equi_isoclinic(&copies, None, &tol()).unwrap();
        assert!((r.lambda_star - 1.0).abs() < 1e-14 && r.epsilon_required < 1e-7);

        // Squared cosines {0, 1} around λ = 1/2 need ε² = 1/2.
        let mixed = vec![coords(3, &[0, 1]), coords(3, &[1, 2])];
        let r = certify_equi_isoclinic(&mixed, Some(0.7), &tol()).unwrap();
        assert!((r.lambda_star - 0.5).abs() < 1e-14);
        assert!((r.epsilon_required - 0.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(r.holds, Some(false));
        assert!(r.holds_at(0.71));

        assert!(matches!(certify_equi_isoclinic(&blocks[..1], None, &tol()), Err(Error::TooFewSubspaces(1))));
        let uneven = vec![coords(3, &[0, 1]), coords(3, &[2])];
        assert!(matches!(certify_equi_isoclinic(&uneven, None, &tol()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn near_orthogonal_examples() {
        let f = Frame::<f64>::orthonormal(4).unwrap();
        let rip = rip_exhaustive(&f, 2, DEFAULT_BUDGET).unwrap();
        let r = certify_near_orthogonal(&f, &Partition::singletons(4), &rip).unwrap();
        assert_eq!(r.max_correlation, 0.0);
        assert!(r.holds && r.holds_correlation);

        let f = Frame::<f64>::harmonic(8, 24).unwrap();
        let rip = rip_exhaustive(&f, 4, DEFAULT_BUDGET).unwrap();
        let r = certify_near_orthogonal(&f, &Partition::contiguous(24, 2).unwrap(), &rip).unwrap();
        assert!(r.holds_near_tight && r.holds_orthogonal && r.holds_isoclinic == Some(true), "{r:?}");

        let p3 = Partition::contiguous(24, 3).unwrap();
        assert!(matches!(certify_near_orthogonal(&f, &p3, &rip), Err(Error::BlockTooLarge { size: 3, cap: 2 })));
    }

    #[test]
    fn complex_angles() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let a = Subspace::span(&Matrix::from_columns(2, &[vec![one, z]]).unwrap(), &tol()).unwrap();
        let b = Subspace::span(&Matrix::from_columns(2, &[vec![i, i]]).unwrap(), &tol()).unwrap();
        let c = near_orthogonality(&a, &b, &tol()).unwrap();
        assert!((c - 0.5f64.sqrt()).abs() < 1e-14);
    }

    fn random_subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace<f64> {
        let m = Matrix::from_fn(n, k, |_, _| f64::sample_gaussian(rng));
        Subspace::span(&m, &tol()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn angle_invariants(seed in any::<u64>(), n in 2usize..=6, ka in 1usize..=3, kb in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (ka, kb) = (ka.min(n), kb.min(n));
            let a = random_subspace(&mut rng, n, ka);
            let b = random_subspace(&mut rng, n, kb);
            let ab = principal_angles(&a, &b, &tol()).unwrap();
            let ba = principal_angles(&b, &a, &tol()).unwrap();
            for (x, y) in ab.cosines.iter().zip(&ba.cosines) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
            for (c, t) in ab.cosines.iter().zip(&ab.angles) {
                prop_assert!((t.cos() - c).abs() <= 1e-8);
            }
            let mut best = 0.0f64;
            for _ in 0..2000 {
                let u: Vec<f64> = random_unit_vector(&mut rng, ka);
                let v: Vec<f64> = random_unit_vector(&mut rng, kb);
                let x = a.basis().mul_vec(&u);
                let y = b.basis().mul_vec(&v);
                best = best.max(crate::numerics::inner(&x, &y).abs());
            }
            prop_assert!(best <= ab.cosines[0] + 1e-6);
            if ka == kb {
                // Squared cosines are the eigenvalues of B₁ᴴ P₂ B₁.
                let m = a.basis().adjoint().matmul(&b.projector()).matmul(a.basis());
                let e = crate::numerics::sym_eigen(&m, &tol()).unwrap();
                for (l, c) in e.values.iter().zip(&ab.cosines) {
                    prop_assert!((l - c * c).abs() <= 10.0 * tol().eigen);
                }
            }
        }
    }
}
