//! End-to-end certification suite behind `framekit verify-all`.
//!
//! Each clause builds seeded instances and checks one family of brackets.
//! Instance generation depends only on the config, so reports are reproducible.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::fusion::{certify_near_tight, check_local_global, FusionFrame, Subspace};
use crate::geometry::{check_correlation_bound, principal_angles};
use crate::numerics::{norm, orthonormal_basis, random_vector, spectral_power, Matrix, Scalar, Tolerances};
use crate::partition::Partition;
use crate::replacement::{certify_replacement, check_block_residual, k1_limit, replace_blocks, replacement_bracket};
use crate::report::CsvRows;
use crate::rip::{check_operator_power_bounds, riesz_bounds, rip_exhaustive, rip_randomized, RipMethod, RipReport, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instances for the near-tightness and block-correlation clauses.
    pub instances: usize,
    /// Blocks for the operator-power, projection-residual and local/global clauses.
    pub blocks: usize,
    /// Instances per reconstruction round-trip family.
    pub round_trips: usize,
    /// Replaces the measured ε in every bracket that takes one.
    pub force_epsilon: Option<f64>,
    /// Clause ids to run (1 to 10); all when empty.
    pub criteria: Vec<u8>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            instances: 50,
            blocks: 25,
            round_trips: 100,
            force_epsilon: None,
            criteria: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub id: u8,
    pub name: String,
    pub holds: bool,
    pub instances: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub clauses: Vec<ClauseResult>,
    pub failing: Vec<String>,
    pub passed: bool,
}

impl CsvRows for SuiteReport {
    fn headers(&self) -> Vec<&'static str> {
        vec!["id", "clause", "holds", "instances", "detail"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.clauses
            .iter()
            .map(|c| vec![c.id.to_string(), c.name.clone(), c.holds.to_string(), c.instances.to_string(), c.detail.clone()])
            .collect()
    }
}

pub const CLAUSES: [(u8, &str); 10] = [
    (1, "trivial-exactness"),
    (2, "mercedes-benz"),
    (3, "near-tight-fusion"),
    (4, "block-correlation"),
    (5, "operator-powers"),
    (6, "projection-residual"),
    (7, "replacement-bracket"),
    (8, "reconstruction"),
    (9, "local-global"),
    (10, "randomized-oracle"),
];

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if let Some(bad) = cfg.criteria.iter().find(|&&c| !(1..=10).contains(&c)) {
        return Err(Error::InvalidArgument(format!("unknown criterion {bad}")));
    }
    if let Some(e) = cfg.force_epsilon {
        if !(e.is_finite() && e >= 0.0) {
            return Err(Error::InvalidArgument(format!("force_epsilon must be a finite non-negative number, got {e}")));
        }
    }
    let mut clauses = Vec::new();
    for (id, name) in CLAUSES {
        if !cfg.criteria.is_empty() && !cfg.criteria.contains(&id) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (u64::from(id) << 32));
        let outcome = match id {
            1 => trivial_exactness(),
            2 => mercedes_benz(),
            3 => near_tight_fusion(cfg, &mut rng),
            4 => block_correlation(cfg, &mut rng),
            5 => operator_powers(cfg, &mut rng),
            6 => projection_residual(cfg, &mut rng),
            7 => replacement_bracket_clause(cfg, &mut rng),
            8 => reconstruction(cfg, &mut rng),
            9 => local_global(cfg, &mut rng),
            _ => randomized_oracle(&mut rng),
        };
        let (holds, instances, detail) = match outcome {
            Ok(o) => (o.failures.is_empty(), o.instances, o.describe()),
            Err(e) => (false, 0, format!("error: {e}")),
        };
        clauses.push(ClauseResult {
            id,
            name: name.to_string(),
            holds,
            instances,
            detail,
        });
    }
    let failing: Vec<String> = clauses.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect();
    Ok(SuiteReport {
        passed: failing.is_empty(),
        clauses,
        failing,
    })
}

#[derive(Default)]
struct Outcome {
    instances: usize,
    /// Smallest room left under a tolerance or bound; `None` if every check was pass/fail only.
    worst: Option<f64>,
    failures: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, margin: f64, what: impl FnOnce() -> String) {
        self.worst = Some(self.worst.map_or(margin, |w| w.min(margin)));
        self.flag(ok, what);
    }

    fn flag(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn describe(&self) -> String {
        match self.failures.first() {
            None => self.worst.map_or_else(|| "exact".into(), |w| format!("worst margin {w:.3e}")),
            Some(f) => format!("{} of {} failed; first: {f}", self.failures.len(), self.instances),
        }
    }
}

const HARMONIC: [(usize, usize); 8] = [(8, 9), (8, 10), (9, 10), (10, 12), (12, 14), (15, 16), (16, 18), (16, 20)];

/// Shuffled indices cut into blocks of random size `1..=s`.
pub fn random_partition<R: Rng>(rng: &mut R, count: usize, s: usize) -> Partition {
    let mut idx: Vec<usize> = (0..count).collect();
    idx.shuffle(rng);
    let mut blocks = Vec::new();
    let mut rest = &idx[..];
    while !rest.is_empty() {
        let k = rng.gen_range(1..=s.min(rest.len()));
        let mut b = rest[..k].to_vec();
        b.sort_unstable();
        blocks.push(b);
        rest = &rest[k..];
    }
    Partition::new(count, blocks).expect("shuffled cover is a partition")
}

/// Largest `s ≤ s_max` with `ε̂ < 1`, with its report.
fn rip_below_one<S: Scalar>(f: &Frame<S>, s_max: usize) -> Result<RipReport> {
    let mut s = s_max.min(f.count());
    loop {
        let r = rip_exhaustive(f, s, DEFAULT_BUDGET)?;
        if r.epsilon_hat < 1.0 || s == 1 {
            return Ok(r);
        }
        s -= 1;
    }
}

/// A random subset of size `k` with Riesz constant below one.
fn riesz_subset<S: Scalar, R: Rng>(rng: &mut R, f: &Frame<S>, k: usize) -> Result<(Vec<usize>, f64)> {
    for _ in 0..1000 {
        let mut idx = rand::seq::index::sample(rng, f.count(), k).into_vec();
        idx.sort_unstable();
        let r = riesz_bounds(f, &idx)?;
        if r.epsilon < 1.0 {
            return Ok((idx, r.epsilon));
        }
    }
    Err(Error::InvalidArgument("no ε < 1 subset found".into()))
}

fn trivial_exactness() -> Result<Outcome> {
    let mut o = Outcome::default();
    let f = Frame::<f64>::orthonormal(6)?;
    for s in 1..=3 {
        let r = rip_exhaustive(&f, s, DEFAULT_BUDGET)?;
        o.check(r.epsilon_hat <= 1e-8, 1e-8 - r.epsilon_hat, || format!("ε̂(s={s}) = {}", r.epsilon_hat));
    }
    let p = Partition::contiguous(6, 2)?;
    let ff = FusionFrame::from_partition(&f, &p, None)?;
    let b = ff.bounds();
    let dev = (b.lower - 1.0).abs().max((b.upper - 1.0).abs());
    o.check(dev <= 1e-8, 1e-8 - dev, || format!("fusion bounds {b:?}"));
    for i in 0..ff.len() {
        for j in i + 1..ff.len() {
            for c in principal_angles(&ff.subspaces()[i], &ff.subspaces()[j], f.tolerances())?.cosines {
                let d = c.min((1.0 - c).abs());
                o.check(d <= 1e-8, 1e-8 - d, || format!("cosine {c} between blocks {i} and {j}"));
            }
        }
    }
    let rf = replace_blocks(&f, &p, &[0, 1, 2])?;
    let d = rf.frame.vectors().sub(f.vectors()).max_abs();
    o.check(d <= 1e-8, 1e-8 - d, || format!("replacement moved vectors by {d}"));
    let c = Frame::<Complex64>::orthonormal(4)?;
    let r = rip_exhaustive(&c, 2, DEFAULT_BUDGET)?;
    o.check(r.epsilon_hat <= 1e-8, 1e-8 - r.epsilon_hat, || format!("complex ε̂ = {}", r.epsilon_hat));
    Ok(o)
}

fn mercedes_benz() -> Result<Outcome> {
    let mut o = Outcome::default();
    let f = Frame::<f64>::harmonic(2, 3)?;
    let b = f.bounds();
    let d = (b.lower - 1.5).abs().max((b.upper - 1.5).abs());
    o.check(d <= 1e-10, 1e-10 - d, || format!("frame bounds {b:?}"));
    for pair in [[0, 1], [0, 2], [1, 2]] {
        let r = riesz_bounds(&f, &pair)?;
        let d = (r.lambda_max - 1.5).abs().max((r.lambda_min - 0.5).abs());
        o.check(d <= 1e-10, 1e-10 - d, || format!("Gram eigenvalues of {pair:?}: {r:?}"));
    }
    let r = rip_exhaustive(&f, 2, DEFAULT_BUDGET)?;
    let d = (r.epsilon_hat - 1.0).abs();
    o.check(d <= 1e-10, 1e-10 - d, || format!("ε̂(s=2) = {}", r.epsilon_hat));
    let ff = FusionFrame::from_partition(&f, &Partition::singletons(3), None)?;
    let d = ff.operator().sub(&Matrix::identity(2).scale(1.5)).max_abs();
    o.check(d <= 1e-10, 1e-10 - d, || format!("singleton fusion operator off 1.5·I by {d}"));
    Ok(o)
}

fn near_tight_instance<S: Scalar, R: Rng>(
    o: &mut Outcome,
    rng: &mut R,
    f: &Frame<S>,
    s_max: usize,
    force: Option<f64>,
    label: &str,
) -> Result<()> {
    let rip = rip_below_one(f, s_max)?;
    let p = random_partition(rng, f.count(), rip.s);
    let r = certify_near_tight(f, &p, &rip)?;
    let eps = force.unwrap_or(r.epsilon_input);
    let ratio = f.count() as f64 / f.dim() as f64;
    let (lo, hi) = (ratio / (1.0 + eps), ratio * (1.0 + eps));
    let m = r.measured;
    let margin = (m.lower - lo).min(hi - m.upper);
    o.check(margin >= -1e-8, margin + 1e-8, || {
        format!("{label} s={} ε={eps}: measured [{}, {}] vs [{lo}, {hi}]", rip.s, m.lower, m.upper)
    });
    Ok(())
}

fn near_tight_fusion<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    for i in 0..cfg.instances {
        let s_max = rng.gen_range(2..=4);
        match i % 5 {
            0 | 2 => {
                let (n, m) = HARMONIC[rng.gen_range(0..HARMONIC.len())];
                near_tight_instance(&mut o, rng, &Frame::<f64>::harmonic(n, m)?, s_max, cfg.force_epsilon, "harmonic")?;
            }
            1 => {
                let n = rng.gen_range(6..=10);
                let m = n + rng.gen_range(1..=3);
                near_tight_instance(&mut o, rng, &Frame::<Complex64>::harmonic(n, m)?, s_max, cfg.force_epsilon, "complex harmonic")?;
            }
            _ => {
                let n = rng.gen_range(8..=12);
                let m = n + rng.gen_range(1..=3);
                let f = Frame::<f64>::random_unit_tight(n, m, rng.gen(), None, 1e-10)?;
                near_tight_instance(&mut o, rng, &f, s_max, cfg.force_epsilon, "random tight")?;
            }
        }
    }
    Ok(o)
}

fn block_correlation<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    for _ in 0..cfg.instances {
        let (n, m) = HARMONIC[rng.gen_range(0..HARMONIC.len())];
        let f = Frame::<f64>::harmonic(n, m)?;
        let k = rng.gen_range(2..=4);
        let (mut idx, _) = riesz_subset(rng, &f, k)?;
        for _ in 0..2 {
            idx.shuffle(rng);
            let cut = rng.gen_range(1..k);
            let c = check_correlation_bound(&f, &idx[..cut], &idx[cut..], cfg.force_epsilon)?;
            let margin = (c.bound - c.max_correlation).min(c.bound_loose - c.max_correlation);
            o.check(
                c.max_correlation <= c.bound + 1e-10 && c.max_correlation <= c.bound_loose + 1e-10,
                margin + 1e-10,
                || format!("split {:?}|{:?}: cos θ₁ = {} vs {}", &idx[..cut], &idx[cut..], c.max_correlation, c.bound),
            );
        }
    }
    Ok(o)
}

fn operator_powers<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    let exponents = [0.5, 1.0, 2.0, -0.5, -1.0, -2.0];
    for _ in 0..cfg.blocks {
        let (n, m) = HARMONIC[rng.gen_range(0..HARMONIC.len())];
        let f = Frame::<f64>::harmonic(n, m)?;
        let k = rng.gen_range(2..=4);
        let (idx, eps) = riesz_subset(rng, &f, k)?;
        let sub = f.subframe(&idx)?;
        for c in check_operator_power_bounds(&sub, cfg.force_epsilon.unwrap_or(eps), &exponents)? {
            let slack = 10.0 * sub.tolerances().eigen * c.upper;
            let margin = (c.min_eig - c.lower).min(c.upper - c.max_eig) + slack;
            o.check(c.holds, margin, || format!("block {idx:?} a={}: [{}, {}] vs [{}, {}]", c.exponent, c.min_eig, c.max_eig, c.lower, c.upper));
        }
    }
    Ok(o)
}

fn projection_residual<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    for _ in 0..cfg.blocks {
        let (n, m) = HARMONIC[rng.gen_range(0..HARMONIC.len())];
        let f = Frame::<f64>::harmonic(n, m)?;
        let k = rng.gen_range(3..=4);
        let (idx, _) = riesz_subset(rng, &f, k)?;
        let j = rng.gen_range(1..k);
        let mut sub = rand::seq::index::sample(rng, k, j).into_iter().map(|t| idx[t]).collect::<Vec<_>>();
        sub.sort_unstable();
        let c = check_block_residual(&f, &idx, &sub, cfg.force_epsilon, 100, rng.gen())?;
        let r = c.inner.worst_residual_ratio;
        let margin = (c.bound_measured - r).min(c.bound_instantiated - r) + 10.0 * f.tolerances().eigen;
        o.check(c.holds, margin, || {
            format!("block {idx:?} sub {sub:?}: residual {r} vs {} / {}", c.bound_measured, c.bound_instantiated)
        });
    }
    Ok(o)
}

/// Unit columns `e_j + noise·g`, renormalised: an RIP family with small ε.
pub fn near_orthonormal<R: Rng>(rng: &mut R, n: usize, noise: f64) -> Result<Frame<f64>> {
    let mut m = Matrix::<f64>::identity(n);
    for j in 0..n {
        for x in m.col_mut(j) {
            *x += noise * f64::sample_gaussian(rng);
        }
        let len = norm(m.col(j));
        for x in m.col_mut(j) {
            *x /= len;
        }
    }
    Frame::new(m)
}

fn replacement_bracket_clause<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    let k = k1_limit(0.01)?;
    o.flag(k == 541, || format!("k1_limit(0.01) = {k}, expected 541"));
    for _ in 0..5 {
        let f = near_orthonormal(rng, 12, 0.002)?;
        let rip = rip_exhaustive(&f, 4, DEFAULT_BUDGET)?;
        let p = Partition::contiguous(12, 3)?;
        let eps = cfg.force_epsilon.unwrap_or(rip.epsilon_hat);
        let limit = match (eps > 0.0).then(|| k1_limit(eps)) {
            None => u64::MAX,
            Some(Ok(l)) => l,
            Some(Err(e)) => {
                o.flag(false, || format!("bracket invalid at ε = {eps}: {e}"));
                continue;
            }
        };
        if eps > 0.02 {
            o.flag(false, || format!("ε = {eps} exceeds the 0.02 pipeline budget"));
            continue;
        }
        for k1 in 1..=4usize.min(limit as usize) {
            let ids: Vec<usize> = (0..k1).collect();
            let rf = replace_blocks(&f, &p, &ids)?;
            let r = certify_replacement(&rf, 4, &rip, RipMethod::Exhaustive, DEFAULT_BUDGET)?;
            let (lo, hi) = replacement_bracket(eps, k1);
            let margin = (r.measured_lower - lo).min(hi - r.measured_upper);
            o.check(lo > 0.0 && margin >= 0.0, margin, || {
                format!("K₁={k1} ε={eps}: measured [{}, {}] vs [{lo}, {hi}]", r.measured_lower, r.measured_upper)
            });
        }
    }
    Ok(o)
}

fn relative_error<S: Scalar>(x: &[S], y: &[S]) -> f64 {
    let d: Vec<S> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
    norm(&d) / norm(x).max(f64::MIN_POSITIVE)
}

fn random_spanning_subspaces<S: Scalar, R: Rng>(rng: &mut R, n: usize, tol: &Tolerances) -> Result<Vec<Subspace<S>>> {
    let mut subs = Vec::new();
    let mut covered = 0;
    while covered < n + 1 || subs.len() < 2 {
        let k = rng.gen_range(1..=n);
        let v = Matrix::from_fn(n, k, |_, _| S::sample_gaussian(rng));
        let s = Subspace::span(&v, tol)?;
        covered += s.dim();
        subs.push(s);
    }
    Ok(subs)
}

fn reconstruction<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    let tol = Tolerances::default();
    for i in 0..cfg.round_trips {
        let n = rng.gen_range(2..=8);
        let m = n + rng.gen_range(0..=n);
        let err = if i % 4 == 3 {
            let f = Frame::new(Matrix::<Complex64>::from_fn(n, m, |_, _| Complex64::sample_gaussian(rng)))?;
            let x: Vec<Complex64> = random_vector(rng, n);
            relative_error(&x, &f.reconstruct(&f.analyze(&x)?)?)
        } else {
            let f = Frame::new(Matrix::<f64>::from_fn(n, m, |_, _| f64::sample_gaussian(rng)))?;
            let x: Vec<f64> = random_vector(rng, n);
            relative_error(&x, &f.reconstruct(&f.analyze(&x)?)?)
        };
        o.check(err <= 1e-8, 1e-8 - err, || format!("frame round trip error {err}"));
    }
    for _ in 0..cfg.round_trips {
        let n = rng.gen_range(2..=8);
        let subs = random_spanning_subspaces::<f64, _>(rng, n, &tol)?;
        let weights: Vec<f64> = subs.iter().map(|_| rng.gen_range(0.5..2.0)).collect();
        let ff = FusionFrame::new(subs, weights, tol)?;
        if ff.bounds().lower <= 0.0 {
            continue;
        }
        let x: Vec<f64> = random_vector(rng, n);
        let err = relative_error(&x, &ff.reconstruct(&ff.measure(&x)?)?);
        o.check(err <= 1e-8, 1e-8 - err, || format!("fusion round trip error {err}"));
    }
    Ok(o)
}

/// Random local frame of `m` vectors inside `sub`.
fn local_frame<R: Rng>(rng: &mut R, sub: &Subspace<f64>, m: usize) -> Matrix<f64> {
    let coeffs = Matrix::from_fn(sub.dim(), m, |_, _| f64::sample_gaussian(rng));
    sub.basis().matmul(&coeffs)
}

fn local_global<R: Rng>(cfg: &SuiteConfig, rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    let tol = Tolerances::default();
    for _ in 0..cfg.blocks {
        let n = rng.gen_range(2..=7);
        let subs = random_spanning_subspaces::<f64, _>(rng, n, &tol)?;
        let weights: Vec<f64> = subs.iter().map(|_| rng.gen_range(0.5..2.0)).collect();
        let ff = FusionFrame::new(subs, weights, tol)?;
        let locals: Vec<Matrix<f64>> = ff
            .subspaces()
            .iter()
            .map(|s| {
                let m = s.dim() + rng.gen_range(0..=3);
                local_frame(rng, s, m)
            })
            .collect();
        let r = check_local_global(&ff, &locals)?;
        let slack = 10.0 * tol.eigen * r.bracket.1.max(r.reverse_bracket.1).max(1.0);
        let margin = (r.composed.lower - r.bracket.0).min(r.bracket.1 - r.composed.upper) + slack;
        o.check(r.holds_forward && r.holds_reverse, margin, || {
            format!("composed [{}, {}] vs [{}, {}]", r.composed.lower, r.composed.upper, r.bracket.0, r.bracket.1)
        });
    }
    // Parseval fusion frame from two orthonormal decompositions, Parseval locals.
    for _ in 0..5 {
        let n = rng.gen_range(3..=7);
        let mut subs = Vec::new();
        for _ in 0..2 {
            let q = orthonormal_basis(&Matrix::from_fn(n, n, |_, _| f64::sample_gaussian(rng)), tol.rank.sqrt());
            let cut = rng.gen_range(1..n);
            let idx: Vec<usize> = (0..n).collect();
            subs.push(Subspace::from_orthonormal(q.select_columns(&idx[..cut]), &tol)?);
            subs.push(Subspace::from_orthonormal(q.select_columns(&idx[cut..]), &tol)?);
        }
        let w = vec![0.5f64.sqrt(); subs.len()];
        let ff = FusionFrame::new(subs, w, tol)?;
        let locals: Vec<Matrix<f64>> = ff
            .subspaces()
            .iter()
            .map(|s| {
                let m = s.dim() + rng.gen_range(0..=2);
                let v = local_frame(rng, s, m);
                let root = spectral_power(&v.outer_gram(), -0.5, &tol).expect("PSD frame operator");
                Ok(root.matmul(&v))
            })
            .collect::<Result<_>>()?;
        let r = check_local_global(&ff, &locals)?;
        let d = (r.composed.lower - 1.0).abs().max((r.composed.upper - 1.0).abs());
        o.check(d <= 1e-8, 1e-8 - d, || format!("Parseval composition bounds [{}, {}]", r.composed.lower, r.composed.upper));
    }
    Ok(o)
}

fn oracle_case<S: Scalar>(o: &mut Outcome, f: &Frame<S>, s: usize, seed: u64) -> Result<()> {
    let a = rip_exhaustive(f, s, DEFAULT_BUDGET)?;
    let b = rip_randomized(f, s, 10_000, seed)?;
    let same = a.epsilon_hat.to_bits() == b.epsilon_hat.to_bits() && a.witness == b.witness;
    o.flag(same, || format!("M={} s={s}: {} {:?} vs {} {:?}", f.count(), a.epsilon_hat, a.witness, b.epsilon_hat, b.witness));
    Ok(())
}

fn randomized_oracle<R: Rng>(rng: &mut R) -> Result<Outcome> {
    let mut o = Outcome::default();
    for &(n, m) in &[(2, 3), (4, 8), (8, 16), (8, 24), (12, 16)] {
        for s in 1..=4usize.min(m) {
            if crate::subsets::binomial(m, s) <= 10_000 {
                oracle_case(&mut o, &Frame::<f64>::harmonic(n, m)?, s, rng.gen())?;
            }
        }
    }
    oracle_case(&mut o, &Frame::<Complex64>::harmonic(5, 9)?, 3, rng.gen())?;
    for _ in 0..5 {
        let n = rng.gen_range(3..=8);
        let f = Frame::<f64>::random_unit_tight(n, n + rng.gen_range(1..=6), rng.gen(), None, 1e-10)?;
        oracle_case(&mut o, &f, rng.gen_range(2..=3), rng.gen())?;
    }
    Ok(o)
}
