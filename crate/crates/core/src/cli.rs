//! Command-line front end. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 pass, 1 a certified check (or its hypothesis) failed,
//! 2 usage or input error, 3 numerical non-convergence.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frame::{ConvergenceFailure, Frame};
use crate::fusion::{certify_near_tight, FusionFrame};
use crate::geometry::{certify_equi_isoclinic, certify_near_orthogonal};
use crate::io::{any_frame_from_json, any_fusion_from_json, frame_to_json, AnyFrame, AnyFusionFrame};
use crate::numerics::{Field, Scalar, Tolerances};
use crate::partition::{BlockSpec, Partition};
use crate::replacement::{certify_replacement, replace_blocks};
use crate::report::{to_csv, CsvRows, Envelope, InputDigest};
use crate::rip::{rip_exhaustive, rip_randomized, RipMethod, RipReport, DEFAULT_BUDGET};
use crate::verify::{run_suite, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "framekit", version, about = "Construct, analyse and certify finite frames, RIP families and fusion frames")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct GlobalArgs {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report (or generated frame) here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Relative asymmetry accepted for symmetric inputs [default: 1e-10].
    #[arg(long, global = true)]
    tol_sym: Option<f64>,
    /// Decomposition residual tolerance [default: 1e-10].
    #[arg(long, global = true)]
    tol_eigen: Option<f64>,
    /// Eigenvalues below this fraction of the largest count as zero [default: 1e-12].
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Spread below which subspaces count as exactly isoclinic [default: 1e-10].
    #[arg(long, global = true)]
    tol_iso: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Harmonic,
    RandomTight,
    Orthonormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a frame file.
    Generate(GenerateArgs),
    /// Restricted-isometry constant of a frame file.
    Rip(RipArgs),
    /// Near-tightness certificate of the block fusion frame.
    Fusion(FusionArgs),
    /// Principal angles, near-orthogonality and isoclinic spread.
    Angles(AnglesArgs),
    /// Whiten blocks and certify the restricted-isometry bracket.
    Replace(ReplaceArgs),
    /// Run every certification clause on seeded instances.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    dim: usize,
    /// Number of vectors (defaults to `dim` for orthonormal).
    #[arg(long)]
    count: Option<usize>,
    /// Required for random-tight.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    field: FieldArg,
    /// Iteration cap for random-tight (default 10·dim·count).
    #[arg(long)]
    iters: Option<usize>,
    /// Convergence tolerance for random-tight.
    #[arg(long, default_value_t = 1e-10)]
    tight_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Args, Serialize)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
    method: Method,
    /// Subsets drawn by the randomized search.
    #[arg(long)]
    samples: Option<u64>,
    /// Required for the randomized search.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest number of subsets an exhaustive search may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Debug, Args, Serialize)]
struct RipArgs {
    #[arg(long)]
    frame: PathBuf,
    #[arg(short, long)]
    s: usize,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args, Serialize)]
#[group(multiple = false)]
struct PartitionArgs {
    /// Explicit blocks, e.g. "0,1,2;3,4,5".
    #[arg(long)]
    blocks: Option<String>,
    /// Contiguous blocks of this size.
    #[arg(long)]
    block_size: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct FusionArgs {
    #[arg(long)]
    frame: PathBuf,
    #[command(flatten)]
    partition: PartitionArgs,
    /// RIP report from `framekit rip`; computed exhaustively when absent.
    #[arg(long)]
    rip: Option<PathBuf>,
    /// RIP order when no report is given (default: largest block).
    #[arg(short, long)]
    s: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct AnglesArgs {
    /// Fusion frame file; alternatively give --frame with a partition.
    #[arg(long, conflicts_with_all = ["frame", "rip"])]
    fusion: Option<PathBuf>,
    #[arg(long)]
    frame: Option<PathBuf>,
    #[command(flatten)]
    partition: PartitionArgs,
    /// RIP report from `framekit rip`; computed exhaustively when absent.
    #[arg(long)]
    rip: Option<PathBuf>,
    /// RIP order when no report is given (default: twice the largest block).
    #[arg(short, long)]
    s: Option<usize>,
    /// Isoclinic budget ε checked for a fusion file.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct ReplaceArgs {
    #[arg(long)]
    frame: PathBuf,
    #[command(flatten)]
    partition: PartitionArgs,
    /// Replace the first K₁ blocks.
    #[arg(long, conflicts_with = "replace_blocks")]
    k1: Option<usize>,
    /// Replace these block ids, e.g. "0,3".
    #[arg(long)]
    replace_blocks: Option<String>,
    #[arg(short, long)]
    s: usize,
    /// RIP report of the original frame at order `s`; computed when absent.
    #[arg(long)]
    rip: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the replaced frame here.
    #[arg(long)]
    frame_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// JSON suite config; defaults apply when absent.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Error carrying the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DidNotConverge { .. } => EXIT_NONCONVERGENCE,
            Error::NotTight { .. }
            | Error::NotUnitNorm { .. }
            | Error::BlockTooLarge { .. }
            | Error::RipReportMismatch { .. }
            | Error::NotRieszBasis { .. }
            | Error::EpsilonTooLarge(_)
            | Error::FormulaNegative(_)
            | Error::HypothesisViolated(_)
            | Error::DependentBlock { .. }
            | Error::NotAFusionFrame { .. } => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let threads = match std::env::var("FRAMEKIT_THREADS") {
        Err(_) => None,
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                let _ = writeln!(err, "error: FRAMEKIT_THREADS must be a positive integer, got {v:?}");
                return EXIT_USAGE;
            }
        },
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(&cli, &mut obuf, &mut ebuf));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn tolerances(g: &GlobalArgs) -> CmdResult<Tolerances> {
    let mut t = Tolerances::default();
    for (slot, v, name) in [
        (&mut t.sym, g.tol_sym, "--tol-sym"),
        (&mut t.eigen, g.tol_eigen, "--tol-eigen"),
        (&mut t.rank, g.tol_rank, "--tol-rank"),
        (&mut t.iso, g.tol_iso, "--tol-iso"),
    ] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(usage(format!("{name} must lie in (0, 1), got {v}")));
            }
            *slot = v;
        }
    }
    Ok(t)
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> CmdResult<Vec<u8>> {
        let bytes = fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        self.0.push(InputDigest::of_bytes(path.display().to_string(), &bytes));
        Ok(bytes)
    }

    fn json(&mut self, path: &Path) -> CmdResult<Value> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

#[derive(Serialize)]
struct ResolvedConfig<'a, A: Serialize> {
    tolerances: Tolerances,
    format: Format,
    output: Option<&'a Path>,
    /// `FRAMEKIT_THREADS` as given.
    threads: Option<String>,
    args: &'a A,
}

fn emit(out: &mut dyn Write, g: &GlobalArgs, text: &str) -> CmdResult<()> {
    match &g.output {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

fn emit_report<A: Serialize, R: Serialize + CsvRows>(
    out: &mut dyn Write,
    g: &GlobalArgs,
    tol: Tolerances,
    command: &str,
    args: &A,
    inputs: &Inputs,
    report: &R,
) -> CmdResult<()> {
    let text = match g.format {
        Format::Csv => to_csv(report)?,
        Format::Json => {
            let config = ResolvedConfig {
                tolerances: tol,
                format: g.format,
                output: g.output.as_deref(),
                threads: std::env::var("FRAMEKIT_THREADS").ok(),
                args,
            };
            let env = Envelope::new(command, &config, &inputs.0, report);
            let mut s = serde_json::to_string_pretty(&env).map_err(Error::from)?;
            s.push('\n');
            s
        }
    };
    emit(out, g, &text)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult<i32> {
    let g = &cli.global;
    let tol = tolerances(g)?;
    match &cli.command {
        Command::Generate(a) => generate(a, g, out, err),
        Command::Rip(a) => {
            let mut inputs = Inputs(Vec::new());
            let frame = load_frame(&mut inputs, &a.frame, tol)?;
            let method = method(&a.search)?;
            let report = match &frame {
                AnyFrame::Real(f) => rip_with(f, a.s, method, a.search.budget)?,
                AnyFrame::Complex(f) => rip_with(f, a.s, method, a.search.budget)?,
            };
            emit_report(out, g, tol, "rip", a, &inputs, &report)?;
            Ok(EXIT_PASS)
        }
        Command::Fusion(a) => {
            let mut inputs = Inputs(Vec::new());
            let frame = load_frame(&mut inputs, &a.frame, tol)?;
            let rip = a.rip.as_deref().map(|p| load_rip(&mut inputs, p)).transpose()?;
            let report = match &frame {
                AnyFrame::Real(f) => fusion_with(f, a, rip)?,
                AnyFrame::Complex(f) => fusion_with(f, a, rip)?,
            };
            emit_report(out, g, tol, "fusion", a, &inputs, &report)?;
            Ok(verdict(report.holds, err, "near-tight fusion bracket"))
        }
        Command::Angles(a) => angles(a, g, tol, out, err),
        Command::Replace(a) => {
            let mut inputs = Inputs(Vec::new());
            let frame = load_frame(&mut inputs, &a.frame, tol)?;
            let rip = a.rip.as_deref().map(|p| load_rip(&mut inputs, p)).transpose()?;
            let (report, replaced) = match &frame {
                AnyFrame::Real(f) => replace_with(f, a, rip)?,
                AnyFrame::Complex(f) => replace_with(f, a, rip)?,
            };
            if let Some(p) = &a.frame_out {
                let text = serde_json::to_string(&replaced).map_err(Error::from)? + "\n";
                fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
            }
            emit_report(out, g, tol, "replace", a, &inputs, &report)?;
            if report.bracket_vacuous {
                let _ = writeln!(err, "note: bracket vacuous (theoretical lower bound ≤ 0)");
            }
            Ok(verdict(report.holds != Some(false), err, "replacement bracket"))
        }
        Command::VerifyAll(a) => {
            let mut inputs = Inputs(Vec::new());
            let cfg = match &a.config {
                None => SuiteConfig::default(),
                Some(p) => {
                    let bytes = inputs.read(p)?;
                    if bytes.iter().all(u8::is_ascii_whitespace) {
                        let _ = write!(err, "error: config file {} is empty\n\n{}", p.display(), Cli::command().render_help());
                        return Ok(EXIT_USAGE);
                    }
                    serde_json::from_slice(&bytes).map_err(|e| usage(format!("{}: {e}", p.display())))?
                }
            };
            let report = run_suite(&cfg)?;
            emit_report(out, g, tol, "verify-all", &cfg, &inputs, &report)?;
            for c in &report.clauses {
                let _ = writeln!(err, "{:>2} {:<22} {} ({} checks) {}", c.id, c.name, if c.holds { "PASS" } else { "FAIL" }, c.instances, c.detail);
            }
            if report.passed {
                Ok(EXIT_PASS)
            } else {
                let _ = writeln!(err, "failing clauses: {}", report.failing.join(", "));
                Ok(EXIT_CHECK_FAILED)
            }
        }
    }
}

fn verdict(holds: bool, err: &mut dyn Write, what: &str) -> i32 {
    if holds {
        EXIT_PASS
    } else {
        let _ = writeln!(err, "FAIL: {what}");
        EXIT_CHECK_FAILED
    }
}

fn generate(a: &GenerateArgs, g: &GlobalArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult<i32> {
    let frame: AnyFrame = match a.field {
        FieldArg::Real => generate_as::<f64>(a)?.into(),
        FieldArg::Complex => generate_as::<Complex64>(a)?.into(),
    };
    let text = serde_json::to_string(&frame.to_json()).map_err(Error::from)? + "\n";
    emit(out, g, &text)?;
    let b = match &frame {
        AnyFrame::Real(f) => f.bounds(),
        AnyFrame::Complex(f) => f.bounds(),
    };
    let _ = writeln!(err, "bounds {} {} tight_ratio {}", b.lower, b.upper, b.tight_ratio);
    Ok(EXIT_PASS)
}

fn generate_as<S: Scalar>(a: &GenerateArgs) -> CmdResult<Frame<S>> {
    let count = a.count;
    Ok(match a.kind {
        Kind::Orthonormal => {
            if count.is_some_and(|m| m != a.dim) {
                return Err(usage("orthonormal frames have count = dim"));
            }
            Frame::orthonormal(a.dim)?
        }
        Kind::Harmonic => Frame::harmonic(a.dim, count.ok_or_else(|| usage("harmonic needs --count"))?)?,
        Kind::RandomTight => {
            let m = count.ok_or_else(|| usage("random-tight needs --count"))?;
            let seed = a.seed.ok_or_else(|| usage("random-tight needs --seed"))?;
            match Frame::random_unit_tight(a.dim, m, seed, a.iters, a.tight_tol) {
                Ok(f) => f,
                Err(ConvergenceFailure::Invalid(e)) => return Err(e.into()),
                Err(e) => return Err(Error::from(e).into()),
            }
        }
    })
}

fn load_frame(inputs: &mut Inputs, path: &Path, tol: Tolerances) -> CmdResult<AnyFrame> {
    let v = inputs.json(path)?;
    Ok(any_frame_from_json(&v, tol)?)
}

/// Accepts a bare RIP report or the envelope `framekit rip` writes.
fn load_rip(inputs: &mut Inputs, path: &Path) -> CmdResult<RipReport> {
    let v = inputs.json(path)?;
    let body = match v.get("report") {
        Some(r) if v.get("tool").is_some() => r.clone(),
        _ => v,
    };
    serde_json::from_value(body).map_err(|e| usage(format!("{}: not a RIP report: {e}", path.display())))
}

fn method(a: &SearchArgs) -> CmdResult<RipMethod> {
    match a.method {
        Method::Exhaustive => Ok(RipMethod::Exhaustive),
        Method::Randomized => Ok(RipMethod::Randomized {
            samples: a.samples.ok_or_else(|| usage("randomized search needs --samples"))?,
            seed: a.seed.ok_or_else(|| usage("randomized search needs --seed"))?,
        }),
    }
}

fn rip_with<S: Scalar>(f: &Frame<S>, s: usize, method: RipMethod, budget: u64) -> Result<RipReport> {
    match method {
        RipMethod::Exhaustive => rip_exhaustive(f, s, budget),
        RipMethod::Randomized { samples, seed } => rip_randomized(f, s, samples, seed),
    }
}

fn partition(a: &PartitionArgs, count: usize) -> CmdResult<Partition> {
    match (&a.blocks, a.block_size) {
        (Some(spec), _) => Ok(Partition::parse(spec, count)?),
        (None, Some(k)) => Ok(Partition::contiguous(count, k)?),
        (None, None) => Err(usage("a partition is required: --blocks or --block-size")),
    }
}

fn fusion_with<S: Scalar>(f: &Frame<S>, a: &FusionArgs, rip: Option<RipReport>) -> CmdResult<crate::fusion::NearTightnessReport> {
    let p = partition(&a.partition, f.count())?;
    let rip = match rip {
        Some(r) => r,
        None => rip_exhaustive(f, a.s.unwrap_or(p.max_block_size()), DEFAULT_BUDGET)?,
    };
    Ok(certify_near_tight(f, &p, &rip)?)
}

fn angles(a: &AnglesArgs, g: &GlobalArgs, tol: Tolerances, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult<i32> {
    let mut inputs = Inputs(Vec::new());
    if let Some(path) = &a.fusion {
        let v = inputs.json(path)?;
        let report = match any_fusion_from_json(&v, tol)? {
            AnyFusionFrame::Real(ff) => isoclinic(&ff, a.epsilon, &tol)?,
            AnyFusionFrame::Complex(ff) => isoclinic(&ff, a.epsilon, &tol)?,
        };
        emit_report(out, g, tol, "angles", a, &inputs, &report)?;
        return Ok(verdict(report.holds != Some(false), err, "isoclinic budget"));
    }
    let path = a.frame.as_deref().ok_or_else(|| usage("angles needs --fusion or --frame"))?;
    let frame = load_frame(&mut inputs, path, tol)?;
    let rip = a.rip.as_deref().map(|p| load_rip(&mut inputs, p)).transpose()?;
    let report = match &frame {
        AnyFrame::Real(f) => near_orthogonal_report(f, a, rip)?,
        AnyFrame::Complex(f) => near_orthogonal_report(f, a, rip)?,
    };
    emit_report(out, g, tol, "angles", a, &inputs, &report)?;
    Ok(verdict(report.holds, err, "near-orthogonal fusion frame"))
}

fn isoclinic<S: Scalar>(ff: &FusionFrame<S>, epsilon: Option<f64>, tol: &Tolerances) -> Result<crate::geometry::IsoclinicReport> {
    certify_equi_isoclinic(ff.subspaces(), epsilon, tol)
}

fn near_orthogonal_report<S: Scalar>(f: &Frame<S>, a: &AnglesArgs, rip: Option<RipReport>) -> CmdResult<crate::geometry::NearOrthogonalReport> {
    let p = partition(&a.partition, f.count())?;
    let rip = match rip {
        Some(r) => r,
        None => rip_exhaustive(f, a.s.unwrap_or(2 * p.max_block_size()).min(f.count()), DEFAULT_BUDGET)?,
    };
    Ok(certify_near_orthogonal(f, &p, &rip)?)
}

fn replace_with<S: Scalar>(
    f: &Frame<S>,
    a: &ReplaceArgs,
    rip: Option<RipReport>,
) -> CmdResult<(crate::replacement::ReplacementReport, Value)> {
    let p = partition(&a.partition, f.count())?;
    let ids: Vec<usize> = match (a.k1, &a.replace_blocks) {
        (Some(k), _) => {
            if k > p.len() {
                return Err(Error::UnknownBlock(k - 1).into());
            }
            (0..k).collect()
        }
        (None, Some(spec)) => {
            let parsed: BlockSpec = spec.parse()?;
            parsed.0.into_iter().flatten().collect()
        }
        (None, None) => return Err(usage("replace needs --k1 or --replace-blocks")),
    };
    let rip = match rip {
        Some(r) => r,
        None => rip_exhaustive(f, a.s, a.search.budget)?,
    };
    let rf = replace_blocks(f, &p, &ids)?;
    let report = certify_replacement(&rf, a.s, &rip, method(&a.search)?, a.search.budget)?;
    Ok((report, frame_to_json(&rf.frame)))
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}
