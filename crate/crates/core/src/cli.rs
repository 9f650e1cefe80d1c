//! Command-line front end. The `su2opt` binary only forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{ControlFrame, FrameError, Regime};
use crate::oracle::{infimum_estimate, OracleConfig};
use crate::solver::{decompose, decompose_auto, right_angle_catalog, SolveError, SolverConfig};
use crate::splitting::{convergence_table, write_csv, SplittingError};
use crate::su2::{haar_random, Quaternion, Su2Error, Su2Vector, UnitQuaternion};
use crate::word::{eval_word, Decomposition, Generator, Letter, Word, WordError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Largest solver/oracle cost gap accepted by `verify`.
pub const VERIFY_TOL: f64 = 1e-5;
/// Allowed deviation of a quaternion target's norm from 1.
pub const TARGET_NORM_TOL: f64 = 1e-6;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid target: {0}")]
    Target(#[from] TargetError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Splitting(#[from] SplittingError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solve(SolveError::NoSolution { .. }) => EXIT_NO_SOLUTION,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TargetError {
    #[error("expected quat:a,b,c,d, axis:x,y,z,theta or word:G:t,..., got {0:?}")]
    Syntax(String),
    #[error("bad number {0:?}")]
    Number(String),
    #[error("quaternion norm {0} is not within 1e-6 of 1")]
    NotUnit(f64),
    #[error("rotation axis is zero")]
    ZeroAxis,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A target element as written on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    /// `quat:a,b,c,d`
    Quaternion(Quaternion),
    /// `axis:x,y,z,θ`, meaning `exp((θ/2)·axis)` for the normalized axis.
    AxisAngle { axis: Su2Vector, angle: f64 },
    /// `word:X:0.3,Y:1.0`, evaluated in the frame.
    Word(Word),
}

fn parse_numbers(s: &str, count: usize, whole: &str) -> Result<Vec<f64>, TargetError> {
    let v = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| TargetError::Number(x.to_string()))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if v.len() != count {
        return Err(TargetError::Syntax(whole.to_string()));
    }
    Ok(v)
}

impl FromStr for TargetSpec {
    type Err = TargetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, body) = s.split_once(':').ok_or_else(|| TargetError::Syntax(s.into()))?;
        match kind {
            "quat" => {
                let v = parse_numbers(body, 4, s)?;
                Ok(TargetSpec::Quaternion(Quaternion::new(v[0], v[1], v[2], v[3])))
            }
            "axis" => {
                let v = parse_numbers(body, 4, s)?;
                Ok(TargetSpec::AxisAngle {
                    axis: Su2Vector::new(v[0], v[1], v[2]),
                    angle: v[3],
                })
            }
            "word" => {
                let letters = body
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| {
                        let (g, t) = p.split_once(':').ok_or_else(|| TargetError::Syntax(s.into()))?;
                        let mut chars = g.trim().chars();
                        let gen = match (chars.next().and_then(Generator::from_symbol), chars.next()) {
                            (Some(gen), None) => gen,
                            _ => return Err(TargetError::Syntax(s.into())),
                        };
                        let time: f64 = t.trim().parse().map_err(|_| TargetError::Number(t.into()))?;
                        if !(time.is_finite() && time >= 0.0) {
                            return Err(WordError::BadTime(time).into());
                        }
                        Ok(Letter::new(gen, time))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(TargetSpec::Word(Word::new(letters)))
            }
            _ => Err(TargetError::Syntax(s.into())),
        }
    }
}

impl TargetSpec {
    /// Applies the `--degrees` conversion to the axis-angle form.
    pub fn with_degrees(self, degrees: bool) -> Self {
        match self {
            TargetSpec::AxisAngle { axis, angle } if degrees => TargetSpec::AxisAngle {
                axis,
                angle: angle.to_radians(),
            },
            other => other,
        }
    }

    pub fn resolve(&self, frame: &ControlFrame) -> Result<UnitQuaternion, TargetError> {
        match self {
            TargetSpec::Quaternion(q) => UnitQuaternion::from_near_unit(*q, TARGET_NORM_TOL).map_err(|e| match e {
                Su2Error::NotUnit { norm } => TargetError::NotUnit(norm),
                _ => TargetError::NotUnit(q.norm()),
            }),
            TargetSpec::AxisAngle { axis, angle } => {
                let unit = axis.normalized().ok_or(TargetError::ZeroAxis)?;
                Ok(UnitQuaternion::exp(unit.scale(0.5 * angle)))
            }
            TargetSpec::Word(w) => Ok(eval_word(w, frame)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub alpha: f64,
    pub kappa: f64,
    pub regime: Regime,
}

/// Versioned JSON form of a [`Decomposition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub schema: u32,
    pub target: Quaternion,
    pub frame: FrameReport,
    pub word: Word,
    pub cost: f64,
    pub residual: f64,
    pub family: String,
}

impl DecompositionReport {
    pub fn new(d: &Decomposition, target: &UnitQuaternion, frame: &ControlFrame) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            target: target.quaternion(),
            frame: FrameReport {
                alpha: frame.alpha(),
                kappa: frame.kappa(),
                regime: frame.regime(),
            },
            word: d.word.clone(),
            cost: d.cost,
            residual: d.residual,
            family: d.family.clone(),
        }
    }

    pub fn decomposition(&self) -> Decomposition {
        Decomposition {
            word: self.word.clone(),
            cost: self.cost,
            residual: self.residual,
            family: self.family.clone(),
            regime: self.frame.regime,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "su2opt", version, about = "Cost-optimal SU(2) decompositions into two controls")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cheapest word equal to a target.
    Decompose(DecomposeArgs),
    /// Compare the solver with the brute-force oracle on random targets.
    Verify(VerifyArgs),
    /// Solve the five right-angle word shapes (alpha = pi/2, kappa = 1).
    Catalog(CatalogArgs),
    /// Convergence of the Lie-Trotter and Strang products.
    Splitting(SplittingArgs),
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    /// Angle between the controls, in radians unless --degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Cost factor of Y, in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: f64,
    /// Read alpha and axis-angle targets in degrees.
    #[arg(long)]
    pub degrees: bool,
}

impl FrameArgs {
    fn frame(&self) -> Result<ControlFrame, FrameError> {
        let alpha = if self.degrees { self.alpha.to_radians() } else { self.alpha };
        ControlFrame::new(alpha, self.kappa)
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// quat:a,b,c,d | axis:x,y,z,theta | word:X:t,Y:t,...
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[command(flatten)]
    pub frame: FrameArgs,
    /// Longest word considered; derived from the first feasible cost if omitted.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub json: bool,
    /// Residual tolerance of the solver.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Fail on discrepancies in the KAPPA_LT and KAPPA_EQ regimes too.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SplittingArgs {
    /// First exponent as x,y,z.
    #[arg(long, allow_hyphen_values = true, default_value = "0.7853981633974483,0,0")]
    pub a: String,
    /// Second exponent as x,y,z.
    #[arg(long, allow_hyphen_values = true, default_value = "0,0.7853981633974483,0")]
    pub b: String,
    /// Increasing step counts.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256")]
    pub ns: Vec<usize>,
    /// Also write the table to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_vector(s: &str) -> Result<Su2Vector, CliError> {
    let v = parse_numbers(s, 3, s).map_err(|_| CliError::Usage(format!("expected x,y,z, got {s:?}")))?;
    Ok(Su2Vector::new(v[0], v[1], v[2]))
}

fn parse_target(s: &str, degrees: bool) -> Result<TargetSpec, CliError> {
    Ok(s.parse::<TargetSpec>()?.with_degrees(degrees))
}

fn print_decomposition(out: &mut dyn Write, d: &Decomposition) -> std::io::Result<()> {
    let word = if d.word.is_empty() { "(empty)".to_string() } else { d.word.to_string() };
    writeln!(out, "word     {word}")?;
    writeln!(out, "cost     {:.12}", d.cost)?;
    writeln!(out, "residual {:.3e}", d.residual)?;
    writeln!(out, "regime   {}", d.regime)?;
    writeln!(out, "family   {}", d.family)
}

pub fn cmd_decompose(args: &DecomposeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let frame = args.frame.frame()?;
    let target = parse_target(&args.target, args.frame.degrees)?.resolve(&frame)?;
    let mut cfg = SolverConfig::default();
    if let Some(tol) = args.tol {
        cfg.newton_tol = tol;
    }
    let d = match args.max_len {
        Some(n) => decompose(&target, &frame, &cfg, n)?,
        None => decompose_auto(&target, &frame, &cfg)?,
    };
    if args.json {
        let report = DecompositionReport::new(&d, &target, &frame);
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        print_decomposition(out, &d)?;
    }
    Ok(EXIT_OK)
}

/// Largest `|t_x - π/2|` over middle `X` letters of a word.
fn middle_x_deviation(w: &Word) -> Option<f64> {
    let n = w.len();
    if n < 3 {
        return None;
    }
    w.letters[1..n - 1]
        .iter()
        .filter(|l| l.gen == Generator::X)
        .map(|l| (l.time - std::f64::consts::FRAC_PI_2).abs())
        .reduce(f64::max)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let frame = args.frame.frame()?;
    if args.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let regime = frame.regime();
    let asserting = args.strict || matches!(regime, Regime::KappaGt | Regime::FreeY);
    let solver_cfg = SolverConfig::default();
    let oracle_cfg = OracleConfig {
        seed: args.seed,
        ..OracleConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst = 0.0_f64;
    let mut failures = 0usize;
    let mut eq_dev: Option<f64> = None;
    writeln!(out, "regime {regime}, {} trials, oracle max_n {}", args.trials, args.max_n)?;
    for trial in 0..args.trials {
        let g = haar_random(&mut rng);
        let d = match decompose_auto(&g, &frame, &solver_cfg) {
            Ok(d) => d,
            Err(e) => {
                writeln!(out, "trial {trial}: solver failed ({e}) for target {g}")?;
                failures += 1;
                continue;
            }
        };
        let o = match infimum_estimate(&g, &frame, args.max_n, &oracle_cfg) {
            Ok(o) => o,
            Err(e) => {
                writeln!(out, "trial {trial}: oracle found nothing ({e}); solver cost {:.9}", d.cost)?;
                continue;
            }
        };
        let gap = d.cost - o.cost;
        worst = worst.max(gap.abs());
        if regime == Regime::KappaEq {
            for dev in [middle_x_deviation(&d.word), middle_x_deviation(&o.word)].into_iter().flatten() {
                eq_dev = Some(eq_dev.map_or(dev, |m: f64| m.max(dev)));
            }
        }
        if gap > VERIFY_TOL {
            failures += 1;
            writeln!(
                out,
                "trial {trial}: target {g}: solver {:.9} {} vs oracle {:.9} {}",
                d.cost, d.word, o.cost, o.word
            )?;
        }
    }
    writeln!(out, "max |solver - oracle| = {worst:.3e}")?;
    if let Some(dev) = eq_dev {
        writeln!(out, "max middle t_x deviation from pi/2 = {dev:.3e}")?;
    }
    if failures > 0 {
        if asserting {
            writeln!(out, "FAIL: {failures} trial(s) where the solver exceeds the oracle")?;
            return Ok(EXIT_VERIFY_FAILED);
        }
        writeln!(out, "note: {failures} discrepancies reported (pass --strict to fail)")?;
    }
    writeln!(out, "OK")?;
    Ok(EXIT_OK)
}

pub fn cmd_catalog(args: &CatalogArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let frame = ControlFrame::new(std::f64::consts::FRAC_PI_2, 1.0)?;
    let target = parse_target(&args.target, args.degrees)?.resolve(&frame)?;
    let all = right_angle_catalog(&target, &SolverConfig::default())?;
    if all.is_empty() {
        return Err(SolveError::NoSolution { tol: SolverConfig::default().newton_tol }.into());
    }
    if args.json {
        let reports: Vec<_> = all.iter().map(|d| DecompositionReport::new(d, &target, &frame)).collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
    } else {
        for d in &all {
            let word = if d.word.is_empty() { "(empty)".to_string() } else { d.word.to_string() };
            writeln!(out, "{:<14} {:>16.12}  {word}", d.family, d.cost)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_splitting(args: &SplittingArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let a = parse_vector(&args.a)?;
    let b = parse_vector(&args.b)?;
    let table = convergence_table(a, b, &args.ns)?;
    writeln!(out, "{:>6} {:>14} {:>14}", "N", "trotter_err", "strang_err")?;
    for r in &table.rows {
        writeln!(out, "{:>6} {:>14.6e} {:>14.6e}", r.n, r.trotter_err, r.strang_err)?;
    }
    writeln!(out, "order  trotter {}  strang {}", table.trotter_order, table.strang_order)?;
    if let Some(path) = &args.csv {
        write_csv(&table, std::fs::File::create(path)?)?;
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Catalog(a) => cmd_catalog(a, out),
        Command::Splitting(a) => cmd_splitting(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
