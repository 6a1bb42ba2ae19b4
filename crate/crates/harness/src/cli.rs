//! `cmean` subcommands: `compute`, `verify`, `fuzz` and `selftest`.
//!
//! Exit codes: 0 when everything passed, 1 when a property was violated,
//! 2 for usage, input or I/O errors.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use contraharmonic::inequalities::{
    check_bounds_remark, check_congruence, check_contraction, check_convexity_mix, check_functional,
    check_homogeneity_and_embedding, check_mixed_mean, check_norm_lower_bound, check_refined_upper, check_symmetry,
    lambda_lower_bound, PositiveFunctional,
};
use contraharmonic::io::{matrix_to_json, read_matrix, write_matrix};
use contraharmonic::means::{
    check_product_identity, check_square_identity, contraharmonic_mean, gap_identity, objective, operator_mean,
    witness_pair, Decomposition,
};
use contraharmonic::order::compare_equal;
use contraharmonic::{loewner_leq, ComplexMatrix, HermitianPD, MeanKind, PropertyId, Weight};

use crate::campaign::{fuzz_campaign, CampaignConfig, CampaignResult, DEFAULT_COND_CAP, DEFAULT_DECOMPOSITIONS};
use crate::report::{write_report, ReportFormat};
use crate::selftest::run_selftest;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cmean", version, about = "Weighted contraharmonic mean of positive-definite matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a weighted mean of two matrices.
    Compute(ComputeArgs),
    /// Evaluate properties on the given matrices and print their margins.
    Verify(VerifyArgs),
    /// Run a randomized campaign over all properties.
    Fuzz(FuzzArgs),
    /// Cross-check scalar closed forms against grid-search maxima.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, default_value = "contraharmonic")]
    pub mean: MeanKind,
    #[arg(long)]
    pub nu: f64,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check every property (the default when no --property is given).
    #[arg(long)]
    pub all: bool,
    #[arg(long = "property")]
    pub properties: Vec<PropertyId>,
    #[arg(long)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
    /// Defaults to nu.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub c: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<PathBuf>,
    /// Congruence factor.
    #[arg(long)]
    pub z: Option<PathBuf>,
    /// Scale factor for the homogeneity check.
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = contraharmonic::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    /// Inclusive dimension range, `lo..hi` or a single dimension.
    #[arg(long, default_value = "1..8", value_parser = parse_dims)]
    pub dims: RangeInclusive<usize>,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: ReportFormat,
    /// Defaults to 1e-9, or 1e-6 with --nu-extreme.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Draw weights from [1e-3, 1 - 1e-3] instead of [0.05, 0.95].
    #[arg(long)]
    pub nu_extreme: bool,
    #[arg(long, default_value_t = DEFAULT_COND_CAP)]
    pub cond_cap: f64,
    /// Restrict the campaign to these properties.
    #[arg(long = "property")]
    pub properties: Vec<PropertyId>,
    #[arg(long, default_value_t = DEFAULT_DECOMPOSITIONS)]
    pub decompositions: usize,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| usize::from_str(t.trim()).map_err(|e| format!("invalid dimension '{t}': {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok(parse(lo)?..=parse(hi)?)
        }
        None => {
            let d = parse(s)?;
            Ok(d..=d)
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Compute(args) => compute(&args),
        Command::Verify(args) => verify(&args),
        Command::Fuzz(args) => fuzz(&args),
        Command::Selftest(args) => selftest(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

type CliResult = Result<i32, String>;

fn load_matrix(path: &Path) -> Result<ComplexMatrix, String> {
    read_matrix(path)
        .map_err(|e| format!("{}: {e}", path.display()))?
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_pd(path: &Path) -> Result<HermitianPD, String> {
    HermitianPD::new(load_matrix(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn weight(name: &str, v: f64) -> Result<Weight, String> {
    Weight::new(v).map_err(|e| format!("--{name}: {e}"))
}

fn compute(args: &ComputeArgs) -> CliResult {
    let nu = weight("nu", args.nu)?;
    let a = load_pd(&args.a)?;
    let b = load_pd(&args.b)?;
    let m = operator_mean(args.mean, nu, &a, &b).map_err(|e| e.to_string())?;
    match &args.out {
        Some(path) => write_matrix(path, m.matrix()).map_err(|e| format!("{}: {e}", path.display()))?,
        None => println!("{}", matrix_to_json(m.matrix())),
    }
    Ok(EXIT_PASS)
}

struct VerifyInputs {
    nu: Weight,
    mu: Weight,
    lambda: f64,
    a: HermitianPD,
    b: HermitianPD,
    c: Option<HermitianPD>,
    d: Option<HermitianPD>,
    z: Option<ComplexMatrix>,
    r: f64,
    alpha: f64,
    beta: f64,
    tol: f64,
}

/// Deterministic decompositions `x = s e` used by `verify` for the
/// variational checks, alongside the witness.
const VERIFY_GRID: [f64; 7] = [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5];

fn verify(args: &VerifyArgs) -> CliResult {
    if !(args.tol > 0.0) {
        return Err(format!("--tol must be positive (got {})", args.tol));
    }
    let inputs = VerifyInputs {
        nu: weight("nu", args.nu)?,
        mu: weight("mu", args.mu)?,
        lambda: args.lambda.unwrap_or(args.nu),
        a: load_pd(&args.a)?,
        b: load_pd(&args.b)?,
        c: args.c.as_deref().map(load_pd).transpose()?,
        d: args.d.as_deref().map(load_pd).transpose()?,
        z: args.z.as_deref().map(load_matrix).transpose()?,
        r: args.r,
        alpha: args.alpha,
        beta: args.beta,
        tol: args.tol,
    };
    inputs.a.check_same_dim(&inputs.b).map_err(|e| e.to_string())?;
    let properties = if args.properties.is_empty() || args.all {
        PropertyId::all()
    } else {
        args.properties.clone()
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut violated = false;
    for p in properties {
        match verify_one(p, &inputs) {
            Ok(Some(margin)) => {
                let pass = margin >= -inputs.tol;
                violated |= !pass;
                let _ = writeln!(out, "{:<16} {:>+.6e} {}", p.name(), margin, if pass { "PASS" } else { "FAIL" });
            }
            Ok(None) => {
                let _ = writeln!(out, "{:<16} {:>13} SKIP (missing input)", p.name(), "-");
            }
            Err(e) => return Err(format!("{}: {e}", p.name())),
        }
    }
    Ok(if violated { EXIT_VIOLATION } else { EXIT_PASS })
}

fn verify_one(p: PropertyId, i: &VerifyInputs) -> contraharmonic::Result<Option<f64>> {
    let (nu, a, b, tol) = (i.nu, &i.a, &i.b, i.tol);
    let margin = match p {
        PropertyId::Symmetry => check_symmetry(nu, a, b, tol)?.margin(),
        PropertyId::Homogeneity => check_homogeneity_and_embedding(nu, a, b, i.r, i.alpha, i.beta, tol)?
            .homogeneity
            .margin(),
        PropertyId::ScalarEmbed => check_homogeneity_and_embedding(nu, a, b, i.r, i.alpha, i.beta, tol)?
            .embedding
            .margin(),
        PropertyId::BoundsRemark => {
            let r = check_bounds_remark(nu, a, b, tol)?;
            r.lower.margin.min(r.upper.margin)
        }
        PropertyId::ConvexityMix => match (&i.c, &i.d) {
            (Some(c), Some(d)) => check_convexity_mix(nu, i.mu, a, b, c, d, tol)?.margin,
            _ => return Ok(None),
        },
        PropertyId::Congruence => match &i.z {
            Some(z) => check_congruence(nu, a, b, z, tol)?.margin(),
            None => return Ok(None),
        },
        PropertyId::MixedMean => check_mixed_mean(nu, i.mu, a, b, tol)?.margin,
        PropertyId::Functional => check_functional(nu, a, b, &PositiveFunctional::trace(a.n()), tol)?.margin,
        PropertyId::NormLower => check_norm_lower_bound(nu, a, b, tol)?.margin,
        PropertyId::LambdaFamily => lambda_lower_bound(nu, i.lambda, a, b, tol)?.1.margin,
        PropertyId::Contraction => check_contraction(nu, a, b, tol)?.margin,
        PropertyId::RefinedUpper => check_refined_upper(nu, a, b, tol)?.margin,
        PropertyId::Variational => {
            let c = contraharmonic_mean(nu, a, b)?;
            let mut margin = f64::INFINITY;
            for d in verify_decompositions(i)? {
                margin = margin.min(loewner_leq(&objective(nu, a, b, &d)?, c.matrix(), tol)?.margin);
            }
            margin
        }
        PropertyId::Attainment => {
            let c = contraharmonic_mean(nu, a, b)?;
            let d: Decomposition = witness_pair(nu, a, b)?.into();
            compare_equal(&objective(nu, a, b, &d)?, c.matrix(), tol)?.margin()
        }
        PropertyId::GapIdentity => {
            let mut margin = f64::INFINITY;
            for d in verify_decompositions(i)? {
                margin = margin.min(gap_identity(nu, a, b, &d)?.report(tol).margin());
            }
            margin
        }
        PropertyId::ProductIdentity => check_product_identity(nu, a, b, tol)?.margin(),
        PropertyId::SquareIdentity => check_square_identity(nu, a, b, tol)?.margin(),
    };
    Ok(Some(margin))
}

fn verify_decompositions(i: &VerifyInputs) -> contraharmonic::Result<Vec<Decomposition>> {
    let n = i.a.n();
    let mut out: Vec<Decomposition> = VERIFY_GRID
        .iter()
        .map(|&s| Decomposition::from_x(ComplexMatrix::scalar(n, s)))
        .collect();
    out.push(witness_pair(i.nu, &i.a, &i.b)?.into());
    Ok(out)
}

fn fuzz(args: &FuzzArgs) -> CliResult {
    let mut config = CampaignConfig {
        dims: args.dims.clone(),
        trials: args.trials,
        seed: args.seed,
        cond_cap: args.cond_cap,
        decompositions: args.decompositions,
        ..CampaignConfig::default()
    };
    if args.nu_extreme {
        config = config.with_extreme_weights();
    }
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    if !args.properties.is_empty() {
        config.properties = args.properties.clone();
    }
    let result = fuzz_campaign(&config).map_err(|e| e.to_string())?;
    if let Some(path) = &args.report {
        write_report(&result, args.format, path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    print_summary(&result);
    Ok(if result.all_passed() { EXIT_PASS } else { EXIT_VIOLATION })
}

fn print_summary(result: &CampaignResult) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>8} {:>14}", "property", "trials", "passed", "failed", "min margin");
    for p in &result.summary.properties {
        let min = p.min_margin.map_or_else(|| "-".to_string(), |m| format!("{m:+.6e}"));
        let _ = writeln!(
            out,
            "{:<16} {:>8} {:>8} {:>8} {:>14}",
            p.property.name(),
            p.trials,
            p.passed,
            p.failed,
            min
        );
    }
    let s = &result.summary;
    let _ = writeln!(out, "total: {} trials, {} passed, {} failed", s.trials, s.passed, s.failed);
}

fn selftest(args: &SelftestArgs) -> CliResult {
    let checks = run_selftest(args.pairs, args.seed);
    let mut failed = false;
    for c in &checks {
        failed |= !c.pass();
        println!(
            "{} {:<58} deviation {:.3e} (tol {:.0e})",
            if c.pass() { "PASS" } else { "FAIL" },
            c.name,
            c.deviation,
            c.tol
        );
    }
    Ok(if failed { EXIT_VIOLATION } else { EXIT_PASS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("1..8").unwrap(), 1..=8);
        assert_eq!(parse_dims("2..=4").unwrap(), 2..=4);
        assert_eq!(parse_dims("3").unwrap(), 3..=3);
        assert!(parse_dims("a..4").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["cmean"]), EXIT_USAGE);
        assert_eq!(run(["cmean", "fuzz", "--dims", "x"]), EXIT_USAGE);
        assert_eq!(run(["cmean", "compute", "--nu", "0.5"]), EXIT_USAGE);
    }

    #[test]
    fn invalid_campaign_exits_2() {
        assert_eq!(run(["cmean", "fuzz", "--dims", "0..2", "--trials", "1"]), EXIT_USAGE);
    }
}
