//! `mzv` — multi-index algebra, nested-series evaluation, and identity
//! verification from the command line.
//!
//! Exit codes: 0 success (and, for `verify`, all cases passed); 1 domain
//! error or verification failure; 2 malformed arguments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde_json::json;

use mzv_core::error::Error as CoreError;
use mzv_core::estimate::SumEstimate;
use mzv_core::multiindex::{
    circledast, coarsen_inverse_sum, coarsen_sum, indices_up_to_weight, refine_sum, stuffle,
    MultiIndex,
};
use mzv_core::mzv::{zeta_eval, AdmissibleIndex};
use mzv_core::nested::{g_eval, phi_eval, zeta_alpha_eval, PatternMatrix};
use mzv_core::newton::newton_eval;
use mzv_core::relations::{
    check_duality, check_eq435, check_formula, check_interpolation, check_main_theorem,
    CampaignOpts, CaseReport, Report, Side,
};
use mzv_core::sequences::multi_harmonic;

#[derive(Parser)]
#[command(
    name = "mzv",
    version,
    about = "Multi-index algebra, Newton/nested series, and MZV identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dual multi-index (complement of the subset encoding)
    Dual { mi: String },
    /// Reversed multi-index
    Reverse { mi: String },
    /// Backprime: reversal of the dual
    Backprime { mi: String },
    /// Sum of all refinements (exact combo)
    U { mi: String },
    /// Sum of all coarsenings (exact combo)
    D { mi: String },
    /// Signed coarsening sum inverting `d` (exact combo)
    Dinv { mi: String },
    /// Stuffle (quasi-shuffle) product (exact combo)
    Stuffle { a: String, b: String },
    /// Circled-star product (exact combo)
    Circledast { a: String, b: String },
    /// Exact multiple harmonic sum S_alpha(n)
    Harmonic { mi: String, n: u32 },
    /// Newton series F_alpha(z) truncated to N terms
    Newton {
        mi: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 100_000)]
        terms: u32,
    },
    /// Block-nested series G_alpha(z) truncated at M
    Gseries {
        mi: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1_000_000)]
        trunc: u64,
    },
    /// Multiple zeta value for an admissible multi-index
    Zeta {
        mi: String,
        #[arg(long, default_value_t = 1_000_000)]
        trunc: u64,
    },
    /// Block-patterned zeta: strict within blocks of alpha, weak between
    ZetaAlpha {
        alpha: String,
        mu: String,
        #[arg(long, default_value_t = 1_000_000)]
        trunc: u64,
    },
    /// Pattern-matrix sum Phi_n for a matrix given as JSON
    Phi {
        matrix: PathBuf,
        n: u32,
        #[arg(long, default_value_t = 1_000_000)]
        trunc: u64,
    },
    /// Run an identity-verification campaign
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Campaign {
    Interpolation,
    Theorem,
    Duality,
    Formula,
    Eq435,
}

impl Campaign {
    fn name(self) -> &'static str {
        match self {
            Campaign::Interpolation => "interpolation",
            Campaign::Theorem => "theorem",
            Campaign::Duality => "duality",
            Campaign::Formula => "formula",
            Campaign::Eq435 => "eq435",
        }
    }
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    campaign: Campaign,
    /// Largest multi-index weight to sweep (campaign-specific default)
    #[arg(long)]
    max_weight: Option<u32>,
    /// Newton-series terms (theorem campaign)
    #[arg(long, default_value_t = 100_000)]
    terms: u32,
    /// Truncation bound for nested series
    #[arg(long, default_value_t = 1_000_000)]
    trunc: u64,
    /// Extra per-case cap on |lhs - rhs| on top of the error-window test
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Comma-separated evaluation points, e.g. "1.5,0.5+0.5i" (theorem)
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Worker threads for case evaluation
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Record per-case wall time (breaks bitwise report reproducibility)
    #[arg(long)]
    timing: bool,
}

enum AppError {
    /// Malformed command-line values: exit 2.
    Usage(String),
    /// Valid syntax, invalid domain (pole, non-admissible, ...): exit 1.
    Domain(String),
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        AppError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_multiindex(text: &str) -> Result<MultiIndex, AppError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|rest| rest.strip_suffix(')'))
        .unwrap_or(trimmed)
        .trim();
    if inner.is_empty() {
        return Ok(MultiIndex::empty());
    }
    let mut parts = Vec::new();
    for piece in inner.split(',') {
        let part: u32 = piece.trim().parse().map_err(|_| {
            AppError::Usage(format!("invalid multi-index entry {piece:?} in {text:?}"))
        })?;
        parts.push(part);
    }
    MultiIndex::new(parts)
        .map_err(|e| AppError::Usage(format!("invalid multi-index {text:?}: {e}")))
}

/// Parses `a`, `bi`, or `a+bi` (signs allowed, exponents like `1e-3` too).
fn parse_complex(text: &str) -> Result<Complex64, AppError> {
    let bad = |t: &str| {
        AppError::Usage(format!(
            "invalid complex number {t:?} (expected a, bi, or a+bi)"
        ))
    };
    let t: String = text.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad(text));
    }
    let parse_part = |s: &str, unit_when_empty: bool| -> Result<f64, AppError> {
        match s {
            "" | "+" if unit_when_empty => Ok(1.0),
            "-" if unit_when_empty => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad(text)),
        }
    };
    match t.strip_suffix(['i', 'I']) {
        None => Ok(Complex64::new(parse_part(&t, false)?, 0.0)),
        Some(body) => {
            // Split before the last sign that is not a leading sign and not
            // part of an exponent; everything after it is the imaginary part.
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| {
                    (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
                })
                .unwrap_or(0);
            if split == 0 {
                Ok(Complex64::new(0.0, parse_part(body, true)?))
            } else {
                Ok(Complex64::new(
                    parse_part(&body[..split], false)?,
                    parse_part(&body[split..], true)?,
                ))
            }
        }
    }
}

fn parse_z_list(text: &str) -> Result<Vec<Complex64>, AppError> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        out.push(parse_complex(piece)?);
    }
    if out.is_empty() {
        return Err(AppError::Usage("empty z list".into()));
    }
    Ok(out)
}

fn print_estimate(est: &SumEstimate) {
    if est.value.im == 0.0 {
        println!("value: {}", est.value.re);
    } else {
        println!("value: {}{:+}i", est.value.re, est.value.im);
    }
    println!("err:   {:e}", est.err);
}

fn run(command: Command) -> Result<ExitCode, AppError> {
    match command {
        Command::Dual { mi } => {
            println!("{}", parse_multiindex(&mi)?.dual()?);
        }
        Command::Reverse { mi } => {
            println!("{}", parse_multiindex(&mi)?.reverse());
        }
        Command::Backprime { mi } => {
            println!("{}", parse_multiindex(&mi)?.backprime()?);
        }
        Command::U { mi } => {
            println!("{}", refine_sum(&parse_multiindex(&mi)?)?);
        }
        Command::D { mi } => {
            println!("{}", coarsen_sum(&parse_multiindex(&mi)?)?);
        }
        Command::Dinv { mi } => {
            println!("{}", coarsen_inverse_sum(&parse_multiindex(&mi)?)?);
        }
        Command::Stuffle { a, b } => {
            println!(
                "{}",
                stuffle(&parse_multiindex(&a)?, &parse_multiindex(&b)?)
            );
        }
        Command::Circledast { a, b } => {
            println!(
                "{}",
                circledast(&parse_multiindex(&a)?, &parse_multiindex(&b)?)?
            );
        }
        Command::Harmonic { mi, n } => {
            println!("{}", multi_harmonic(&parse_multiindex(&mi)?, n));
        }
        Command::Newton { mi, z, terms } => {
            let est = newton_eval(&parse_multiindex(&mi)?, parse_complex(&z)?, terms)?;
            print_estimate(&est);
        }
        Command::Gseries { mi, z, trunc } => {
            let est = g_eval(&parse_multiindex(&mi)?, parse_complex(&z)?, trunc)?;
            print_estimate(&est);
        }
        Command::Zeta { mi, trunc } => {
            let mu = AdmissibleIndex::new(parse_multiindex(&mi)?)?;
            print_estimate(&zeta_eval(&mu, trunc)?);
        }
        Command::ZetaAlpha { alpha, mu, trunc } => {
            let est = zeta_alpha_eval(&parse_multiindex(&alpha)?, &parse_multiindex(&mu)?, trunc)?;
            print_estimate(&est);
        }
        Command::Phi { matrix, n, trunc } => {
            let text = std::fs::read_to_string(&matrix)?;
            let pattern = PatternMatrix::from_json(&text)?;
            print_estimate(&phi_eval(&pattern, n, trunc)?);
        }
        Command::Verify(args) => return verify(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode, AppError> {
    let opts = CampaignOpts {
        threads: args.threads.max(1),
        timing: args.timing,
    };
    let zs = match &args.z {
        Some(list) => parse_z_list(list)?,
        None => vec![Complex64::new(1.5, 0.0)],
    };

    let (report, params) = match args.campaign {
        Campaign::Interpolation => {
            let max_weight = args.max_weight.unwrap_or(5);
            let max_n = 6;
            let report = check_interpolation(max_weight, max_n, Some(args.trunc), &opts)?;
            let params = json!({
                "max_weight": max_weight,
                "max_n": max_n,
                "trunc": args.trunc,
            });
            (report, params)
        }
        Campaign::Theorem => {
            let max_weight = args.max_weight.unwrap_or(3);
            let mut cases = Vec::new();
            for alpha in indices_up_to_weight(max_weight) {
                let sub = check_main_theorem(&alpha, &zs, args.terms, args.trunc, &opts)?;
                cases.extend(sub.cases);
            }
            let report = merge(cases);
            let params = json!({
                "max_weight": max_weight,
                "terms": args.terms,
                "trunc": args.trunc,
                "z": zs.iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>(),
            });
            (report, params)
        }
        Campaign::Duality => {
            let max_weight = args.max_weight.unwrap_or(4);
            let report = check_duality(max_weight, args.trunc, &opts)?;
            (
                report,
                json!({"max_weight": max_weight, "trunc": args.trunc}),
            )
        }
        Campaign::Formula => {
            let max_weight = args.max_weight.unwrap_or(3);
            let mut cases = Vec::new();
            for alpha in indices_up_to_weight(max_weight) {
                for k in 1..=3 {
                    let sub = check_formula(&alpha, k, args.trunc, &opts)?;
                    cases.extend(sub.cases);
                }
            }
            let report = merge(cases);
            (
                report,
                json!({"max_weight": max_weight, "k": [1, 2, 3], "trunc": args.trunc}),
            )
        }
        Campaign::Eq435 => {
            let max_weight = args.max_weight.unwrap_or(4);
            let report = check_eq435(max_weight, args.trunc, &opts)?;
            (
                report,
                json!({"max_weight": max_weight, "trunc": args.trunc}),
            )
        }
    };

    // The CLI-level tolerance is a straight cap on |lhs - rhs| applied on
    // top of the library's error-window criterion.
    let mut report = report;
    for case in &mut report.cases {
        case.pass = case.pass && case.abs_diff <= args.tol;
    }
    report.all_pass = report.cases.iter().all(|c| c.pass);

    let mut params = params;
    params["tol"] = json!(args.tol);
    params["threads"] = json!(opts.threads);
    params["timing"] = json!(opts.timing);

    let document = json!({
        "command": format!("verify {}", args.campaign.name()),
        "params": params,
        "cases": report.cases,
        "all_pass": report.all_pass,
    });
    if let Some(path) = &args.json {
        std::fs::write(
            path,
            format!("{}\n", serde_json::to_string_pretty(&document).unwrap()),
        )?;
    }

    for case in &report.cases {
        println!("{}", render_case(case));
    }
    let failed = report.cases.iter().filter(|c| !c.pass).count();
    println!(
        "verify {}: {} cases, {} failed -> {}",
        args.campaign.name(),
        report.cases.len(),
        failed,
        if report.all_pass { "ALL PASS" } else { "FAIL" }
    );
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn merge(cases: Vec<CaseReport>) -> Report {
    let all_pass = cases.iter().all(|c| c.pass);
    Report { cases, all_pass }
}

fn fmt_side(side: &Side) -> String {
    if side.im == 0.0 {
        format!("{:.10}", side.re)
    } else {
        format!("{:.10}{:+.10}i", side.re, side.im)
    }
}

fn render_case(case: &CaseReport) -> String {
    let kind = case.aux.get("kind").and_then(|v| v.as_str()).unwrap_or("-");
    format!(
        "{} {:<10} [{}] lhs={} rhs={} |diff|={:.3e} window={:.3e}",
        if case.pass { "PASS" } else { "FAIL" },
        case.alpha,
        kind,
        fmt_side(&case.lhs),
        fmt_side(&case.rhs),
        case.abs_diff,
        case.lhs.err + case.rhs.err
    )
}
