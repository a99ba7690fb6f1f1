//! Command-line driver for two-level fingerprinting codes.
//!
//! Exit codes: 0 when a property holds or a reproduction matches, 1 when it
//! fails or differs, 2 on any error.

pub mod format;
pub mod repro;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use twolevel_core::{
    construct_two_level, gen_polynomial_fp_code, gen_random_code, Limits, PickMode, PrimeField, Property, Verifier,
    Witness,
};

use crate::format::CodeFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Core(#[from] twolevel_core::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "twolevel",
    version,
    about = "Generate, construct and verify two-level fingerprinting codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a new code file.
    #[command(subcommand)]
    Generate(Generate),
    /// Build a grouped code with disjoint first symbols per group.
    Construct(ConstructArgs),
    /// Decide FP, SFP, IPP or TA for a code or grouped code.
    Verify(VerifyArgs),
    /// Rerun a reference scenario and compare it with its stored result.
    Repro {
        example: repro::Example,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Evaluations of all polynomials of degree below ⌈len/t⌉ over GF(q).
    Poly {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        t: usize,
        /// Comma-separated evaluation points, default 0..len.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<u32>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distinct uniformly random words.
    Random {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Det,
    Random,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub groups: usize,
    /// Seed for random picks; implies `--mode random`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Grouped code destination; the report goes next to it.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub prop: Property,
    #[arg(long)]
    pub t: usize,
    /// Group-level threshold; needs a grouped file.
    #[arg(long = "T")]
    pub big_t: Option<usize>,
    /// Enumeration ceiling. Lifts the default size, length and threshold caps.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Worker threads, default all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Number of witnesses to report on failure, 0 for all.
    #[arg(long, default_value_t = 1)]
    pub witnesses: usize,
}

/// Parsed command plus output sink, so tests can capture what gets printed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate(g) => generate(g, out),
        Command::Construct(a) => construct(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Repro { example, format } => repro_cmd(example, format, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn generate(cmd: Generate, out: &mut dyn Write) -> Result<ExitCode, CliError> {
    let (code, dest) = match cmd {
        Generate::Poly { q, len, t, points, out } => (
            gen_polynomial_fp_code(PrimeField::new(q)?, len, t, points.as_deref())?,
            out,
        ),
        Generate::Random { q, len, n, seed, out } => (gen_random_code(q, len, n, seed)?, out),
    };
    let text = format::render_code(&code);
    match dest {
        Some(path) => {
            format::write(&path, &text)?;
            emit(out, &format!("wrote {} codewords to {}\n", code.len(), path.display()))?;
        }
        None => emit(out, &text)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn report_path(out: &Path, format: OutputFormat) -> PathBuf {
    let ext = match format {
        OutputFormat::Text => "report.txt",
        OutputFormat::Json => "report.json",
    };
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

fn render_report(report: &twolevel_core::ConstructionReport, format: OutputFormat) -> Result<String, CliError> {
    Ok(match format {
        OutputFormat::Text => report.to_string(),
        OutputFormat::Json => serde_json::to_string_pretty(report)? + "\n",
    })
}

fn construct(args: ConstructArgs, out: &mut dyn Write) -> Result<ExitCode, CliError> {
    let mode = match (args.mode, args.seed) {
        (Some(Mode::Det), Some(_)) => return Err(CliError::Usage("--seed needs --mode random".into())),
        (Some(Mode::Det), None) | (None, None) => PickMode::Deterministic,
        (Some(Mode::Random), seed) | (None, seed @ Some(_)) => PickMode::Seeded(seed.unwrap_or(0)),
    };
    let code = format::read(&args.input)?;
    let report_file = report_path(&args.out, args.format);
    let built = match construct_two_level(code.base(), args.groups, &mode) {
        Ok(b) => b,
        Err(twolevel_core::Error::Infeasible { reason, report }) => {
            format::write(&report_file, &render_report(&report, args.format)?)?;
            return Err(CliError::Core(twolevel_core::Error::Infeasible { reason, report }));
        }
        Err(e) => return Err(e.into()),
    };
    format::write(&args.out, &format::render_grouped(&built.code))?;
    format::write(&report_file, &render_report(&built.report, args.format)?)?;
    emit(
        out,
        &format!(
            "wrote {} groups of {} to {} ({} of {} codewords eliminated); report in {}\n",
            built.code.group_count(),
            built.code.group_size(),
            args.out.display(),
            built.report.eliminated_count,
            code.base().len(),
            report_file.display()
        ),
    )?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    property: String,
    t: usize,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    big_t: Option<usize>,
    holds: bool,
    witnesses: &'a [Witness],
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<ExitCode, CliError> {
    let file = format::read(&args.input)?;
    let limits = args.budget.map_or_else(Limits::default, Limits::relaxed);
    let verifier = Verifier::new(limits);
    let limit = if args.witnesses == 0 {
        usize::MAX
    } else {
        args.witnesses
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", args.jobs.unwrap_or(0))))?;
    let witnesses = pool.install(|| match (&file, args.big_t) {
        (CodeFile::Grouped(two), Some(big_t)) => verifier.two_level_violations(two, args.prop, big_t, args.t, limit),
        (CodeFile::Plain(_), Some(_)) => Err(twolevel_core::Error::Parameter(
            "--T needs a grouped code file (header `q len g p`)".into(),
        )),
        (file, None) => verifier.violations(file.base(), args.prop, args.t, limit),
    })?;

    let holds = witnesses.is_empty();
    let text = match args.format {
        OutputFormat::Json => {
            let report = VerifyReport {
                property: args.prop.to_string(),
                t: args.t,
                big_t: args.big_t,
                holds,
                witnesses: &witnesses,
            };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        OutputFormat::Text => {
            let what = match args.big_t {
                Some(big_t) => format!("({big_t},{})-{}", args.t, args.prop),
                None => format!("{}-{}", args.t, args.prop),
            };
            if holds {
                format!("{what}: holds\n")
            } else {
                let clause = match witnesses[0].clause() {
                    twolevel_core::Clause::Codeword => "codeword level",
                    twolevel_core::Clause::Group => "group level",
                };
                let mut s = format!("{what}: fails ({clause})\n");
                for w in &witnesses {
                    s.push_str(&format!("  {w}\n"));
                }
                s
            }
        }
    };
    emit(out, &text)?;
    Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn repro_cmd(example: repro::Example, format: OutputFormat, out: &mut dyn Write) -> Result<ExitCode, CliError> {
    let outcome = repro::run(example)?;
    let text = match format {
        OutputFormat::Json => {
            let v = serde_json::json!({
                "matches": outcome.matches(),
                "computed": outcome.computed,
                "mismatches": outcome.mismatches,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        OutputFormat::Text => {
            let mut s = outcome.text.clone();
            if outcome.matches() {
                s.push_str("matches the stored result\n");
            } else {
                s.push_str("differs from the stored result:\n");
                for m in &outcome.mismatches {
                    s.push_str(&format!(
                        "  {}: expected {}, computed {}\n",
                        m.path, m.expected, m.computed
                    ));
                }
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(if outcome.matches() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
