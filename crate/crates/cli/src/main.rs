use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use staircase::knots::KnotExpr;
use staircase_cli::parse::{parse_expr, ParseError};
use staircase_cli::query::{self, Answer};
use staircase_cli::verify::{self, Grid, CHECKS};
use staircase_cli::{Status, USAGE};

/// Staircase complexes, epsilon and the ordering of knot classes.
#[derive(Parser)]
#[command(name = "staircase", version)]
struct Cli {
    /// Print a canonical JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized grids.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alexander polynomial.
    Alex { expr: String },
    /// Reduced representative of the class.
    Steps { expr: String },
    Tau { expr: String },
    Epsilon { expr: String },
    /// epsilon, a1 and a2 of the class.
    A12 { expr: String },
    /// Order of two classes.
    Compare { a: String, b: String },
    /// Archimedean comparison of two classes.
    Arch {
        a: String,
        b: String,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
    },
    /// Serialized complex: the tensor product of the factors.
    Dump {
        expr: String,
        /// Dump the reduced representative instead.
        #[arg(long)]
        reduced: bool,
    },
    /// Run a verification check over a parameter grid.
    Verify {
        check: String,
        #[arg(long)]
        p_max: Option<i64>,
        #[arg(long)]
        m_max: Option<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<i64>>,
        #[arg(long)]
        max_entry: Option<i64>,
        #[arg(long)]
        i_max: Option<i64>,
        /// Inclusive range such as -1..1.
        #[arg(long, allow_hyphen_values = true)]
        j_range: Option<String>,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        cases: Option<usize>,
        /// Include wall time in the JSON report.
        #[arg(long)]
        timing: bool,
    },
}

/// Input errors that map to the usage exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn expr(text: &str) -> Result<KnotExpr> {
    parse_expr(text).map_err(|e: ParseError| {
        let caret = format!("{}^", " ".repeat(e.offset()));
        Usage(format!("{e}\n  {text}\n  {caret}")).into()
    })
}

fn j_range(text: &str) -> Result<(i64, i64)> {
    let bad = || Usage(format!("bad --j-range '{text}', expected LO..HI"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let (lo, hi) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad().into());
    }
    Ok((lo, hi))
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("STAIRCASE_THREADS") {
        let n: usize = v.parse().map_err(|_| Usage(format!("STAIRCASE_THREADS must be a number, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

/// Writes a line to stdout; a closed pipe is not an error.
fn out(text: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(answer: Answer, json: bool) -> Result<Status> {
    if json {
        out(&serde_json::to_string_pretty(&answer.json)?)?;
    } else {
        out(&answer.text)?;
    }
    Ok(answer.status)
}

fn run(cli: Cli) -> Result<Status> {
    configure_threads()?;
    let json = cli.json;
    let answer = match cli.command {
        Command::Alex { expr: e } => query::alex(&expr(&e)?)?,
        Command::Steps { expr: e } => query::steps(&expr(&e)?)?,
        Command::Tau { expr: e } => query::tau(&expr(&e)?)?,
        Command::Epsilon { expr: e } => query::epsilon(&expr(&e)?)?,
        Command::A12 { expr: e } => query::a12(&expr(&e)?)?,
        Command::Compare { a, b } => query::compare(&expr(&a)?, &expr(&b)?)?,
        Command::Arch { a, b, max_n } => query::arch(&expr(&a)?, &expr(&b)?, max_n)?,
        Command::Dump { expr: e, reduced } => query::dump(&expr(&e)?, reduced)?,
        Command::Verify { check, p_max, m_max, a, b, max_entry, i_max, j_range: jr, max_n, cases, timing } => {
            let grid = Grid {
                p_max,
                m_max,
                a,
                b,
                max_entry,
                i_max,
                j_range: jr.as_deref().map(j_range).transpose()?,
                max_n,
                cases,
                seed: cli.seed,
            };
            let Some(mut report) = verify::run(&check, &grid) else {
                bail!(Usage(format!("unknown check '{check}'; expected one of {}", CHECKS.join(", "))));
            };
            if timing {
                report.wall_ms = Some(report.elapsed_ms);
            }
            if json {
                out(&serde_json::to_string_pretty(&report)?)?;
            } else {
                out(&report.text())?;
            }
            return Ok(report.status());
        }
    };
    emit(answer, json)
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.downcast_ref::<Usage>().is_some()
        || matches!(
            e.downcast_ref::<staircase::Error>(),
            Some(staircase::Error::InvalidKnot(_) | staircase::Error::Pattern { .. })
        )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { USAGE as u8 } else { Status::Fail.code() as u8 })
        }
    }
}
