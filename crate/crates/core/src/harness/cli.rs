use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::{evaluate, q_range, run_sweep, write_csv, write_jsonl, write_violations, write_witness, SweepConfig};
use crate::error::{Error, Result};
use crate::exec::{with_workers, Schedule};
use crate::matfile::read_matrix;
use crate::optimizer::OptimizeConfig;
use crate::verifier::{Check, VerifySuite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qcomm",
    version,
    about = "q-deformed commutator bound: evaluate, verify, sweep"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate f, r, norms and the ratio for a pair of matrix files.
    Eval(EvalArgs),
    /// Estimate sup f/(‖A‖²‖B‖²) over a grid of (n, q) cells.
    Sweep(SweepArgs),
    /// Run the identity and sampling checks.
    Verify(VerifyArgs),
    /// Write an extremal pair and its record.
    Witness(WitnessArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Jsonl,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum QGrid {
    #[default]
    Default,
    Dense,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "a", value_name = "PATH")]
    pub a: PathBuf,
    #[arg(long = "b", value_name = "PATH")]
    pub b: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Matrix dimension; repeat for several.
    #[arg(long = "n", default_values_t = [2usize, 5, 10, 15])]
    pub n: Vec<usize>,
    /// Explicit q values; overrides the range flags.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Vec<f64>,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub q_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub q_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub q_step: f64,
    #[arg(long, default_value_t = OptimizeConfig::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = OptimizeConfig::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long, default_value_t = OptimizeConfig::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, env = "QCOMM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to one check; repeat for several.
    #[arg(long, value_parser = parse_check)]
    pub only: Vec<Check>,
    #[arg(long, value_enum, default_value_t = QGrid::Default)]
    pub q_grid: QGrid,
    /// Random pairs per (n, q) for identity checks.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Samples per q for the n = 2 bound check.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, env = "QCOMM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Shift c(q) by DELTA everywhere; the suite must then fail.
    #[arg(long, value_name = "DELTA", num_args = 0..=1, default_missing_value = "1e-6", allow_hyphen_values = true)]
    pub inject_fault: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Directory for A.txt, B.txt and witness.json.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_check(s: &str) -> std::result::Result<Check, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval(args) => cmd_eval(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out, err),
        Command::Verify(args) => cmd_verify(&args, out, err),
        Command::Witness(args) => cmd_witness(&args, out),
    }
}

fn stdout_err(e: io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn emit<T: Serialize>(records: &[T], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                let line = serde_json::to_string(r).map_err(|e| Error::Serialize(e.to_string()))?;
                writeln!(out, "{line}").map_err(stdout_err)?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r).map_err(|e| Error::Serialize(e.to_string()))?;
            }
            w.flush().map_err(stdout_err)
        }
    }
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let a = read_matrix(&args.a)?;
    let b = read_matrix(&args.b)?;
    let record = evaluate(&a, &b, args.q)?;
    emit(&[record], args.format, out)?;
    Ok(EXIT_PASS)
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let qs = if args.q.is_empty() {
        q_range(args.q_min, args.q_max, args.q_step)?
    } else {
        args.q.clone()
    };
    let cfg = SweepConfig {
        ns: args.n.clone(),
        qs,
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
        workers: args.workers,
        schedule: Schedule::Parallel,
    };
    cfg.validate()?;
    // Fail on an unwritable path before spending time on the sweep.
    let sink: Option<File> = match &args.out {
        Some(path) => Some(File::create(path).map_err(|e| Error::io(path, e))?),
        None => None,
    };

    let outcome = run_sweep(&cfg)?;
    match (sink, &args.out) {
        (Some(file), Some(path)) => {
            let mut w = BufWriter::new(file);
            match args.format {
                Format::Csv => write_csv(&outcome.records, &mut w)?,
                Format::Jsonl => write_jsonl(&outcome.records, &mut w)?,
            }
            w.flush().map_err(|e| Error::io(path, e))?;
        }
        _ => match args.format {
            Format::Csv => write_csv(&outcome.records, &mut *out)?,
            Format::Jsonl => write_jsonl(&outcome.records, &mut *out)?,
        },
    }

    for (n, gap) in outcome.max_abs_gap() {
        let _ = writeln!(err, "n={n}: max |gap| = {gap:.3e}");
    }
    if outcome.violations.is_empty() {
        let _ = writeln!(err, "sweep: {} cells, no violation", outcome.records.len());
        return Ok(EXIT_PASS);
    }
    let dir = violation_dir(args.out.as_deref());
    let paths = write_violations(&dir, &outcome.violations)?;
    for (v, path) in outcome.violations.iter().zip(&paths) {
        let _ = writeln!(
            err,
            "VIOLATION n={} q={}: ratio {:.17} exceeds c(q) = {:.17}; pair written to {}",
            v.record.n,
            v.record.q,
            v.record.best_ratio,
            v.record.c_q,
            path.display()
        );
    }
    Ok(EXIT_FAIL)
}

fn violation_dir(out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => {
            let mut name = p.file_name().map(|s| s.to_os_string()).unwrap_or_default();
            name.push(".violations");
            p.with_file_name(name)
        }
        None => PathBuf::from("qcomm-violations"),
    }
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let suite = VerifySuite {
        trials: args.trials,
        samples: args.samples,
        seed: args.seed,
        dense: args.q_grid == QGrid::Dense,
        c_offset: args.inject_fault,
        schedule: Schedule::Parallel,
    };
    let reports = with_workers(args.workers, || suite.run(&args.only))?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            emit(&reports, args.format, &mut w)?;
            w.flush().map_err(|e| Error::io(path, e))?;
        }
        None => emit(&reports, args.format, out)?,
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    for r in reports.iter().filter(|r| !r.pass) {
        let _ = writeln!(
            err,
            "FAIL {}: max residual {:.3e} > {:.1e} over {} trials",
            r.name, r.max_residual, r.tolerance, r.trials
        );
    }
    let _ = writeln!(err, "verify: {passed}/{} checks passed", reports.len());
    Ok(if passed == reports.len() { EXIT_PASS } else { EXIT_FAIL })
}

pub fn cmd_witness(args: &WitnessArgs, out: &mut dyn Write) -> Result<i32> {
    let (record, files) = write_witness(args.q, args.n, &args.out)?;
    let line = serde_json::to_string(&record).map_err(|e| Error::Serialize(e.to_string()))?;
    writeln!(out, "{line}").map_err(stdout_err)?;
    writeln!(
        out,
        "wrote {} {} {}",
        files.a.display(),
        files.b.display(),
        files.record.display()
    )
    .map_err(stdout_err)?;
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("qcomm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["verify", "--only", "nonsense"]).0, EXIT_USAGE);
        assert_eq!(run(&["sweep", "--q-step", "0"]).0, EXIT_USAGE);
        assert_eq!(run(&["sweep", "--n", "1", "--q", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn negative_q_values_parse() {
        let (code, out, _) = run(&["sweep", "--n", "2", "--q", "-1", "--restarts", "2"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.lines().nth(1).unwrap().starts_with("2,-1.0,"));
    }

    #[test]
    fn violation_dir_naming() {
        assert_eq!(
            violation_dir(Some(Path::new("/tmp/x/sweep.csv"))),
            PathBuf::from("/tmp/x/sweep.csv.violations")
        );
        assert_eq!(violation_dir(None), PathBuf::from("qcomm-violations"));
    }
}
