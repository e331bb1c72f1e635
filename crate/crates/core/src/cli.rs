//! Command-line front end: tables of the exact and limiting tails, the
//! verification suite, samplers, and the limit law on a grid.
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 for
//! usage errors (including parameters the library rejects).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::asymptotics::{limit_density_p1, limit_density_p2, theorem_range_max, LimitLaw};
use crate::error::Error;
use crate::model::{build_log_weight_table, exact_tail_critical, ModelParams};
use crate::sampling::{SamplerState, RNG_ALGORITHM};
use crate::verification::{linspace, run_all, run_check, SuiteOptions, VerificationReport};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "curie-weiss",
    version,
    about = "Curie-Weiss magnetization: exact law, limit law and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact critical tail against the limit law on an x grid.
    ExactTail(ExactTailArgs),
    /// Run verification checks and emit a report bundle.
    Verify(VerifyArgs),
    /// Draw S_n exactly, or run Glauber dynamics.
    Sample(SampleArgs),
    /// F, G, p1 and p2 on an x grid.
    LimitLaw(LimitLawArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactTailArgs {
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    /// Grid as MIN MAX COUNT, both ends included. Defaults to 0, n^(1/12), 20.
    #[arg(long, num_args = 3, value_names = ["MIN", "MAX", "COUNT"], allow_negative_numbers = true)]
    pub x: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("selection").required(true).args(["check", "all"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long)]
    pub all: bool,
    /// Replace the default n list of the selected checks.
    #[arg(long, num_args = 1.., value_parser = parse_count)]
    pub n: Vec<u64>,
    /// Replace the default x list of the selected checks.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_count, default_value = "50")]
    pub n: u64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use heat-bath dynamics and print the empirical pmf.
    #[arg(long)]
    pub glauber: bool,
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    pub sweeps: u64,
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    pub burn_in: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimitLawArgs {
    /// Grid as MIN MAX COUNT, both ends included.
    #[arg(long, num_args = 3, value_names = ["MIN", "MAX", "COUNT"], allow_negative_numbers = true,
          default_values_t = [-3.0, 3.0, 61.0])]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Non-negative integer, accepting scientific notation such as `1e4`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(v >= 0.0) || v.fract() != 0.0 || v > 2f64.powi(53) {
        return Err(format!("'{s}' is not a non-negative integer"));
    }
    Ok(v as u64)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("json error: {e}"))
    }
}

/// Inclusive grid from `[min, max, count]`.
pub fn parse_grid(spec: &[f64]) -> Result<Vec<f64>, String> {
    let &[min, max, count] = spec else {
        return Err("grid needs MIN MAX COUNT".into());
    };
    if !min.is_finite() || !max.is_finite() {
        return Err("grid limits must be finite".into());
    }
    if min > max {
        return Err(format!("grid minimum {min} exceeds maximum {max}"));
    }
    if !(count >= 1.0) || count.fract() != 0.0 {
        return Err(format!(
            "grid count must be a positive integer, got {count}"
        ));
    }
    if count == 1.0 && min != max {
        return Err("a one-point grid needs MIN = MAX".into());
    }
    Ok(linspace(min, max, count as usize))
}

/// 17 significant digits; non-finite values become empty fields.
pub fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn open_output<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, Failure> {
    Ok(match path {
        Some(p) => Box::new(
            File::create(p)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?,
        ),
        None => Box::new(stdout),
    })
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Table<'a> {
    columns: &'a [&'a str],
    rows: Vec<Vec<Option<f64>>>,
    excluded: usize,
}

fn emit_table(
    output: &OutputArgs,
    stdout: &mut dyn Write,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), Failure> {
    let mut out = open_output(&output.out, stdout)?;
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let text: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(|&v| format_value(v)).collect())
                .collect();
            write_csv(&mut out, columns, &text)
        }
        Format::Json => {
            let excluded = rows.iter().flatten().filter(|v| !v.is_finite()).count();
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|&v| finite(v)).collect())
                .collect();
            write_json(
                &mut out,
                &Table {
                    columns,
                    rows,
                    excluded,
                },
            )
        }
    }
}

fn cmd_exact_tail(args: &ExactTailArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let params = ModelParams::critical(args.n)?;
    let grid = match &args.x {
        Some(spec) => parse_grid(spec).map_err(Failure::Usage)?,
        None => linspace(0.0, theorem_range_max(args.n), 20),
    };
    let table = build_log_weight_table(params)?;
    let law = LimitLaw::new()?;
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        let exact = exact_tail_critical(&table, x)?;
        let limit = law.limit_tail(x);
        let corrected = law.corrected_tail(args.n, x);
        let envelope = law.error_envelope(args.n, x).unwrap_or(f64::NAN);
        rows.push(vec![
            x,
            exact,
            limit,
            exact / limit,
            exact / corrected,
            envelope,
        ]);
    }
    emit_table(
        &args.output,
        stdout,
        &[
            "x",
            "exact_tail",
            "limit_tail",
            "ratio",
            "corrected_ratio",
            "envelope",
        ],
        &rows,
    )
}

fn cmd_limit_law(args: &LimitLawArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let grid = parse_grid(&args.x).map_err(Failure::Usage)?;
    let law = LimitLaw::new()?;
    let rows: Vec<Vec<f64>> = grid
        .into_iter()
        .map(|x| {
            vec![
                x,
                law.cdf(x),
                law.correction(x),
                limit_density_p1(x),
                limit_density_p2(x),
            ]
        })
        .collect();
    emit_table(&args.output, stdout, &["x", "F", "G", "p1", "p2"], &rows)
}

#[derive(Serialize)]
struct Draws<'a> {
    n: u64,
    beta: f64,
    h: f64,
    seed: u64,
    rng: &'a str,
    spin_sums: Vec<i64>,
}

#[derive(Serialize)]
struct GlauberPmf<'a> {
    n: u64,
    beta: f64,
    h: f64,
    seed: u64,
    rng: &'a str,
    sweeps: u64,
    burn_in: u64,
    spin_sum: Vec<i64>,
    empirical: Vec<f64>,
    exact: Vec<f64>,
    total_variation: Option<f64>,
}

fn cmd_sample(
    args: &SampleArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let params = ModelParams::new(args.n, args.beta, args.h)?;
    let mut state = SamplerState::new(params, args.seed)?;
    let format = args.output.format.unwrap_or(Format::Csv);
    let n = args.n as i64;
    if !args.glauber {
        let draws = state.sample_magnetization_exact(args.draws as usize);
        let mut out = open_output(&args.output.out, stdout)?;
        return match format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = draws
                    .iter()
                    .enumerate()
                    .map(|(i, s)| vec![i.to_string(), s.to_string()])
                    .collect();
                write_csv(&mut out, &["draw", "spin_sum"], &rows)
            }
            Format::Json => write_json(
                &mut out,
                &Draws {
                    n: args.n,
                    beta: args.beta,
                    h: args.h,
                    seed: args.seed,
                    rng: RNG_ALGORITHM,
                    spin_sums: draws,
                },
            ),
        };
    }
    if args.sweeps == 0 {
        return Err(Failure::Usage("--sweeps must be positive".into()));
    }
    let pmf = state.glauber_chain(args.sweeps as usize, args.burn_in as usize);
    let exact = state.table().probabilities();
    let tv = pmf.total_variation(&exact);
    let empirical = pmf.probabilities();
    let spin_sum: Vec<i64> = (0..=n).map(|k| 2 * k - n).collect();
    let mut out = open_output(&args.output.out, stdout)?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..spin_sum.len())
                .map(|k| {
                    vec![
                        spin_sum[k].to_string(),
                        format_value(empirical[k]),
                        format_value(exact[k]),
                    ]
                })
                .collect();
            write_csv(&mut out, &["spin_sum", "empirical", "exact"], &rows)?;
            writeln!(stderr, "total_variation {}", format_value(tv))?;
            Ok(())
        }
        Format::Json => write_json(
            &mut out,
            &GlauberPmf {
                n: args.n,
                beta: args.beta,
                h: args.h,
                seed: args.seed,
                rng: RNG_ALGORITHM,
                sweeps: args.sweeps,
                burn_in: args.burn_in,
                spin_sum,
                empirical,
                exact,
                total_variation: finite(tv),
            },
        ),
    }
}

#[derive(Serialize)]
struct Bundle<'a> {
    passed: bool,
    excluded: usize,
    reports: &'a [VerificationReport],
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let options = SuiteOptions {
        n_values: (!args.n.is_empty()).then(|| args.n.clone()),
        x_values: (!args.x.is_empty()).then(|| args.x.clone()),
    };
    let reports = match &args.check {
        Some(id) => vec![run_check(id, &options)?],
        None => run_all(&options)?,
    };
    let passed = reports.iter().all(|r| r.passed);
    let mut out = open_output(&args.output.out, stdout)?;
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            &mut out,
            &Bundle {
                passed,
                excluded: reports.iter().map(|r| r.excluded).sum(),
                reports: &reports,
            },
        )?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let opt = |v: Option<f64>| v.map(format_value).unwrap_or_default();
                    vec![
                        r.check_id.clone(),
                        r.passed.to_string(),
                        r.precondition_ok.to_string(),
                        opt(r.worst_case),
                        opt(r.estimated_constant),
                        r.excluded.to_string(),
                        r.grid.clone(),
                    ]
                })
                .collect();
            write_csv(
                &mut out,
                &[
                    "check_id",
                    "passed",
                    "precondition_ok",
                    "worst_case",
                    "estimated_constant",
                    "excluded",
                    "grid",
                ],
                &rows,
            )?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit status.
pub fn run<'a, I, T>(args: I, stdout: &'a mut dyn Write, stderr: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_SUCCESS
            };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::ExactTail(a) => cmd_exact_tail(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Sample(a) => cmd_sample(a, stdout, stderr),
        Command::LimitLaw(a) => cmd_limit_law(a, stdout),
    };
    match result {
        Ok(()) => EXIT_SUCCESS,
        Err(Failure::Verification) => EXIT_VERIFICATION_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("curie-weiss").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e4"), Ok(10_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn grids_are_inclusive() {
        assert_eq!(parse_grid(&[0.0, 1.0, 3.0]).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid(&[1.0, 0.0, 3.0]).is_err());
        assert!(parse_grid(&[0.0, 1.0, 0.0]).is_err());
        assert_eq!(parse_grid(&[2.0, 2.0, 1.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn values_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_value(f64::NAN), "");
    }

    #[test]
    fn limit_law_default_grid() {
        let (code, out, _) = run_capture(&["limit-law"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "x,F,G,p1,p2");
        assert_eq!(lines.len(), 62);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run_capture(&["exact-tail", "--n", "100", "--x", "1", "0", "5"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["verify"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify", "--check", "missing"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["sample", "--n", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_SUCCESS);
    }
}
