//! Command-line front end. The `betasigma` binary forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::autoselect::{auto_select, AutoSelectConfig};
use crate::error::Result;
use crate::estimators::{estimate, Center, EstimatorFamily};
use crate::io::{
    read_series, write_result, ColumnFormat, Delimiter, OutputFormat, ResultRecord, TSV_HEADER,
};
use crate::sample::{build_beta, scheme, Sampling, SchemeMode};
use crate::synth::{
    efficiency_curve, format_correlation_matrix, format_deviation_table, format_efficiency,
    format_pathological, order_correlation_matrix, pathological_series, pathological_table,
    sine_deviation_table, SineTableConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BETASIGMA_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "betasigma",
    version,
    about = "A posteriori noise estimation for sampled data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the noise for fixed order and jump (defaults reproduce DER_SNR).
    Estimate(EstimateArgs),
    /// Choose order and jump by cross-consistency of three estimates.
    Auto(AutoArgs),
    /// Rerun a validation experiment on synthetic data.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Independent,
    Shifted,
}

impl From<ModeArg> for SchemeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Independent => SchemeMode::Independent,
            ModeArg::Shifted => SchemeMode::Shifted,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Mv,
    Robust,
}

impl From<EstimatorArg> for EstimatorFamily {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Mv => EstimatorFamily::Mv,
            EstimatorArg::Robust => EstimatorFamily::Robust,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CenterArg {
    Zero,
    Sample,
}

impl From<CenterArg> for Center {
    fn from(c: CenterArg) -> Self {
        match c {
            CenterArg::Zero => Center::KnownZero,
            CenterArg::Sample => Center::Sample,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SamplingArg {
    Equidistant,
    Positions,
}

impl From<SamplingArg> for Sampling {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Equidistant => Sampling::AssumeEquidistant,
            SamplingArg::Positions => Sampling::UsePositions,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Tsv => OutputFormat::Tsv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColumnsArg {
    Auto,
    Two,
    One,
}

impl From<ColumnsArg> for ColumnFormat {
    fn from(c: ColumnsArg) -> Self {
        match c {
            ColumnsArg::Auto => ColumnFormat::Auto,
            ColumnsArg::Two => ColumnFormat::TwoColumn,
            ColumnsArg::One => ColumnFormat::OneColumn,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Whitespace,
    Comma,
    Semicolon,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Self {
        match d {
            DelimiterArg::Whitespace => Delimiter::Whitespace,
            DelimiterArg::Comma => Delimiter::Comma,
            DelimiterArg::Semicolon => Delimiter::Semicolon,
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Column files to process.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Column layout of the input files.
    #[arg(long, value_enum, default_value = "auto")]
    columns: ColumnsArg,
    /// Field delimiter (detected from the first data line when omitted).
    #[arg(long, value_enum)]
    delimiter: Option<DelimiterArg>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, default_value_t = 2)]
    jump: usize,
    #[arg(long, value_enum, default_value = "shifted")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "robust")]
    estimator: EstimatorArg,
    #[arg(long, value_enum, default_value = "zero")]
    center: CenterArg,
    #[arg(long, value_enum, default_value = "equidistant")]
    sampling: SamplingArg,
}

#[derive(Debug, Args)]
struct AutoArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    start_order: usize,
    #[arg(long, default_value_t = 1)]
    start_jump: usize,
    /// Confidence interval half-width in standard errors.
    #[arg(long, default_value_t = 3.0)]
    sigmas: f64,
    #[arg(long, default_value_t = 10)]
    max_order: usize,
    #[arg(long, value_enum, default_value = "robust")]
    estimator: EstimatorArg,
    #[arg(long, value_enum, default_value = "independent")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "zero")]
    center: CenterArg,
    #[arg(long, value_enum, default_value = "equidistant")]
    sampling: SamplingArg,
    /// Print the iteration trace to standard error.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableArg {
    #[value(name = "2")]
    OrderCorrelation,
    #[value(name = "3")]
    Sine,
    #[value(name = "fig1")]
    Efficiency,
    #[value(name = "pathological")]
    Pathological,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, value_enum)]
    table: TableArg,
    /// Repetitions (default 5000 for `--table 2`, 200 for `--table 3`).
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

struct FileOutcome {
    record: Option<ResultRecord>,
    error: Option<String>,
    not_converged: bool,
    verbose: Option<String>,
}

fn load(path: &Path, input: &InputArgs) -> Result<crate::sample::SeriesData> {
    read_series(path, input.columns.into(), input.delimiter.map(Into::into)).map(|(d, _)| d)
}

fn run_estimate(args: &EstimateArgs) -> Vec<FileOutcome> {
    args.input
        .files
        .par_iter()
        .map(|path| {
            let result = load(path, &args.input).and_then(|data| {
                let subsets = scheme(args.mode.into(), data.len(), args.order, args.jump)?;
                let sample = build_beta(&data, &subsets, args.sampling.into())?;
                let e = estimate(&sample, args.estimator.into(), args.center.into())?;
                Ok(ResultRecord::from_estimate(&e).with_snr(&data))
            });
            match result {
                Ok(record) => FileOutcome {
                    record: Some(record),
                    error: None,
                    not_converged: false,
                    verbose: None,
                },
                Err(e) => FileOutcome {
                    record: None,
                    error: Some(format!("{}: {e}", path.display())),
                    not_converged: false,
                    verbose: None,
                },
            }
        })
        .collect()
}

fn run_auto(args: &AutoArgs) -> Vec<FileOutcome> {
    let config = AutoSelectConfig {
        start_order: args.start_order,
        start_jump: args.start_jump,
        consistency_sigmas: args.sigmas,
        max_order: args.max_order,
        estimator: args.estimator.into(),
        center: args.center.into(),
        mode: args.mode.into(),
        sampling: args.sampling.into(),
    };
    args.input
        .files
        .par_iter()
        .map(|path| {
            let result = load(path, &args.input).and_then(|data| {
                let r = auto_select(&data, &config)?;
                Ok((ResultRecord::from_auto(&r).with_snr(&data), r))
            });
            match result {
                Ok((record, r)) => {
                    let verbose = args.verbose.then(|| {
                        let mut s = String::new();
                        for step in &r.trace {
                            s.push_str(&format!(
                                "{}: N={} j={} sigma={:.6e}±{:.2e} N+1={:.6e}±{:.2e} N+1,j+1={:.6e}±{:.2e} -> {:?}\n",
                                path.display(),
                                step.order,
                                step.jump,
                                step.base.sigma_hat,
                                step.base.stderr,
                                step.higher_order.sigma_hat,
                                step.higher_order.stderr,
                                step.higher_order_and_jump.sigma_hat,
                                step.higher_order_and_jump.stderr,
                                step.decision
                            ));
                        }
                        s
                    });
                    FileOutcome {
                        record: Some(record),
                        error: None,
                        not_converged: !r.converged,
                        verbose,
                    }
                }
                Err(e) => FileOutcome {
                    record: None,
                    error: Some(format!("{}: {e}", path.display())),
                    not_converged: false,
                    verbose: None,
                },
            }
        })
        .collect()
}

fn emit(
    outcomes: Vec<FileOutcome>,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    if format == OutputFormat::Tsv {
        writeln!(out, "{TSV_HEADER}")?;
    }
    let mut code = EXIT_OK;
    let mut any_not_converged = false;
    for o in outcomes {
        if let Some(v) = o.verbose {
            write!(err, "{v}")?;
        }
        if let Some(rec) = o.record {
            writeln!(out, "{}", write_result(&rec, format))?;
        }
        if let Some(e) = o.error {
            writeln!(err, "error: {e}")?;
            code = EXIT_INPUT_ERROR;
        }
        any_not_converged |= o.not_converged;
    }
    if code == EXIT_OK && any_not_converged {
        code = EXIT_NOT_CONVERGED;
    }
    Ok(code)
}

fn run_reproduce(args: &ReproduceArgs) -> Result<String> {
    let text = match args.table {
        TableArg::OrderCorrelation => {
            let orders: Vec<usize> = (0..=4).collect();
            let m = order_correlation_matrix(1000, &orders, args.reps.unwrap_or(5000), args.seed)?;
            format_correlation_matrix(&m)
        }
        TableArg::Sine => {
            let config = SineTableConfig {
                reps: args.reps.unwrap_or(200),
                seed: args.seed,
                ..Default::default()
            };
            format_deviation_table(&sine_deviation_table(&config)?)
        }
        TableArg::Efficiency => {
            let orders: Vec<usize> = (0..=10).collect();
            format_efficiency(&efficiency_curve(&orders)?)
        }
        TableArg::Pathological => {
            let mut text = format_pathological(&pathological_table(1000, 10)?);
            let r = auto_select(&pathological_series(1000), &AutoSelectConfig::default())?;
            text.push_str(&format!(
                "auto_select: converged={} order={} jump={}\n",
                r.converged, r.order, r.jump
            ));
            text
        }
    };
    Ok(text)
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return EXIT_INPUT_ERROR;
        }
    };

    enum Work {
        Files(Vec<FileOutcome>, OutputFormat),
        Text(Result<String>),
    }
    let work = pool.install(|| match &cli.command {
        Command::Estimate(a) => Work::Files(run_estimate(a), a.input.format.into()),
        Command::Auto(a) => Work::Files(run_auto(a), a.input.format.into()),
        Command::Reproduce(a) => Work::Text(run_reproduce(a)),
    });
    let result = match work {
        Work::Files(outcomes, format) => emit(outcomes, format, out, err),
        Work::Text(Ok(text)) => write!(out, "{text}").map(|_| EXIT_OK),
        Work::Text(Err(e)) => writeln!(err, "error: {e}").map(|_| EXIT_INPUT_ERROR),
    };
    result.unwrap_or(EXIT_INPUT_ERROR)
}
