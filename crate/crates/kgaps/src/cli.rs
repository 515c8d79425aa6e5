//! Command-line interface: `scan`, `constants`, `verify`, and `predict`.
//!
//! Record data goes to standard output (or `--output`); progress reporting
//! goes to standard error only, so pipelines stay clean. Identical
//! configurations produce byte-identical CSV/JSON output regardless of
//! worker count or segment length.

use std::error::Error;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::checkpoint::ScanCheckpoint;
use crate::hlconst::{hl_constant, HlConstant, DEFAULT_TRUNCATION_BOUND};
use crate::output::{self, OutputFormat};
use crate::patterns::{builtin_patterns, Pattern};
use crate::predictor::{check_bound, expected_max_gap};
use crate::reference::verify_against_reference;
use crate::scanner::{
    find_maximal_gaps, ScanConfig, ScanEvent, DEFAULT_CHECKPOINT_INTERVAL, DEFAULT_SEGMENT_LEN,
};

type CliResult<T> = Result<T, Box<dyn Error>>;

/// Exit codes: 0 success, 1 verification mismatch, 2 operational error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kgaps",
    version,
    about = "Record (maximal) gaps between prime k-tuplets"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find all maximal gaps for a pattern up to a limit.
    Scan(ScanArgs),
    /// Print Hardy-Littlewood singular-series constants.
    Constants(ConstantsArgs),
    /// Scan and compare against the embedded record tables.
    Verify(VerifyArgs),
    /// Evaluate the expected-gap growth law and conjectured bound.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
struct PatternArg {
    /// Built-in pattern id (1, 2, 3a, 3b, 4, 5a, 5b, 6, 7a, 7b),
    /// comma-separated offsets like "0,2,6,8", or "all".
    #[arg(long)]
    pattern: String,
}

impl PatternArg {
    fn resolve(&self) -> CliResult<Vec<Pattern>> {
        if self.pattern == "all" {
            return Ok(builtin_patterns());
        }
        Ok(vec![Pattern::parse(&self.pattern)?])
    }
}

#[derive(Debug, Args)]
struct ScanTuning {
    /// Integers per sieve segment.
    #[arg(long, default_value_t = DEFAULT_SEGMENT_LEN)]
    segment_length: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

impl ScanTuning {
    fn config(&self) -> CliResult<ScanConfig> {
        if self.segment_length == 0 || self.segment_length % 2 != 0 {
            return Err("segment length must be a positive multiple of 2".into());
        }
        let mut config = ScanConfig {
            segment_len: self.segment_length,
            ..ScanConfig::default()
        };
        if let Some(workers) = self.workers {
            if workers == 0 {
                return Err("worker count must be at least 1".into());
            }
            config.workers = workers;
        }
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write data here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

impl OutputArgs {
    fn writer(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    pattern: PatternArg,
    /// Scan limit: records must have p_next below this bound.
    #[arg(long)]
    limit: u64,
    #[command(flatten)]
    tuning: ScanTuning,
    /// Checkpoint file to write during the scan (and resume from).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Resume from the --checkpoint file instead of starting fresh.
    #[arg(long)]
    resume: bool,
    /// Integers scanned between checkpoint writes.
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_INTERVAL)]
    checkpoint_interval: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[command(flatten)]
    pattern: PatternArg,
    /// Largest prime included in the singular-series product.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_BOUND)]
    truncation_bound: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    pattern: PatternArg,
    /// Scan limit to verify up to.
    #[arg(long)]
    limit: u64,
    #[command(flatten)]
    tuning: ScanTuning,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[command(flatten)]
    pattern: PatternArg,
    /// Evaluate the growth law at this x. Without --x, a record CSV is
    /// read from standard input and each record is compared against the
    /// law evaluated at its own p_next.
    #[arg(long)]
    x: Option<u64>,
    /// Largest prime included in the singular-series product.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_BOUND)]
    truncation_bound: u64,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parses arguments, runs the chosen subcommand, and returns the process
/// exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = e.source();
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            EXIT_ERROR
        }
    }
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Scan(args) => scan(args),
        Command::Constants(args) => constants(args),
        Command::Verify(args) => verify(args),
        Command::Predict(args) => predict(args),
    }
}

/// Throttled progress reporting on standard error.
struct ProgressReporter {
    label: String,
    limit: u64,
    started: Instant,
    last: Instant,
}

impl ProgressReporter {
    fn new(label: &str, limit: u64) -> Self {
        let now = Instant::now();
        ProgressReporter {
            label: label.to_string(),
            limit,
            started: now,
            last: now,
        }
    }

    fn update(&mut self, scanned_to: u64, records: usize) {
        if self.last.elapsed() < Duration::from_secs(2) || scanned_to >= self.limit {
            return;
        }
        self.last = Instant::now();
        let pct = 100.0 * scanned_to as f64 / self.limit as f64;
        eprintln!(
            "pattern {}: {scanned_to}/{} ({pct:.1}%), {records} records, {:.0?} elapsed",
            self.label,
            self.limit,
            self.started.elapsed()
        );
    }
}

fn scan(args: ScanArgs) -> CliResult<i32> {
    let patterns = args.pattern.resolve()?;
    if args.limit < 2 {
        return Err("limit must be at least 2".into());
    }
    if patterns.len() > 1 && args.checkpoint.is_some() {
        return Err("checkpoints track a single pattern; use --pattern <one> with --checkpoint".into());
    }
    if args.resume && args.checkpoint.is_none() {
        return Err("--resume needs --checkpoint <path>".into());
    }

    let mut config = args.tuning.config()?;
    config.checkpoint_interval = args.checkpoint_interval;
    config.checkpoint_path = args.checkpoint.clone();

    let mut out = args.out.writer()?;
    let mut all_records = Vec::new();
    match args.out.format {
        OutputFormat::Text => output::write_record_text_header(&mut out)?,
        OutputFormat::Csv => output::write_record_csv_header(&mut out)?,
        OutputFormat::Json => {}
    }

    for pattern in &patterns {
        let resume = if args.resume {
            let path = args.checkpoint.as_ref().expect("checked above");
            Some(ScanCheckpoint::load(path)?)
        } else {
            None
        };

        let mut progress = ProgressReporter::new(pattern.id(), args.limit);
        let mut records = 0usize;
        let mut io_error: Option<io::Error> = None;
        find_maximal_gaps(pattern, args.limit, resume, &config, |event| match event {
            ScanEvent::Record(r) => {
                records += 1;
                let res = match args.out.format {
                    OutputFormat::Text => output::write_record_text_row(&mut out, r),
                    OutputFormat::Csv => output::write_record_csv_row(&mut out, r),
                    OutputFormat::Json => {
                        all_records.push(r.clone());
                        Ok(())
                    }
                };
                if let (Err(e), None) = (res, io_error.as_ref()) {
                    io_error = Some(e);
                }
            }
            ScanEvent::Progress { scanned_to } => progress.update(scanned_to, records),
        })?;
        if let Some(e) = io_error {
            return Err(e.into());
        }
    }

    if args.out.format == OutputFormat::Json {
        output::write_records_json(&mut out, &all_records)?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn constants(args: ConstantsArgs) -> CliResult<i32> {
    let patterns = args.pattern.resolve()?;
    let constants: Vec<HlConstant> = patterns
        .iter()
        .map(|p| hl_constant(p, args.truncation_bound))
        .collect::<Result<_, _>>()?;

    let mut out = args.out.writer()?;
    match args.out.format {
        OutputFormat::Text => output::write_constants_text(&mut out, &constants)?,
        OutputFormat::Csv => output::write_constants_csv(&mut out, &constants)?,
        OutputFormat::Json => output::write_constants_json(&mut out, &constants)?,
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs) -> CliResult<i32> {
    let patterns = args.pattern.resolve()?;
    if args.limit < 2 {
        return Err("limit must be at least 2".into());
    }
    let config = args.tuning.config()?;

    let mut reports = Vec::new();
    for pattern in &patterns {
        let mut records = Vec::new();
        let mut progress = ProgressReporter::new(pattern.id(), args.limit);
        find_maximal_gaps(pattern, args.limit, None, &config, |event| match event {
            ScanEvent::Record(r) => records.push(r.clone()),
            ScanEvent::Progress { scanned_to } => progress.update(scanned_to, records.len()),
        })?;
        reports.push(verify_against_reference(&records, pattern.id(), args.limit)?);
    }

    let mut out = args.out.writer()?;
    match args.out.format {
        OutputFormat::Text => {
            for report in &reports {
                output::write_report_text(&mut out, report)?;
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "pattern_id,limit,matched,missing,extra,exact_match")?;
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.pattern_id,
                    r.limit,
                    r.matched,
                    r.missing.len(),
                    r.extra.len(),
                    r.is_exact_match()
                )?;
            }
        }
        OutputFormat::Json => output::write_reports_json(&mut out, &reports)?,
    }
    out.flush()?;

    if reports.iter().all(|r| r.is_exact_match()) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_MISMATCH)
    }
}

/// One record checked against the growth law at x = p_next.
#[derive(Debug, Serialize)]
struct RecordCheck {
    pattern_id: String,
    p_start: u64,
    p_next: u64,
    gap: u64,
    g_expected: f64,
    actual_over_expected: f64,
    g_bound: f64,
    within_bound: bool,
}

fn predict(args: PredictArgs) -> CliResult<i32> {
    let patterns = args.pattern.resolve()?;
    let mut out = args.out.writer()?;

    if let Some(x) = args.x {
        let forecasts = patterns
            .iter()
            .map(|p| Ok(expected_max_gap(&hl_constant(p, args.truncation_bound)?, x)?))
            .collect::<CliResult<Vec<_>>>()?;
        match args.out.format {
            OutputFormat::Text => output::write_forecasts_text(&mut out, &forecasts)?,
            OutputFormat::Csv => output::write_forecasts_csv(&mut out, &forecasts)?,
            OutputFormat::Json => output::write_forecasts_json(&mut out, &forecasts)?,
        }
        out.flush()?;
        return Ok(EXIT_OK);
    }

    // No --x: compare records from a CSV on standard input against the law.
    let mut text = String::new();
    io::stdin().read_to_string(&mut text)?;
    let records = output::parse_records_csv(&text).map_err(io::Error::other)?;

    let mut checks = Vec::new();
    for record in &records {
        let constant = constant_for(&record.pattern_id, &patterns, args.truncation_bound)?;
        let forecast = expected_max_gap(&constant, record.p_next)?;
        checks.push(RecordCheck {
            pattern_id: record.pattern_id.clone(),
            p_start: record.p_start,
            p_next: record.p_next,
            gap: record.gap,
            g_expected: forecast.g_expected,
            actual_over_expected: record.gap as f64 / forecast.g_expected,
            g_bound: forecast.g_bound,
            within_bound: check_bound(record, &constant)?,
        });
    }

    match args.out.format {
        OutputFormat::Text => {
            writeln!(
                out,
                "{:>8} {:>18} {:>18} {:>12} {:>14} {:>10} {:>14} {:>6}",
                "pattern", "p_start", "p_next", "gap", "g_expected", "ratio", "g_bound", "ok"
            )?;
            for c in &checks {
                writeln!(
                    out,
                    "{:>8} {:>18} {:>18} {:>12} {:>14.1} {:>10.3} {:>14.1} {:>6}",
                    c.pattern_id,
                    c.p_start,
                    c.p_next,
                    c.gap,
                    c.g_expected,
                    c.actual_over_expected,
                    c.g_bound,
                    c.within_bound
                )?;
            }
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "pattern_id,p_start,p_next,gap,g_expected,actual_over_expected,g_bound,within_bound"
            )?;
            for c in &checks {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    c.pattern_id,
                    c.p_start,
                    c.p_next,
                    c.gap,
                    c.g_expected,
                    c.actual_over_expected,
                    c.g_bound,
                    c.within_bound
                )?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &checks)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

/// Constant for a record's pattern: one of the already-resolved patterns
/// when possible, otherwise parsed from the id itself.
fn constant_for(
    pattern_id: &str,
    resolved: &[Pattern],
    truncation_bound: u64,
) -> CliResult<HlConstant> {
    let pattern = match resolved.iter().find(|p| p.id() == pattern_id) {
        Some(p) => p.clone(),
        None => Pattern::parse(pattern_id)?,
    };
    Ok(hl_constant(&pattern, truncation_bound)?)
}
