//! Text, CSV, and JSON rendering shared by the CLI and tests.
//!
//! CSV and JSON layouts are fixed: identical inputs always produce
//! byte-identical output regardless of worker count or segment length.

use std::io::{self, Write};

use crate::hlconst::HlConstant;
use crate::predictor::GapForecast;
use crate::reference::VerificationReport;
use crate::scanner::GapRecord;

/// Output encodings offered by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

pub const RECORD_CSV_HEADER: &str = "pattern_id,p_start,p_next,gap";

pub fn write_record_csv_header(out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{RECORD_CSV_HEADER}")
}

pub fn write_record_csv_row(out: &mut dyn Write, r: &GapRecord) -> io::Result<()> {
    writeln!(out, "{},{},{},{}", r.pattern_id, r.p_start, r.p_next, r.gap)
}

/// Complete record list as CSV (header plus one row per record).
pub fn write_records_csv(out: &mut dyn Write, records: &[GapRecord]) -> io::Result<()> {
    write_record_csv_header(out)?;
    for r in records {
        write_record_csv_row(out, r)?;
    }
    Ok(())
}

/// Record list as a JSON array with the same field names as the CSV.
pub fn write_records_json(out: &mut dyn Write, records: &[GapRecord]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, records)?;
    writeln!(out)
}

pub fn write_record_text_header(out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:>8} {:>20} {:>20} {:>14}",
        "pattern", "p_start", "p_next", "gap"
    )
}

pub fn write_record_text_row(out: &mut dyn Write, r: &GapRecord) -> io::Result<()> {
    writeln!(
        out,
        "{:>8} {:>20} {:>20} {:>14}",
        r.pattern_id, r.p_start, r.p_next, r.gap
    )
}

/// Parses a record CSV produced by [`write_records_csv`].
pub fn parse_records_csv(text: &str) -> Result<Vec<GapRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(RECORD_CSV_HEADER) => {}
        other => return Err(format!("expected header {RECORD_CSV_HEADER:?}, got {other:?}")),
    }
    lines
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let [pattern_id, p_start, p_next, gap] = fields[..] else {
                return Err(format!("row {i}: expected 4 fields, got {}", fields.len()));
            };
            let parse = |f: &str, name: &str| {
                f.parse::<u64>()
                    .map_err(|_| format!("row {i}: {name} {f:?} is not an integer"))
            };
            Ok(GapRecord {
                pattern_id: pattern_id.to_string(),
                p_start: parse(p_start, "p_start")?,
                p_next: parse(p_next, "p_next")?,
                gap: parse(gap, "gap")?,
            })
        })
        .collect()
}

pub const CONSTANT_CSV_HEADER: &str = "pattern_id,h,c,truncation_bound,est_rel_error";

pub fn write_constants_csv(out: &mut dyn Write, constants: &[HlConstant]) -> io::Result<()> {
    writeln!(out, "{CONSTANT_CSV_HEADER}")?;
    for c in constants {
        writeln!(
            out,
            "{},{},{},{},{:e}",
            c.pattern_id, c.h, c.c, c.truncation_bound, c.est_rel_error
        )?;
    }
    Ok(())
}

pub fn write_constants_text(out: &mut dyn Write, constants: &[HlConstant]) -> io::Result<()> {
    writeln!(
        out,
        "{:>8} {:>14} {:>14} {:>12} {:>14}",
        "pattern", "H", "C", "bound", "est_rel_error"
    )?;
    for c in constants {
        writeln!(
            out,
            "{:>8} {:>14.9} {:>14.9} {:>12} {:>14.3e}",
            c.pattern_id, c.h, c.c, c.truncation_bound, c.est_rel_error
        )?;
    }
    Ok(())
}

pub fn write_constants_json(out: &mut dyn Write, constants: &[HlConstant]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, constants)?;
    writeln!(out)
}

pub const FORECAST_CSV_HEADER: &str = "pattern_id,x,a,b,g_expected,g_bound";

pub fn write_forecasts_csv(out: &mut dyn Write, forecasts: &[GapForecast]) -> io::Result<()> {
    writeln!(out, "{FORECAST_CSV_HEADER}")?;
    for f in forecasts {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            f.pattern_id, f.x, f.a, f.b, f.g_expected, f.g_bound
        )?;
    }
    Ok(())
}

pub fn write_forecasts_text(out: &mut dyn Write, forecasts: &[GapForecast]) -> io::Result<()> {
    writeln!(
        out,
        "{:>8} {:>20} {:>16} {:>8} {:>16} {:>16}",
        "pattern", "x", "a", "b", "g_expected", "g_bound"
    )?;
    for f in forecasts {
        writeln!(
            out,
            "{:>8} {:>20} {:>16.3} {:>8.4} {:>16.3} {:>16.3}",
            f.pattern_id, f.x, f.a, f.b, f.g_expected, f.g_bound
        )?;
    }
    Ok(())
}

pub fn write_forecasts_json(out: &mut dyn Write, forecasts: &[GapForecast]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, forecasts)?;
    writeln!(out)
}

/// Renders one verification report as human-readable text.
pub fn write_report_text(out: &mut dyn Write, report: &VerificationReport) -> io::Result<()> {
    writeln!(
        out,
        "pattern {}: limit {}, matched {}, missing {}, extra {} -> {}",
        report.pattern_id,
        report.limit,
        report.matched,
        report.missing.len(),
        report.extra.len(),
        if report.is_exact_match() { "ok" } else { "MISMATCH" }
    )?;
    for r in &report.missing {
        writeln!(out, "  missing: {},{},{}", r.p_start, r.p_next, r.gap)?;
    }
    for r in &report.extra {
        writeln!(out, "  extra:   {},{},{}", r.p_start, r.p_next, r.gap)?;
    }
    Ok(())
}

pub fn write_reports_json(out: &mut dyn Write, reports: &[VerificationReport]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, reports)?;
    writeln!(out)
}
