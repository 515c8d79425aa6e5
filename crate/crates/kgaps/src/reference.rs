//! Embedded record tables for the ten built-in patterns, and verification
//! of scanner output against them.
//!
//! The tables live as plain CSV under `data/` (one file per pattern, so
//! each is auditable row by row) and are compiled into the library. Every
//! table lists the complete sequence of maximal gaps below 10^15; the
//! single-prime table additionally extends to 4 * 10^18 with records taken
//! from extended published computations, flagged via
//! [`ReferenceTable::is_beyond_tabulation_limit`].

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::scanner::GapRecord;

/// All tables are complete below this bound.
pub const TABULATION_LIMIT: u64 = 1_000_000_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReferenceError {
    #[error("no reference table for pattern {0:?}")]
    UnknownPatternId(String),
}

/// One embedded table of record gaps.
#[derive(Debug)]
pub struct ReferenceTable {
    pattern_id: String,
    source: String,
    rows: Vec<GapRecord>,
}

impl ReferenceTable {
    pub fn pattern_id(&self) -> &str {
        &self.pattern_id
    }

    /// Provenance of the rows (OEIS sequence id).
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn rows(&self) -> &[GapRecord] {
        &self.rows
    }

    /// The rows with `p_next <= limit`: exactly what a scan to `limit`
    /// must produce.
    pub fn prefix(&self, limit: u64) -> &[GapRecord] {
        let end = self.rows.partition_point(|r| r.p_next <= limit);
        &self.rows[..end]
    }

    /// True for rows beyond the 10^15 tabulation bound (present only in
    /// the single-prime table); verification never rescans these.
    pub fn is_beyond_tabulation_limit(&self, row: &GapRecord) -> bool {
        row.p_next > TABULATION_LIMIT
    }
}

/// Outcome of comparing computed records against a reference prefix.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub pattern_id: String,
    pub limit: u64,
    /// Rows present in both lists.
    pub matched: usize,
    /// Reference rows the computation failed to produce.
    pub missing: Vec<GapRecord>,
    /// Computed rows absent from the reference.
    pub extra: Vec<GapRecord>,
}

impl VerificationReport {
    /// True when computed and reference rows agree exactly.
    pub fn is_exact_match(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

const TABLE_SOURCES: [(&str, &str, &str); 10] = [
    ("1", "OEIS A005250", include_str!("../data/table_1.csv")),
    ("2", "OEIS A113274", include_str!("../data/table_2.csv")),
    ("3a", "OEIS A201598", include_str!("../data/table_3a.csv")),
    ("3b", "OEIS A201596", include_str!("../data/table_3b.csv")),
    ("4", "OEIS A113404", include_str!("../data/table_4.csv")),
    ("5a", "OEIS A201073", include_str!("../data/table_5a.csv")),
    ("5b", "OEIS A201062", include_str!("../data/table_5b.csv")),
    ("6", "OEIS A200503", include_str!("../data/table_6.csv")),
    ("7a", "OEIS A201251", include_str!("../data/table_7a.csv")),
    ("7b", "OEIS A201051", include_str!("../data/table_7b.csv")),
];

/// All ten embedded tables, in pattern-id order.
pub fn reference_tables() -> &'static [ReferenceTable] {
    static TABLES: OnceLock<Vec<ReferenceTable>> = OnceLock::new();
    TABLES.get_or_init(|| {
        TABLE_SOURCES
            .iter()
            .map(|(id, source, csv)| parse_table(id, source, csv))
            .collect()
    })
}

/// The embedded table for one built-in pattern id.
pub fn reference_table(pattern_id: &str) -> Result<&'static ReferenceTable, ReferenceError> {
    reference_tables()
        .iter()
        .find(|t| t.pattern_id == pattern_id)
        .ok_or_else(|| ReferenceError::UnknownPatternId(pattern_id.to_string()))
}

fn parse_table(pattern_id: &str, source: &str, csv: &str) -> ReferenceTable {
    let mut lines = csv.lines();
    let header = lines.next().expect("embedded table is non-empty");
    assert_eq!(header, "p_start,p_next,gap", "table {pattern_id} header");
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            let mut fields = line.split(',').map(|f| {
                f.parse::<u64>()
                    .unwrap_or_else(|_| panic!("table {pattern_id} row {i}: bad field {f:?}"))
            });
            let record = GapRecord {
                pattern_id: pattern_id.to_string(),
                p_start: fields.next().expect("p_start"),
                p_next: fields.next().expect("p_next"),
                gap: fields.next().expect("gap"),
            };
            assert!(fields.next().is_none(), "table {pattern_id} row {i}: extra field");
            record
        })
        .collect();
    ReferenceTable {
        pattern_id: pattern_id.to_string(),
        source: source.to_string(),
        rows,
    }
}

/// Compares scanner output for `pattern_id` up to `limit` against the
/// embedded table prefix. Mismatches are report content, not errors.
pub fn verify_against_reference(
    computed: &[GapRecord],
    pattern_id: &str,
    limit: u64,
) -> Result<VerificationReport, ReferenceError> {
    let reference = reference_table(pattern_id)?.prefix(limit);

    let mut computed: Vec<&GapRecord> = computed.iter().collect();
    computed.sort_by_key(|r| (r.p_start, r.p_next, r.gap));

    let mut matched = 0;
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < reference.len() || j < computed.len() {
        match (reference.get(i), computed.get(j)) {
            (Some(r), Some(c)) => {
                let rk = (r.p_start, r.p_next, r.gap);
                let ck = (c.p_start, c.p_next, c.gap);
                match rk.cmp(&ck) {
                    std::cmp::Ordering::Equal => {
                        matched += 1;
                        i += 1;
                        j += 1;
                    }
                    std::cmp::Ordering::Less => {
                        missing.push(r.clone());
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        extra.push((*c).clone());
                        j += 1;
                    }
                }
            }
            (Some(r), None) => {
                missing.push(r.clone());
                i += 1;
            }
            (None, Some(c)) => {
                extra.push((*c).clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }

    Ok(VerificationReport {
        pattern_id: pattern_id.to_string(),
        limit,
        matched,
        missing,
        extra,
    })
}
