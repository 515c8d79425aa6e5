//! Resumable scanner state, persisted as versioned key-value text.
//!
//! The format is self-describing and strict: every key must appear, in
//! order, and the record list is length-prefixed so truncation is always
//! detected. A checkpoint loads either exactly as saved or not at all.
//!
//! ```text
//! version: 1
//! pattern_id: 2
//! offsets: 0,2
//! scanned_to: 10000000
//! last_tuple_start: 9923987
//! current_max_gap: 1722
//! records: 21
//! 3,5,2
//! 5,11,6
//! ...
//! ```

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::scanner::GapRecord;

/// Format version written by [`ScanCheckpoint::save`].
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported checkpoint version {found:?} (expected {CHECKPOINT_VERSION})")]
    VersionMismatch { found: String },
    #[error("malformed checkpoint: {0}")]
    Malformed(String),
}

/// Snapshot of a maximal-gap scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanCheckpoint {
    pub pattern_id: String,
    pub offsets: Vec<u64>,
    /// Exclusive frontier: every potential tuple start below it is scanned.
    pub scanned_to: u64,
    /// Start of the most recently seen tuple; 0 when none yet.
    pub last_tuple_start: u64,
    /// Largest inter-tuple gap seen so far.
    pub current_max_gap: u64,
    /// Every record found so far, ascending with strictly increasing gaps.
    pub records: Vec<GapRecord>,
}

impl ScanCheckpoint {
    /// Writes the checkpoint atomically (temp file, then rename).
    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let mut text = String::new();
        text.push_str(&format!("version: {CHECKPOINT_VERSION}\n"));
        text.push_str(&format!("pattern_id: {}\n", self.pattern_id));
        text.push_str(&format!("offsets: {}\n", join_u64(&self.offsets)));
        text.push_str(&format!("scanned_to: {}\n", self.scanned_to));
        text.push_str(&format!("last_tuple_start: {}\n", self.last_tuple_start));
        text.push_str(&format!("current_max_gap: {}\n", self.current_max_gap));
        text.push_str(&format!("records: {}\n", self.records.len()));
        for r in &self.records {
            text.push_str(&format!("{},{},{}\n", r.p_start, r.p_next, r.gap));
        }

        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Loads and validates a checkpoint written by [`ScanCheckpoint::save`].
    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        let mut line_no = 0usize;
        let mut next_field = |key: &str| -> Result<String, CheckpointError> {
            line_no += 1;
            let line = lines
                .next()
                .ok_or_else(|| CheckpointError::Malformed(format!("missing field {key:?}")))?;
            let prefix = format!("{key}: ");
            line.strip_prefix(&prefix)
                .map(str::to_string)
                .ok_or_else(|| {
                    CheckpointError::Malformed(format!(
                        "line {line_no}: expected {key:?}, got {line:?}"
                    ))
                })
        };

        let version = next_field("version")?;
        if version != CHECKPOINT_VERSION.to_string() {
            return Err(CheckpointError::VersionMismatch { found: version });
        }
        let pattern_id = next_field("pattern_id")?;
        let offsets = parse_u64_list(&next_field("offsets")?, "offsets")?;
        let scanned_to = parse_u64(&next_field("scanned_to")?, "scanned_to")?;
        let last_tuple_start = parse_u64(&next_field("last_tuple_start")?, "last_tuple_start")?;
        let current_max_gap = parse_u64(&next_field("current_max_gap")?, "current_max_gap")?;
        let n_records = parse_u64(&next_field("records")?, "records")? as usize;
        drop(next_field);

        let mut records = Vec::with_capacity(n_records);
        for i in 0..n_records {
            let line = lines.next().ok_or_else(|| {
                CheckpointError::Malformed(format!(
                    "record list truncated: expected {n_records} records, found {i}"
                ))
            })?;
            let fields = parse_u64_list(line, "record")?;
            let [p_start, p_next, gap] = fields[..] else {
                return Err(CheckpointError::Malformed(format!(
                    "record {i}: expected 3 fields, got {}",
                    fields.len()
                )));
            };
            if p_next <= p_start || p_next - p_start != gap {
                return Err(CheckpointError::Malformed(format!(
                    "record {i}: gap {gap} != {p_next} - {p_start}"
                )));
            }
            records.push(GapRecord {
                pattern_id: pattern_id.clone(),
                p_start,
                p_next,
                gap,
            });
        }
        if let Some(extra) = lines.next() {
            return Err(CheckpointError::Malformed(format!(
                "trailing content after record list: {extra:?}"
            )));
        }

        let cp = ScanCheckpoint {
            pattern_id,
            offsets,
            scanned_to,
            last_tuple_start,
            current_max_gap,
            records,
        };
        cp.validate()?;
        Ok(cp)
    }

    /// Structural invariants shared by save and load.
    fn validate(&self) -> Result<(), CheckpointError> {
        if self.offsets.is_empty() || self.offsets[0] != 0 {
            return Err(CheckpointError::Malformed(
                "offsets must be non-empty and start at 0".into(),
            ));
        }
        if self.offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CheckpointError::Malformed(
                "offsets must be strictly ascending".into(),
            ));
        }
        if self.last_tuple_start >= self.scanned_to.max(1) {
            return Err(CheckpointError::Malformed(format!(
                "last_tuple_start {} not below frontier {}",
                self.last_tuple_start, self.scanned_to
            )));
        }
        let mut prev_start = 0u64;
        let mut prev_gap = 0u64;
        for r in &self.records {
            if r.p_start < prev_start || r.gap <= prev_gap {
                return Err(CheckpointError::Malformed(format!(
                    "records out of order near p_start {}",
                    r.p_start
                )));
            }
            prev_start = r.p_start;
            prev_gap = r.gap;
        }
        if let Some(last) = self.records.last() {
            if last.gap != self.current_max_gap {
                return Err(CheckpointError::Malformed(format!(
                    "current_max_gap {} disagrees with last record gap {}",
                    self.current_max_gap, last.gap
                )));
            }
        }
        Ok(())
    }
}

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_u64(s: &str, key: &str) -> Result<u64, CheckpointError> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| CheckpointError::Malformed(format!("{key}: {s:?} is not an integer")))
}

fn parse_u64_list(s: &str, key: &str) -> Result<Vec<u64>, CheckpointError> {
    s.split(',').map(|part| parse_u64(part, key)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn sample() -> ScanCheckpoint {
        let rec = |p_start: u64, p_next: u64| GapRecord {
            pattern_id: "2".to_string(),
            p_start,
            p_next,
            gap: p_next - p_start,
        };
        ScanCheckpoint {
            pattern_id: "2".to_string(),
            offsets: vec![0, 2],
            scanned_to: 1_000,
            last_tuple_start: 881,
            current_max_gap: 150,
            records: vec![rec(3, 5), rec(5, 11), rec(17, 29), rec(41, 59), rec(659, 809)],
        }
    }

    #[test]
    fn round_trip_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.checkpoint");
        let cp = sample();
        cp.save(&path).unwrap();
        assert_eq!(ScanCheckpoint::load(&path).unwrap(), cp);
    }

    #[test]
    fn empty_record_list_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.checkpoint");
        let cp = ScanCheckpoint {
            pattern_id: "7a".to_string(),
            offsets: vec![0, 2, 8, 12, 14, 18, 20],
            scanned_to: 5_000,
            last_tuple_start: 0,
            current_max_gap: 0,
            records: vec![],
        };
        cp.save(&path).unwrap();
        assert_eq!(ScanCheckpoint::load(&path).unwrap(), cp);
    }

    #[test]
    fn truncated_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.checkpoint");
        sample().save(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        // Drop the last two record lines; the declared count now overshoots.
        let truncated: Vec<&str> = text.lines().collect();
        fs::write(&path, truncated[..truncated.len() - 2].join("\n")).unwrap();
        assert!(matches!(
            ScanCheckpoint::load(&path),
            Err(CheckpointError::Malformed(_))
        ));
    }

    #[test]
    fn version_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.checkpoint");
        sample().save(&path).unwrap();
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("version: 1", "version: 99");
        fs::write(&path, text).unwrap();
        assert!(matches!(
            ScanCheckpoint::load(&path),
            Err(CheckpointError::VersionMismatch { found }) if found == "99"
        ));
    }

    #[test]
    fn corrupted_gap_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.checkpoint");
        sample().save(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("3,5,2", "3,5,4");
        fs::write(&path, text).unwrap();
        assert!(matches!(
            ScanCheckpoint::load(&path),
            Err(CheckpointError::Malformed(msg)) if msg.contains("gap")
        ));
    }

    #[test]
    fn trailing_garbage_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.checkpoint");
        sample().save(&path).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("surprise\n");
        fs::write(&path, text).unwrap();
        assert!(matches!(
            ScanCheckpoint::load(&path),
            Err(CheckpointError::Malformed(msg)) if msg.contains("trailing")
        ));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            ScanCheckpoint::load(Path::new("/nonexistent/scan.checkpoint")),
            Err(CheckpointError::Io(_))
        ));
    }
}
