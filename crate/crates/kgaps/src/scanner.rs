//! Enumerates every occurrence of a pattern up to a limit and emits the
//! strictly increasing sequence of maximal (record) gaps.
//!
//! The scan partitions `[0, limit)` into segments. Worker threads sieve and
//! scan disjoint segments concurrently (each sieved with a span-wide
//! lookahead so tuples straddling the upper boundary are decidable); a
//! single reducer consumes the per-segment tuple-start lists in ascending
//! segment order and performs the order-dependent gap detection. Records
//! therefore never depend on worker count or segment length.
//!
//! Gaps are measured between the initial primes of consecutive tuples. A
//! record is any gap strictly exceeding all earlier gaps; by convention the
//! first inter-tuple gap is the first record. Both endpoints of every
//! record are re-verified with the independent deterministic primality test
//! before the record is emitted.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::Serialize;
use thiserror::Error;

use crate::checkpoint::{CheckpointError, ScanCheckpoint};
use crate::patterns::{Pattern, PatternError};
use crate::primality;
use crate::sieve::{base_primes, sieve_segment, SieveError, SieveSegment};

/// Default scan segment length (integers per segment).
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 22;

/// Default distance between checkpoint writes.
pub const DEFAULT_CHECKPOINT_INTERVAL: u64 = 10_000_000_000;

/// Largest supported scan limit.
pub const MAX_SCAN_LIMIT: u64 = i64::MAX as u64;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("checkpoint belongs to pattern {found:?}, not {expected:?}")]
    CheckpointMismatch { expected: String, found: String },
    #[error("checkpoint frontier {scanned_to} is beyond the requested limit {limit}")]
    CheckpointBeyondLimit { scanned_to: u64, limit: u64 },
    #[error("scan limit {0} exceeds the supported maximum {MAX_SCAN_LIMIT}")]
    LimitTooLarge(u64),
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("segment [{seg_lo}, {seg_hi}) does not cover scan range [{lo}, {hi}) plus span {span}")]
    InsufficientCoverage {
        seg_lo: u64,
        seg_hi: u64,
        lo: u64,
        hi: u64,
        span: u64,
    },
    #[error("a scan worker exited unexpectedly")]
    WorkerLost,
    #[error("self-check failed: emitted tuple member {0} is not prime")]
    SelfCheckFailed(u64),
}

/// One maximal gap: consecutive tuple starts and their difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRecord {
    pub pattern_id: String,
    pub p_start: u64,
    pub p_next: u64,
    pub gap: u64,
}

/// Scan tuning knobs; the defaults match the CLI defaults.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub segment_len: u64,
    pub workers: usize,
    pub checkpoint_interval: u64,
    /// When set, checkpoints are written here (atomically) every
    /// `checkpoint_interval` integers and once more at completion.
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            segment_len: DEFAULT_SEGMENT_LEN,
            workers: thread::available_parallelism().map_or(1, |n| n.get()),
            checkpoint_interval: DEFAULT_CHECKPOINT_INTERVAL,
            checkpoint_path: None,
        }
    }
}

/// Events delivered, in order, to the scan callback.
#[derive(Debug)]
pub enum ScanEvent<'a> {
    /// A new record gap (restored records are replayed first on resume).
    Record(&'a GapRecord),
    /// The contiguous frontier advanced past a segment boundary.
    Progress { scanned_to: u64 },
}

/// Lists every pattern occurrence whose start lies in `[lo, hi)`.
///
/// The segment must cover `[lo, hi + pattern.span())` so that offsets
/// reaching past `hi` are decidable; [`find_maximal_gaps`] arranges this by
/// sieving each segment with a span-wide lookahead.
pub fn scan_segment(
    segment: &SieveSegment,
    pattern: &Pattern,
    lo: u64,
    hi: u64,
) -> Result<Vec<u64>, ScanError> {
    let span = pattern.span();
    if lo < segment.lo() || segment.hi() < hi.max(lo).saturating_add(span) {
        return Err(ScanError::InsufficientCoverage {
            seg_lo: segment.lo(),
            seg_hi: segment.hi(),
            lo,
            hi,
            span,
        });
    }
    if hi <= lo {
        return Ok(Vec::new());
    }

    let mut starts = Vec::new();
    // 2 is the only even prime; even offsets keep 2 + d even, so only the
    // k = 1 pattern can ever start there.
    if lo <= 2 && 2 < hi && pattern.offsets().iter().all(|&d| segment.is_prime(2 + d)) {
        starts.push(2);
    }

    let n_odd = segment.n_odd();
    if n_odd == 0 {
        return Ok(starts);
    }

    // In odd-index space an even offset d is a shift by d/2 bits: AND-ing
    // the shifted prime bits leaves exactly the tuple starts set.
    let words = segment.odd_words();
    let mut acc = words.to_vec();
    if pattern.offsets().iter().any(|&d| d % 2 == 1) {
        // An odd offset makes p + d even for odd p: no odd start survives.
        acc.fill(0);
    } else {
        for &d in &pattern.offsets()[1..] {
            and_shifted(&mut acc, words, (d / 2) as usize);
        }
    }

    let first_odd = segment.first_odd();
    let idx_lo = ((lo.max(first_odd) | 1) - first_odd) as usize / 2;
    let idx_hi = if hi > first_odd {
        (hi - first_odd).div_ceil(2) as usize
    } else {
        0
    };
    zero_outside(&mut acc, idx_lo, idx_hi);

    for (wi, &word) in acc.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            starts.push(first_odd + 2 * (wi * 64 + tz) as u64);
        }
    }
    Ok(starts)
}

/// `acc[i] &= src[i..] >> shift`, reading zeros past the end of `src`.
fn and_shifted(acc: &mut [u64], src: &[u64], shift: usize) {
    let word_shift = shift / 64;
    let bit_shift = shift % 64;
    for (i, a) in acc.iter_mut().enumerate() {
        let lo = src.get(i + word_shift).copied().unwrap_or(0);
        let v = if bit_shift == 0 {
            lo
        } else {
            let hi = src.get(i + word_shift + 1).copied().unwrap_or(0);
            (lo >> bit_shift) | (hi << (64 - bit_shift))
        };
        *a &= v;
    }
}

/// Clears every bit outside `[idx_lo, idx_hi)`.
fn zero_outside(acc: &mut [u64], idx_lo: usize, idx_hi: usize) {
    for (w, word) in acc.iter_mut().enumerate() {
        let base = w * 64;
        if base + 64 <= idx_lo || base >= idx_hi {
            *word = 0;
            continue;
        }
        if base < idx_lo {
            *word &= u64::MAX << (idx_lo - base);
        }
        if base + 64 > idx_hi {
            *word &= u64::MAX >> (64 - (idx_hi - base));
        }
    }
}

/// Running gap-detection state carried by the reducer.
struct GapState {
    pattern_id: String,
    offsets: Vec<u64>,
    last_tuple_start: Option<u64>,
    current_max_gap: u64,
    records: Vec<GapRecord>,
}

impl GapState {
    fn new(pattern: &Pattern) -> Self {
        GapState {
            pattern_id: pattern.id().to_string(),
            offsets: pattern.offsets().to_vec(),
            last_tuple_start: None,
            current_max_gap: 0,
            records: Vec::new(),
        }
    }

    fn from_checkpoint(cp: ScanCheckpoint) -> Self {
        GapState {
            pattern_id: cp.pattern_id,
            offsets: cp.offsets,
            last_tuple_start: if cp.last_tuple_start == 0 {
                None
            } else {
                Some(cp.last_tuple_start)
            },
            current_max_gap: cp.current_max_gap,
            records: cp.records,
        }
    }

    fn advance<F>(&mut self, p: u64, on_event: &mut F) -> Result<(), ScanError>
    where
        F: FnMut(ScanEvent<'_>),
    {
        if let Some(prev) = self.last_tuple_start {
            debug_assert!(p > prev, "tuple starts must ascend: {prev} then {p}");
            let gap = p - prev;
            if gap > self.current_max_gap {
                self.recheck(prev)?;
                self.recheck(p)?;
                self.records.push(GapRecord {
                    pattern_id: self.pattern_id.clone(),
                    p_start: prev,
                    p_next: p,
                    gap,
                });
                self.current_max_gap = gap;
                on_event(ScanEvent::Record(self.records.last().expect("just pushed")));
            }
        }
        self.last_tuple_start = Some(p);
        Ok(())
    }

    /// Independent primality re-check of every member of the tuple at `p`.
    fn recheck(&self, p: u64) -> Result<(), ScanError> {
        for &d in &self.offsets {
            if !primality::is_prime(p + d) {
                return Err(ScanError::SelfCheckFailed(p + d));
            }
        }
        Ok(())
    }

    fn checkpoint(&self, scanned_to: u64) -> ScanCheckpoint {
        ScanCheckpoint {
            pattern_id: self.pattern_id.clone(),
            offsets: self.offsets.clone(),
            scanned_to,
            last_tuple_start: self.last_tuple_start.unwrap_or(0),
            current_max_gap: self.current_max_gap,
            records: self.records.clone(),
        }
    }
}

/// Scans `pattern` up to `limit`, invoking `on_event` for every record (in
/// order) and for frontier progress. Returns the final checkpoint, whose
/// `scanned_to` equals `limit`.
///
/// With `resume`, scanning continues from the checkpoint's frontier and the
/// already-found records are replayed to `on_event` first, so the full
/// event stream is identical to an uninterrupted scan.
pub fn find_maximal_gaps<F>(
    pattern: &Pattern,
    limit: u64,
    resume: Option<ScanCheckpoint>,
    config: &ScanConfig,
    mut on_event: F,
) -> Result<ScanCheckpoint, ScanError>
where
    F: FnMut(ScanEvent<'_>),
{
    pattern.require_admissible()?;
    if limit > MAX_SCAN_LIMIT {
        return Err(ScanError::LimitTooLarge(limit));
    }
    if config.segment_len == 0 {
        return Err(ScanError::InvalidConfig("segment length must be positive"));
    }
    if config.workers == 0 {
        return Err(ScanError::InvalidConfig("worker count must be at least 1"));
    }

    let (start, mut state) = match resume {
        Some(cp) => {
            if cp.pattern_id != pattern.id() || cp.offsets != pattern.offsets() {
                return Err(ScanError::CheckpointMismatch {
                    expected: pattern.id().to_string(),
                    found: cp.pattern_id,
                });
            }
            if cp.scanned_to > limit {
                return Err(ScanError::CheckpointBeyondLimit {
                    scanned_to: cp.scanned_to,
                    limit,
                });
            }
            (cp.scanned_to, GapState::from_checkpoint(cp))
        }
        None => (0, GapState::new(pattern)),
    };

    for record in &state.records {
        on_event(ScanEvent::Record(record));
    }

    if start < limit {
        run_scan(pattern, start, limit, config, &mut state, &mut on_event)?;
    }

    let final_cp = state.checkpoint(limit);
    if let Some(path) = &config.checkpoint_path {
        final_cp.save(path)?;
    }
    Ok(final_cp)
}

/// Convenience wrapper collecting the record stream of a fresh scan.
pub fn collect_maximal_gaps(
    pattern: &Pattern,
    limit: u64,
    config: &ScanConfig,
) -> Result<(Vec<GapRecord>, ScanCheckpoint), ScanError> {
    let mut records = Vec::new();
    let cp = find_maximal_gaps(pattern, limit, None, config, |event| {
        if let ScanEvent::Record(r) = event {
            records.push(r.clone());
        }
    })?;
    Ok((records, cp))
}

fn run_scan<F>(
    pattern: &Pattern,
    start: u64,
    limit: u64,
    config: &ScanConfig,
    state: &mut GapState,
    on_event: &mut F,
) -> Result<(), ScanError>
where
    F: FnMut(ScanEvent<'_>),
{
    let span = pattern.span();
    let base = base_primes(isqrt_ceil(limit + span).max(2))?;
    let seg_len = config.segment_len;
    let n_segments = (limit - start).div_ceil(seg_len);

    let next_segment = AtomicU64::new(0);
    type SegmentStarts = (u64, Result<Vec<u64>, ScanError>);
    let (tx, rx) = mpsc::sync_channel::<SegmentStarts>(config.workers * 2);

    thread::scope(|scope| {
        for _ in 0..config.workers {
            let tx = tx.clone();
            let next_segment = &next_segment;
            let base = &base;
            scope.spawn(move || loop {
                let i = next_segment.fetch_add(1, Ordering::Relaxed);
                if i >= n_segments {
                    break;
                }
                let lo = start + i * seg_len;
                let hi = lo.saturating_add(seg_len).min(limit);
                let starts = sieve_segment(lo, hi + span, base)
                    .map_err(ScanError::from)
                    .and_then(|seg| scan_segment(&seg, pattern, lo, hi));
                if tx.send((i, starts)).is_err() {
                    break; // reducer bailed out
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        let mut next_expected = 0u64;
        let mut checkpoint_due = start.saturating_add(config.checkpoint_interval);
        while next_expected < n_segments {
            let (i, starts) = rx.recv().map_err(|_| ScanError::WorkerLost)?;
            pending.insert(i, starts?);
            while let Some(starts) = pending.remove(&next_expected) {
                for &p in &starts {
                    state.advance(p, on_event)?;
                }
                next_expected += 1;
                let frontier = (start + next_expected * seg_len).min(limit);
                on_event(ScanEvent::Progress {
                    scanned_to: frontier,
                });
                if frontier >= checkpoint_due && frontier < limit {
                    if let Some(path) = &config.checkpoint_path {
                        state.checkpoint(frontier).save(path)?;
                    }
                    checkpoint_due = frontier.saturating_add(config.checkpoint_interval);
                }
            }
        }
        Ok(())
    })
}

/// Smallest integer whose square is at least `n`.
fn isqrt_ceil(n: u64) -> u64 {
    let r = n.isqrt();
    if r * r < n {
        r + 1
    } else {
        r
    }
}
