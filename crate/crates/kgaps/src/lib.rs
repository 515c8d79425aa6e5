//! Record gaps between prime constellations.
//!
//! A prime k-tuplet is the densest admissible cluster of k primes — twin
//! primes {p, p+2}, quadruplets {p, p+2, p+6, p+8}, and so on. This crate
//! finds every *maximal* (record) gap between consecutive tuplets of a
//! pattern below a limit, computes the Hardy-Littlewood singular-series
//! constants that govern tuplet density, forecasts how record gaps grow,
//! and verifies scan output against embedded tables of published records.
//!
//! # Quick start
//!
//! ```
//! use kgaps::patterns::builtin_pattern;
//! use kgaps::scanner::{collect_maximal_gaps, ScanConfig};
//!
//! let twins = builtin_pattern("2").unwrap();
//! let (records, _) = collect_maximal_gaps(&twins, 1_000, &ScanConfig::default()).unwrap();
//! assert_eq!(records.last().map(|r| (r.p_start, r.p_next, r.gap)), Some((659, 809, 150)));
//! ```
//!
//! The `examples/` directory has one runnable program per capability:
//! scanning, constants, verification, forecasting, checkpoint/resume,
//! custom patterns, and bound checking. The `kgaps` binary wraps the same
//! capabilities as subcommands (`scan`, `constants`, `verify`, `predict`).

pub mod checkpoint;
pub mod cli;
pub mod hlconst;
pub mod output;
pub mod patterns;
pub mod predictor;
pub mod primality;
pub mod reference;
pub mod scanner;
pub mod sieve;

pub use checkpoint::ScanCheckpoint;
pub use hlconst::{hl_constant, HlConstant};
pub use patterns::{builtin_pattern, builtin_patterns, Pattern};
pub use predictor::{average_gap, check_bound, expected_max_gap, GapForecast};
pub use reference::{reference_table, verify_against_reference, VerificationReport};
pub use scanner::{collect_maximal_gaps, find_maximal_gaps, GapRecord, ScanConfig, ScanEvent};
pub use sieve::{base_primes, sieve_segment, BasePrimes, SieveSegment};
