//! Work with a user-supplied offset pattern: admissibility check, density
//! constant, and a record scan.
//!
//! The default pattern {0, 2, 6, 8, 12, 18, 20, 26} is the densest
//! admissible 8-tuple. Try an inadmissible one to see the rejection:
//!
//! ```bash
//! cargo run --release --example custom_pattern
//! cargo run --release --example custom_pattern -- 0,2,6 10000000
//! cargo run --release --example custom_pattern -- 0,2,4
//! ```

use std::error::Error;

use kgaps::hlconst::{hl_constant, DEFAULT_TRUNCATION_BOUND};
use kgaps::patterns::Pattern;
use kgaps::scanner::{collect_maximal_gaps, ScanConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let offsets = args.next().unwrap_or_else(|| "0,2,6,8,12,18,20,26".into());
    let limit: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100_000_000);

    let pattern = Pattern::parse(&offsets)?;
    println!("pattern {pattern}: k = {}, span = {}", pattern.k(), pattern.span());

    // Scanning an inadmissible pattern would loop past its finitely many
    // occurrences forever, so it is rejected up front.
    if let Err(e) = pattern.require_admissible() {
        println!("rejected: {e}");
        return Ok(());
    }

    let c = hl_constant(&pattern, DEFAULT_TRUNCATION_BOUND)?;
    println!("singular series H = {:.6}, density constant C = {:.6}", c.h, c.c);

    let (records, checkpoint) = collect_maximal_gaps(&pattern, limit, &ScanConfig::default())?;
    println!("{} maximal gaps below {limit}:", records.len());
    for r in &records {
        println!("  {:>12} {:>12} {:>10}", r.p_start, r.p_next, r.gap);
    }
    if records.is_empty() && checkpoint.last_tuple_start == 0 {
        println!("  (no occurrences at all below {limit})");
    }
    Ok(())
}
