//! Rescan every built-in pattern up to 10^8 and verify the records against
//! the embedded reference tables, row by row.
//!
//! ```bash
//! cargo run --release --example verify_tables            # limit 1e8
//! cargo run --release --example verify_tables -- 1000000000
//! ```

use std::error::Error;

use kgaps::patterns::builtin_patterns;
use kgaps::reference::verify_against_reference;
use kgaps::scanner::{collect_maximal_gaps, ScanConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let limit: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(100_000_000);

    let mut all_ok = true;
    for pattern in builtin_patterns() {
        let (records, _) = collect_maximal_gaps(&pattern, limit, &ScanConfig::default())?;
        let report = verify_against_reference(&records, pattern.id(), limit)?;
        println!(
            "pattern {:>3}: {:>3} records matched, {} missing, {} extra -> {}",
            report.pattern_id,
            report.matched,
            report.missing.len(),
            report.extra.len(),
            if report.is_exact_match() { "ok" } else { "MISMATCH" }
        );
        all_ok &= report.is_exact_match();
    }

    if !all_ok {
        return Err("computed records disagree with the reference tables".into());
    }
    println!("\nall scans reproduce the reference tables below {limit}");
    Ok(())
}
