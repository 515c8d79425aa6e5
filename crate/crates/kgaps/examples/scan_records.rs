//! Find every maximal gap between twin primes below 10^7, streaming the
//! records as the scan discovers them.
//!
//! ```bash
//! cargo run --release --example scan_records            # twins to 1e7
//! cargo run --release --example scan_records -- 4 1e9   # quadruplets to 1e9
//! ```

use std::error::Error;

use kgaps::patterns::Pattern;
use kgaps::scanner::{find_maximal_gaps, ScanConfig, ScanEvent};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let pattern = Pattern::parse(&args.next().unwrap_or_else(|| "2".into()))?;
    let limit = parse_limit(&args.next().unwrap_or_else(|| "1e7".into()))?;

    println!("maximal gaps for pattern {pattern} below {limit}:");
    println!("{:>16} {:>16} {:>12}", "p_start", "p_next", "gap");

    let checkpoint = find_maximal_gaps(&pattern, limit, None, &ScanConfig::default(), |event| {
        if let ScanEvent::Record(r) = event {
            println!("{:>16} {:>16} {:>12}", r.p_start, r.p_next, r.gap);
        }
    })?;

    println!(
        "scanned to {} ({} records, largest gap {})",
        checkpoint.scanned_to,
        checkpoint.records.len(),
        checkpoint.current_max_gap
    );
    Ok(())
}

/// Accepts plain integers and short scientific forms like "1e9".
fn parse_limit(s: &str) -> Result<u64, Box<dyn Error>> {
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let mantissa: u64 = if mantissa.is_empty() { 1 } else { mantissa.parse()? };
        let exp: u32 = exp.parse()?;
        return Ok(mantissa * 10u64.pow(exp));
    }
    Ok(s.parse()?)
}
