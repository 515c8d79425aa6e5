//! Compare actual record gaps against the heuristic growth law
//! `G(x) ~ a*ln(x/a) - (2/k)*a` with `a = C*ln(x)^k`, evaluating each
//! reference record at x = p_next.
//!
//! The ratio column shows actual/expected; the law tracks the records
//! within a few tens of percent across twelve orders of magnitude.
//!
//! ```bash
//! cargo run --release --example gap_forecast           # twins
//! cargo run --release --example gap_forecast -- 7a
//! ```

use std::error::Error;

use kgaps::hlconst::{hl_constant, DEFAULT_TRUNCATION_BOUND};
use kgaps::patterns::Pattern;
use kgaps::predictor::expected_max_gap;
use kgaps::reference::reference_table;

fn main() -> Result<(), Box<dyn Error>> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "2".into());
    let pattern = Pattern::parse(&id)?;
    let constant = hl_constant(&pattern, DEFAULT_TRUNCATION_BOUND)?;
    let table = reference_table(pattern.id())?;

    println!("pattern {pattern}: expected vs actual record gaps\n");
    println!(
        "{:>20} {:>14} {:>14} {:>8}",
        "x = p_next", "actual gap", "expected", "ratio"
    );
    for row in table.rows() {
        let forecast = expected_max_gap(&constant, row.p_next)?;
        // The law is asymptotic; skip the first few records where the
        // expected value is still tiny or negative.
        if forecast.g_expected < 1.0 {
            continue;
        }
        println!(
            "{:>20} {:>14} {:>14.0} {:>8.3}",
            row.p_next,
            row.gap,
            forecast.g_expected,
            row.gap as f64 / forecast.g_expected
        );
    }
    Ok(())
}
