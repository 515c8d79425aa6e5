//! Compute the Hardy-Littlewood singular-series constants for all ten
//! built-in patterns.
//!
//! Mirror-image patterns (3a/3b, 5a/5b, 7a/7b) occupy the same residue
//! classes modulo every prime, so their constants agree bit for bit.
//!
//! ```bash
//! cargo run --release --example hardy_littlewood_constants
//! ```

use std::error::Error;

use kgaps::hlconst::{hl_constant, DEFAULT_TRUNCATION_BOUND};
use kgaps::patterns::builtin_patterns;

fn main() -> Result<(), Box<dyn Error>> {
    println!(
        "singular series truncated at p < {DEFAULT_TRUNCATION_BOUND} (tail below est_rel_error)\n"
    );
    println!(
        "{:>8} {:>3} {:>16} {:>16} {:>14}",
        "pattern", "k", "H", "C = 1/H", "est_rel_error"
    );
    for pattern in builtin_patterns() {
        let c = hl_constant(&pattern, DEFAULT_TRUNCATION_BOUND)?;
        println!(
            "{:>8} {:>3} {:>16.10} {:>16.10} {:>14.2e}",
            c.pattern_id, c.k, c.h, c.c, c.est_rel_error
        );
    }
    Ok(())
}
