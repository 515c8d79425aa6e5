//! Singular-series density constants for k-tuplet patterns.
//!
//! For an admissible pattern with k offsets, the singular series is the
//! product over primes
//!
//! ```text
//! H = prod_p (1 - w(p)/p) / (1 - 1/p)^k
//! ```
//!
//! and its reciprocal C = 1/H is the coefficient in the average-gap law
//! `a ~ C * ln(x)^k` used by [`crate::predictor`]. The product is truncated
//! at a configurable prime bound: beyond the pattern's span every factor is
//! `1 - O(1/p^2)`, so the tail of the default 10^7 truncation contributes
//! less than 10^-5 in relative terms.

use serde::Serialize;
use thiserror::Error;

use crate::patterns::{Pattern, PatternError};
use crate::sieve::{base_primes, SieveError};

/// Default truncation: every prime below 10^7 enters the product.
pub const DEFAULT_TRUNCATION_BOUND: u64 = 10_000_000;

/// Smallest accepted truncation bound.
pub const MIN_TRUNCATION_BOUND: u64 = 1_000;

/// Patterns longer than this accumulate in log space instead of as a
/// direct product.
const DIRECT_PRODUCT_MAX_K: usize = 12;

#[derive(Debug, Error)]
pub enum HlError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("truncation bound {0} below the minimum {MIN_TRUNCATION_BOUND}")]
    BoundTooSmall(u64),
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// Truncated singular series H for one pattern, with C = 1/H.
#[derive(Debug, Clone, Serialize)]
pub struct HlConstant {
    pub pattern_id: String,
    pub k: usize,
    pub h: f64,
    pub c: f64,
    pub truncation_bound: u64,
    /// Crude bound on the relative size of the omitted tail:
    /// `|ln factor(p)| ~ k(k-1)/(2p^2)` past the span, summed over all
    /// integers above the bound.
    pub est_rel_error: f64,
}

/// Evaluates the truncated singular series for `pattern`.
///
/// Errors when the pattern is inadmissible (some factor would vanish and
/// C would be undefined) or the bound is below [`MIN_TRUNCATION_BOUND`].
pub fn hl_constant(pattern: &Pattern, truncation_bound: u64) -> Result<HlConstant, HlError> {
    pattern.require_admissible()?;
    if truncation_bound < MIN_TRUNCATION_BOUND {
        return Err(HlError::BoundTooSmall(truncation_bound));
    }

    let k = pattern.k();
    let span = pattern.span();
    let base = base_primes(truncation_bound)?;

    let h = if k <= DIRECT_PRODUCT_MAX_K {
        let mut h = 1.0f64;
        for &p in base.primes() {
            h *= series_factor(pattern, k, span, p);
        }
        h
    } else {
        let log_sum: f64 = base
            .primes()
            .iter()
            .map(|&p| series_factor(pattern, k, span, p).ln())
            .sum();
        log_sum.exp()
    };

    let tail = (k * (k - 1)) as f64 / 2.0 / (truncation_bound - 1) as f64;
    Ok(HlConstant {
        pattern_id: pattern.id().to_string(),
        k,
        h,
        c: 1.0 / h,
        truncation_bound,
        est_rel_error: tail,
    })
}

#[inline]
fn series_factor(pattern: &Pattern, k: usize, span: u64, p: u64) -> f64 {
    let w = if p > span {
        k
    } else {
        pattern.residue_count_of_prime(p)
    };
    let inv_p = 1.0 / p as f64;
    (1.0 - w as f64 * inv_p) / (1.0 - inv_p).powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{builtin_pattern, builtin_patterns, Pattern};

    #[test]
    fn single_prime_pattern_is_exactly_one() {
        let c = hl_constant(&builtin_pattern("1").unwrap(), 100_000).unwrap();
        assert_eq!(c.h, 1.0);
        assert_eq!(c.c, 1.0);
        assert_eq!(c.est_rel_error, 0.0);
    }

    #[test]
    fn reciprocal_identity() {
        for pat in builtin_patterns() {
            let c = hl_constant(&pat, 100_000).unwrap();
            assert!((c.c * c.h - 1.0).abs() < 1e-12, "pattern {}", pat.id());
            assert!(c.h >= 1.0, "H >= 1 for dense patterns, got {}", c.h);
        }
    }

    #[test]
    fn twin_constant_near_published_value() {
        let c = hl_constant(&builtin_pattern("2").unwrap(), 1_000_000).unwrap();
        assert!((c.c - 0.757392).abs() / 0.757392 < 1e-4, "C_2 = {}", c.c);
    }

    #[test]
    fn mirror_patterns_agree_bit_for_bit() {
        let a = hl_constant(&builtin_pattern("3a").unwrap(), 200_000).unwrap();
        let b = hl_constant(&builtin_pattern("3b").unwrap(), 200_000).unwrap();
        assert_eq!(a.h.to_bits(), b.h.to_bits());
        assert_eq!(a.c.to_bits(), b.c.to_bits());
    }

    #[test]
    fn refinement_stays_within_reported_error() {
        for pat in builtin_patterns() {
            let coarse = hl_constant(&pat, 10_000).unwrap();
            let fine = hl_constant(&pat, 100_000).unwrap();
            let rel = (fine.c - coarse.c).abs() / fine.c;
            assert!(
                rel < coarse.est_rel_error || rel == 0.0,
                "pattern {}: drift {rel} vs estimate {}",
                pat.id(),
                coarse.est_rel_error
            );
        }
    }

    #[test]
    fn inadmissible_pattern_rejected() {
        let bad = Pattern::new("0,2,4", vec![0, 2, 4]).unwrap();
        assert!(matches!(
            hl_constant(&bad, 10_000),
            Err(HlError::Pattern(PatternError::Inadmissible { p: 3, .. }))
        ));
    }

    #[test]
    fn small_bound_rejected() {
        let pat = builtin_pattern("2").unwrap();
        assert!(matches!(
            hl_constant(&pat, 999),
            Err(HlError::BoundTooSmall(999))
        ));
    }
}
