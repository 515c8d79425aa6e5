//! Heuristic growth laws for record gaps.
//!
//! Tuplets with density constant C occur with average gap
//! `a ~ C * ln(x)^k` near x, and the record gap below x is expected to
//! grow like
//!
//! ```text
//! G(x) ~ a * ln(x/a) - b*a,   b = 2/k,
//! ```
//!
//! which stays below the conjectured envelope `C * ln(x)^(k+1)`. Natural
//! logarithms throughout. [`check_bound`] tests a computed record against
//! that envelope, evaluated at x = p_next (the gap's endpoint; callers who
//! prefer the start can evaluate [`expected_max_gap`] at p_start instead).

use serde::Serialize;
use thiserror::Error;

use crate::hlconst::HlConstant;
use crate::scanner::GapRecord;

#[derive(Debug, Error, PartialEq)]
pub enum PredictError {
    #[error("x must be at least 3, got {0}")]
    XTooSmall(u64),
    #[error("record belongs to pattern {record:?}, constant to {constant:?}")]
    PatternMismatch { record: String, constant: String },
}

/// Forecast of the expected and bounding record gap at one x.
#[derive(Debug, Clone, Serialize)]
pub struct GapForecast {
    pub pattern_id: String,
    pub x: u64,
    /// Average inter-tuple gap `C * ln(x)^k`.
    pub a: f64,
    /// Correction coefficient `2/k`.
    pub b: f64,
    /// Expected record gap `a * ln(x/a) - b*a`.
    pub g_expected: f64,
    /// Conjectured envelope `C * ln(x)^(k+1)`.
    pub g_bound: f64,
}

/// Average gap `a = C * ln(x)^k` between tuples near x.
pub fn average_gap(constant: &HlConstant, x: u64) -> Result<f64, PredictError> {
    if x < 3 {
        return Err(PredictError::XTooSmall(x));
    }
    Ok(constant.c * (x as f64).ln().powi(constant.k as i32))
}

/// Expected record gap and conjectured envelope at x.
pub fn expected_max_gap(constant: &HlConstant, x: u64) -> Result<GapForecast, PredictError> {
    let a = average_gap(constant, x)?;
    let b = 2.0 / constant.k as f64;
    let g_expected = a * (x as f64 / a).ln() - b * a;
    let g_bound = constant.c * (x as f64).ln().powi(constant.k as i32 + 1);
    Ok(GapForecast {
        pattern_id: constant.pattern_id.clone(),
        x,
        a,
        b,
        g_expected,
        g_bound,
    })
}

/// True when the record gap is below the conjectured envelope
/// `C * ln(p_next)^(k+1)`.
pub fn check_bound(record: &GapRecord, constant: &HlConstant) -> Result<bool, PredictError> {
    if record.pattern_id != constant.pattern_id {
        return Err(PredictError::PatternMismatch {
            record: record.pattern_id.clone(),
            constant: constant.pattern_id.clone(),
        });
    }
    let bound = constant.c * (record.p_next as f64).ln().powi(constant.k as i32 + 1);
    Ok((record.gap as f64) < bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hlconst::hl_constant;
    use crate::patterns::builtin_pattern;

    fn constant(id: &str) -> HlConstant {
        hl_constant(&builtin_pattern(id).unwrap(), 1_000_000).unwrap()
    }

    fn record(id: &str, p_start: u64, p_next: u64) -> GapRecord {
        GapRecord {
            pattern_id: id.to_string(),
            p_start,
            p_next,
            gap: p_next - p_start,
        }
    }

    #[test]
    fn average_gap_for_single_primes_is_log_x() {
        let c1 = constant("1");
        let a = average_gap(&c1, 3).unwrap();
        assert!((a - 3f64.ln()).abs() < 1e-12);
        assert!((a - 1.0986).abs() < 1e-3);
    }

    #[test]
    fn average_gap_examples_at_1e15() {
        let x = 1_000_000_000_000_000;
        let ln_x = 1e15f64.ln();
        let a2 = average_gap(&constant("2"), x).unwrap();
        assert!((a2 - 0.757392 * ln_x.powi(2)).abs() / a2 < 1e-4);
        let a5 = average_gap(&constant("5a"), x).unwrap();
        assert!((a5 - 0.0986992 * ln_x.powi(5)).abs() / a5 < 1e-4);
    }

    #[test]
    fn x_below_three_rejected() {
        assert_eq!(average_gap(&constant("2"), 2), Err(PredictError::XTooSmall(2)));
        assert!(expected_max_gap(&constant("2"), 0).is_err());
    }

    #[test]
    fn expected_gap_crosses_zero_at_a_times_exp_b() {
        // Fixed point of x = a(x) * e^b, found by iteration.
        let c = constant("2");
        let mut x = 100.0f64;
        for _ in 0..200 {
            x = (c.c * x.ln().powi(2)) * (2.0 / 2.0f64).exp();
        }
        let f = expected_max_gap(&c, x.round() as u64).unwrap();
        assert!(
            f.g_expected.abs() < 0.02 * f.a,
            "g_expected {} should be near zero (a = {})",
            f.g_expected,
            f.a
        );
    }

    #[test]
    fn twin_forecast_brackets_last_published_record() {
        // Largest tabulated twin record: gap 23382 ending at ~1.12e15.
        let f = expected_max_gap(&constant("2"), 1_120_000_000_000_000).unwrap();
        let ratio = f.g_expected / 23382.0;
        assert!(
            (0.8..=1.2).contains(&ratio),
            "forecast {} vs actual 23382 (ratio {ratio})",
            f.g_expected
        );
    }

    #[test]
    fn single_prime_bound_exceeds_largest_tabulated_gap() {
        // ln(4e18)^2 ~ 1834 against the record gap 1476.
        let f = expected_max_gap(&constant("1"), 4_000_000_000_000_000_000).unwrap();
        assert!((f.g_bound - 4e18f64.ln().powi(2)).abs() < 1e-9 * f.g_bound);
        assert!(f.g_bound > 1476.0);
        assert!((f.g_bound - 1834.0).abs() < 1.0);
    }

    #[test]
    fn check_bound_examples() {
        let c2 = constant("2");
        assert!(check_bound(&record("2", 24_857_578_817, 24_857_585_369), &c2).unwrap());
        let c1 = constant("1");
        assert!(check_bound(&record("1", 1327, 1361), &c1).unwrap());
        assert!(check_bound(&record("1", 2, 3), &c1).unwrap());
    }

    #[test]
    fn check_bound_rejects_mismatched_pattern() {
        let c2 = constant("2");
        assert_eq!(
            check_bound(&record("4", 5, 11), &c2),
            Err(PredictError::PatternMismatch {
                record: "4".to_string(),
                constant: "2".to_string(),
            })
        );
    }

    #[test]
    fn expected_stays_below_bound_on_log_grid() {
        for id in ["1", "2", "3a", "4", "5b", "6", "7a"] {
            let c = constant(id);
            let mut x = 100u64;
            while x <= 1_000_000_000_000_000_000 {
                let f = expected_max_gap(&c, x).unwrap();
                if f.g_expected > 0.0 {
                    assert!(
                        f.g_expected <= f.g_bound,
                        "pattern {id} at x = {x}: {} > {}",
                        f.g_expected,
                        f.g_bound
                    );
                }
                x = x.saturating_mul(10);
            }
        }
    }

    #[test]
    fn forecasts_increase_with_x() {
        let c = constant("4");
        let mut prev_a = 0.0;
        let mut prev_bound = 0.0;
        let mut x = 100u64;
        while x <= 1_000_000_000_000_000_000 {
            let f = expected_max_gap(&c, x).unwrap();
            assert!(f.a > prev_a && f.g_bound > prev_bound, "x = {x}");
            prev_a = f.a;
            prev_bound = f.g_bound;
            x = x.saturating_mul(10);
        }
    }
}
