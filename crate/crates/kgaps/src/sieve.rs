//! Segmented sieve of Eratosthenes for arbitrary 64-bit intervals.
//!
//! [`base_primes`] produces the small primes up to `sqrt(scan limit)`;
//! [`sieve_segment`] then marks the primes in any half-open window `[lo, hi)`
//! with `base.limit()^2 >= hi`. Segments store one bit per odd integer (2 is
//! special-cased), so a 2^22-integer segment occupies 256 KiB and stays
//! cache-resident while the base primes sweep it.
//!
//! Both operations are pure: a [`BasePrimes`] is immutable after
//! construction and can be shared across threads, and any number of
//! segments may be sieved concurrently from the same base.

use thiserror::Error;

/// Upper bound accepted by [`base_primes`].
pub const MAX_BASE_PRIME_LIMIT: u64 = 1 << 32;

/// Largest window a single [`SieveSegment`] may cover.
pub const MAX_SEGMENT_LEN: u64 = 1 << 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SieveError {
    #[error("base prime limit {0} outside [2, 2^32]")]
    LimitOutOfRange(u64),
    #[error("segment [{lo}, {hi}) is empty")]
    EmptySegment { lo: u64, hi: u64 },
    #[error("segment [{lo}, {hi}) longer than the {MAX_SEGMENT_LEN}-integer maximum")]
    SegmentTooLong { lo: u64, hi: u64 },
    #[error("base primes up to {limit} cannot certify [{lo}, {hi}): limit^2 < hi")]
    BasePrimesInsufficient { limit: u64, lo: u64, hi: u64 },
}

/// All primes up to a fixed limit, in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePrimes {
    limit: u64,
    primes: Vec<u64>,
}

impl BasePrimes {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// True when `limit^2 >= hi`, i.e. this base certifies `[_, hi)`.
    pub fn covers(&self, hi: u64) -> bool {
        (self.limit as u128) * (self.limit as u128) >= hi as u128
    }
}

/// Computes every prime `<= limit` with a plain odd-only sieve.
pub fn base_primes(limit: u64) -> Result<BasePrimes, SieveError> {
    if !(2..=MAX_BASE_PRIME_LIMIT).contains(&limit) {
        return Err(SieveError::LimitOutOfRange(limit));
    }
    // Bit i represents the odd number 2i + 1; bit 0 (the unit 1) starts dead.
    let n_odd = ((limit - 1) / 2 + 1) as usize;
    let mut bits = vec![u64::MAX; n_odd.div_ceil(64)];
    clear_tail(&mut bits, n_odd);
    clear_bit(&mut bits, 0);
    let mut p = 3u64;
    while p * p <= limit {
        if get_bit(&bits, (p / 2) as usize) {
            let mut m = ((p * p) / 2) as usize;
            while m < n_odd {
                clear_bit(&mut bits, m);
                m += p as usize;
            }
        }
        p += 2;
    }
    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    primes.push(2);
    for i in 1..n_odd {
        if get_bit(&bits, i) {
            primes.push(2 * i as u64 + 1);
        }
    }
    Ok(BasePrimes { limit, primes })
}

fn prime_count_estimate(limit: u64) -> usize {
    let x = limit as f64;
    (1.2 * x / x.ln().max(1.0)) as usize + 16
}

#[inline]
fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn clear_bit(words: &mut [u64], i: usize) {
    words[i / 64] &= !(1 << (i % 64));
}

fn clear_tail(words: &mut [u64], n_bits: usize) {
    if n_bits % 64 != 0 {
        if let Some(last) = words.last_mut() {
            *last &= u64::MAX >> (64 - n_bits % 64);
        }
    }
}

/// Primality bits for the half-open interval `[lo, hi)`.
///
/// Logically one bit per integer (`is_prime(lo + i)`); physically one bit
/// per odd integer with 2 handled separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    lo: u64,
    hi: u64,
    first_odd: u64,
    n_odd: usize,
    words: Vec<u64>,
}

impl SieveSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Primality of `n`.
    ///
    /// # Panics
    /// Panics when `n` is outside `[lo, hi)`.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            self.lo <= n && n < self.hi,
            "{n} outside segment [{}, {})",
            self.lo,
            self.hi
        );
        if n % 2 == 0 {
            return n == 2;
        }
        get_bit(&self.words, ((n - self.first_odd) / 2) as usize)
    }

    /// Number of primes in `[lo, hi)`.
    pub fn count_primes(&self) -> u64 {
        let odd: u64 = self.words.iter().map(|w| w.count_ones() as u64).sum();
        odd + u64::from(self.lo <= 2 && 2 < self.hi)
    }

    /// The primes in `[lo, hi)`, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = if self.lo <= 2 && 2 < self.hi {
            Some(2)
        } else {
            None
        };
        two.into_iter().chain(
            self.words
                .iter()
                .enumerate()
                .flat_map(move |(wi, &word)| SetBits { word, base: wi * 64 })
                .map(move |i| self.first_odd + 2 * i as u64),
        )
    }

    /// Smallest odd integer `>= lo` (bit 0 of the packed words).
    pub(crate) fn first_odd(&self) -> u64 {
        self.first_odd
    }

    pub(crate) fn n_odd(&self) -> usize {
        self.n_odd
    }

    pub(crate) fn odd_words(&self) -> &[u64] {
        &self.words
    }
}

struct SetBits {
    word: u64,
    base: usize,
}

impl Iterator for SetBits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

/// Sieves `[lo, hi)` using `base`, which must satisfy `base.limit()^2 >= hi`.
pub fn sieve_segment(lo: u64, hi: u64, base: &BasePrimes) -> Result<SieveSegment, SieveError> {
    if hi <= lo {
        return Err(SieveError::EmptySegment { lo, hi });
    }
    if hi - lo > MAX_SEGMENT_LEN {
        return Err(SieveError::SegmentTooLong { lo, hi });
    }
    if !base.covers(hi) {
        return Err(SieveError::BasePrimesInsufficient {
            limit: base.limit(),
            lo,
            hi,
        });
    }

    let first_odd = lo | 1;
    let n_odd = if hi > first_odd {
        ((hi - first_odd - 1) / 2 + 1) as usize
    } else {
        0
    };
    let mut words = vec![u64::MAX; n_odd.div_ceil(64)];
    clear_tail(&mut words, n_odd);
    if first_odd == 1 && n_odd > 0 {
        clear_bit(&mut words, 0);
    }

    for &p in base.primes() {
        if p == 2 {
            continue;
        }
        let p2 = p as u128 * p as u128;
        if p2 >= hi as u128 {
            break; // primes ascend; no later prime has a multiple to mark
        }
        // First odd multiple of p in [max(p^2, lo), hi).
        let mut m = p2.max(lo.div_ceil(p) as u128 * p as u128);
        if m % 2 == 0 {
            m += p as u128;
        }
        if m >= hi as u128 {
            continue;
        }
        let mut idx = ((m as u64 - first_odd) / 2) as usize;
        while idx < n_odd {
            clear_bit(&mut words, idx);
            idx += p as usize; // stride p in odd-index space = 2p integers
        }
    }

    Ok(SieveSegment {
        lo,
        hi,
        first_odd,
        n_odd,
        words,
    })
}
