//! k-tuplet offset patterns and their residue arithmetic.
//!
//! A pattern is the offset signature of a prime constellation: the
//! quadruplet {p, p+2, p+6, p+8} is the pattern `{0, 2, 6, 8}`. The ten
//! built-in patterns are the densest admissible signatures for k = 1..=7;
//! ids carry the a/b suffix where two dense patterns of the same length
//! exist (3a/3b, 5a/5b, 7a/7b).
//!
//! `w(p) = residue_count(p)` is the number of residue classes mod p the
//! offsets occupy. A pattern is admissible when w(p) < p for every prime;
//! inadmissible patterns (such as {0, 2, 4}) occur at most finitely often,
//! and the singular-series product over w(p) yields the density constants
//! in [`crate::hlconst`].

use serde::Serialize;
use thiserror::Error;

use crate::primality;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern needs at least one offset")]
    Empty,
    #[error("offsets must start at 0, got {0}")]
    FirstOffsetNotZero(u64),
    #[error("offsets must be strictly ascending, got {0} before {1}")]
    NotAscending(u64, u64),
    #[error("cannot parse {0:?} as a pattern (expected a built-in id or comma-separated offsets)")]
    Unparseable(String),
    #[error("unknown built-in pattern id {0:?}")]
    UnknownId(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("pattern {id} is inadmissible: its offsets cover every residue class mod {p}")]
    Inadmissible { id: String, p: u64 },
}

/// Offset signature of a prime k-tuplet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pattern {
    id: String,
    offsets: Vec<u64>,
}

impl Pattern {
    /// Builds a pattern after validating the offset structure
    /// (non-empty, starting at 0, strictly ascending).
    pub fn new(id: impl Into<String>, offsets: Vec<u64>) -> Result<Self, PatternError> {
        match offsets.first() {
            None => return Err(PatternError::Empty),
            Some(&d) if d != 0 => return Err(PatternError::FirstOffsetNotZero(d)),
            _ => {}
        }
        for pair in offsets.windows(2) {
            if pair[1] <= pair[0] {
                return Err(PatternError::NotAscending(pair[0], pair[1]));
            }
        }
        Ok(Pattern {
            id: id.into(),
            offsets,
        })
    }

    /// Parses a built-in id ("2", "7a", ...) or a list of offsets like
    /// "0,2,6,8". Custom patterns get a comma-free id ("0+2+6+8") so they
    /// stay one field in CSV output; that form parses back too.
    pub fn parse(s: &str) -> Result<Self, PatternError> {
        let s = s.trim();
        if let Ok(p) = builtin_pattern(s) {
            return Ok(p);
        }
        if !s.contains([',', '+']) && s.parse::<u64>() != Ok(0) {
            // Not offsets either; report it as an unknown id.
            return Err(PatternError::UnknownId(s.to_string()));
        }
        let offsets = s
            .split([',', '+'])
            .map(|part| part.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PatternError::Unparseable(s.to_string()))?;
        let id = offsets
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("+");
        Pattern::new(id, offsets)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    /// Tuple length k.
    pub fn k(&self) -> usize {
        self.offsets.len()
    }

    /// Largest offset.
    pub fn span(&self) -> u64 {
        *self.offsets.last().expect("patterns are non-empty")
    }

    /// w(p): how many residue classes mod p the offsets occupy.
    /// Errors when `p` is not prime.
    pub fn residue_count(&self, p: u64) -> Result<usize, PatternError> {
        if !primality::is_prime(p) {
            return Err(PatternError::NotPrime(p));
        }
        Ok(self.residue_count_of_prime(p))
    }

    /// w(p) for a caller-certified prime p.
    pub(crate) fn residue_count_of_prime(&self, p: u64) -> usize {
        if p > self.span() {
            // Offsets are distinct values below p, so every residue differs.
            return self.k();
        }
        let mut residues: Vec<u64> = self.offsets.iter().map(|d| d % p).collect();
        residues.sort_unstable();
        residues.dedup();
        residues.len()
    }

    /// True when no prime has all residue classes covered, i.e. the pattern
    /// can recur infinitely often. Only primes `p <= k` need checking: for
    /// `p > k` the k offsets occupy at most k < p classes.
    pub fn is_admissible(&self) -> bool {
        self.first_obstruction().is_none()
    }

    /// The smallest prime whose residue classes are all covered, if any.
    pub fn first_obstruction(&self) -> Option<u64> {
        (2..=self.k() as u64)
            .filter(|&p| primality::is_prime(p))
            .find(|&p| self.residue_count_of_prime(p) as u64 == p)
    }

    /// Errors with the obstructing prime when the pattern is inadmissible.
    pub fn require_admissible(&self) -> Result<(), PatternError> {
        match self.first_obstruction() {
            None => Ok(()),
            Some(p) => Err(PatternError::Inadmissible {
                id: self.id.clone(),
                p,
            }),
        }
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let offsets = self
            .offsets
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "{} {{{}}}", self.id, offsets)
    }
}

const BUILTINS: [(&str, &[u64]); 10] = [
    ("1", &[0]),
    ("2", &[0, 2]),
    ("3a", &[0, 2, 6]),
    ("3b", &[0, 4, 6]),
    ("4", &[0, 2, 6, 8]),
    ("5a", &[0, 2, 6, 8, 12]),
    ("5b", &[0, 4, 6, 10, 12]),
    ("6", &[0, 4, 6, 10, 12, 16]),
    ("7a", &[0, 2, 8, 12, 14, 18, 20]),
    ("7b", &[0, 2, 6, 8, 12, 18, 20]),
];

/// The ten densest patterns for k = 1..=7, in id order.
pub fn builtin_patterns() -> Vec<Pattern> {
    BUILTINS
        .iter()
        .map(|(id, offsets)| Pattern {
            id: (*id).to_string(),
            offsets: offsets.to_vec(),
        })
        .collect()
}

/// Looks up one built-in pattern by id.
pub fn builtin_pattern(id: &str) -> Result<Pattern, PatternError> {
    BUILTINS
        .iter()
        .find(|(bid, _)| *bid == id)
        .map(|(id, offsets)| Pattern {
            id: (*id).to_string(),
            offsets: offsets.to_vec(),
        })
        .ok_or_else(|| PatternError::UnknownId(id.to_string()))
}
