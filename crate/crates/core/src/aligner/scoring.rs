use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Match, mismatch and gap scores used by both the aligner and the
/// reference-free sum-of-pairs score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringScheme {
    pub match_score: i64,
    pub mismatch: i64,
    pub gap: i64,
}

impl Default for ScoringScheme {
    fn default() -> Self {
        Self {
            match_score: 1,
            mismatch: -1,
            gap: 0,
        }
    }
}

impl ScoringScheme {
    pub fn new(match_score: i64, mismatch: i64, gap: i64) -> Result<Self> {
        if match_score <= mismatch {
            return Err(Error::Config(format!(
                "match score ({match_score}) must exceed mismatch score ({mismatch})"
            )));
        }
        Ok(Self {
            match_score,
            mismatch,
            gap,
        })
    }

    pub fn substitution(&self, a: u32, b: u32) -> i64 {
        if a == b {
            self.match_score
        } else {
            self.mismatch
        }
    }
}
