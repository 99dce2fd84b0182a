//! Pattern misalignment scores.
//!
//! For one pattern and one pair of traces, the k-th instance in one trace is
//! matched with the k-th instance in the other (instances ordered by start
//! position). A matched pair costs the column distance between the two
//! instance starts, plus 1 if any activity of either instance faces a gap or
//! an activity outside the pattern in the other trace. Every instance left
//! without a partner costs 1. The score of a pattern sums this over all
//! unordered trace pairs.

use rayon::prelude::*;

use super::patterns::{Pattern, PatternCensus, PatternId};
use crate::error::{Error, Result};
use crate::model::Alignment;

/// Alignment pre-digested for repeated pattern scoring.
pub(crate) struct MisalignmentIndex {
    alphabet: Vec<String>,
    traces: Vec<Vec<u32>>,
    columns: Vec<Vec<usize>>,
    cells: Vec<Vec<Option<u32>>>,
}

impl MisalignmentIndex {
    pub(crate) fn new(a: &Alignment) -> Self {
        let grid = a.symbol_grid();
        let encoded = a.source().encode();
        Self {
            alphabet: grid.alphabet,
            traces: encoded.traces,
            columns: a.occurrence_columns(),
            cells: grid.cells,
        }
    }

    fn encode(&self, labels: &[String]) -> Option<Vec<u32>> {
        labels
            .iter()
            .map(|l| self.alphabet.binary_search(l).ok().map(|c| c as u32))
            .collect()
    }

    /// True when some activity of the instance starting at `start` in `row`
    /// faces a gap or a non-pattern activity in `other`.
    fn deviates(&self, pattern: &[u32], row: usize, start: usize, other: usize) -> bool {
        (0..pattern.len()).any(|t| {
            let col = self.columns[row][start + t];
            match self.cells[other][col] {
                None => true,
                Some(code) => !pattern.contains(&code),
            }
        })
    }

    pub(crate) fn score_codes(&self, pattern: &[u32]) -> u64 {
        let m = pattern.len();
        let instances: Vec<Vec<usize>> = self
            .traces
            .iter()
            .map(|t| {
                if t.len() < m {
                    return Vec::new();
                }
                (0..=t.len() - m).filter(|&s| t[s..s + m] == *pattern).collect()
            })
            .collect();
        let mut total = 0u64;
        for i in 0..instances.len() {
            for j in (i + 1)..instances.len() {
                total += self.pair_score(pattern, i, &instances[i], j, &instances[j]);
            }
        }
        total
    }

    fn pair_score(&self, pattern: &[u32], i: usize, inst_i: &[usize], j: usize, inst_j: &[usize]) -> u64 {
        let matched = inst_i.len().min(inst_j.len());
        let mut score = (inst_i.len().max(inst_j.len()) - matched) as u64;
        for k in 0..matched {
            let (si, sj) = (inst_i[k], inst_j[k]);
            score += self.columns[i][si].abs_diff(self.columns[j][sj]) as u64;
            if self.deviates(pattern, i, si, j) || self.deviates(pattern, j, sj, i) {
                score += 1;
            }
        }
        score
    }

    pub(crate) fn score(&self, p: &Pattern) -> u64 {
        match self.encode(p.symbols()) {
            Some(codes) => self.score_codes(&codes),
            None => 0,
        }
    }
}

/// Misalignment score of one pattern over every unordered pair of traces.
/// A pattern with no instances scores 0.
pub fn misalignment_score(a: &Alignment, p: &Pattern) -> u64 {
    MisalignmentIndex::new(a).score(p)
}

/// Frequency-weighted mean of pattern misalignment scores:
/// `(1 / |E|) * sum over p in E of MS_p * f_p / f_M`, where `E` holds the
/// patterns with `f_p >= tf_ratio * f_M`.
pub fn overall_misalignment_score(a: &Alignment, census: &PatternCensus, tf_ratio: f64) -> Result<f64> {
    let eligible = eligible_patterns(census, tf_ratio)?;
    let index = MisalignmentIndex::new(a);
    Ok(weighted_mean(&index, census, &eligible))
}

pub(crate) fn eligible_patterns(census: &PatternCensus, tf_ratio: f64) -> Result<Vec<PatternId>> {
    if !(tf_ratio > 0.0 && tf_ratio <= 1.0) {
        return Err(Error::Config(format!("tf_ratio must be in (0, 1], got {tf_ratio}")));
    }
    if census.is_empty() {
        return Err(Error::Size("pattern census is empty".into()));
    }
    let eligible = census.eligible(tf_ratio);
    if eligible.is_empty() {
        return Err(Error::ThresholdTooHigh { tf_ratio });
    }
    Ok(eligible)
}

pub(crate) fn weighted_mean(index: &MisalignmentIndex, census: &PatternCensus, eligible: &[PatternId]) -> f64 {
    let f_max = census.f_max() as f64;
    let terms: Vec<f64> = eligible
        .par_iter()
        .map(|&id| {
            let ms = index.score(&census.pattern(id)) as f64;
            ms * census.count(id) as f64 / f_max
        })
        .collect();
    terms.iter().sum::<f64>() / eligible.len() as f64
}
