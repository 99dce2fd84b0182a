use std::collections::HashMap;

use crate::aligner::ScoringScheme;
use crate::error::{Error, Result};
use crate::model::{Alignment, OccurrenceId};

fn pairs(n: usize) -> u64 {
    (n as u64) * (n.saturating_sub(1) as u64) / 2
}

/// Reference-free sum-of-pairs score: every unordered row pair in every
/// column scores match, mismatch, gap (activity against gap) or 0 (two gaps).
pub fn ref_free_sps(a: &Alignment, scheme: &ScoringScheme) -> i64 {
    let grid = a.symbol_grid();
    let mut counts = vec![0usize; grid.alphabet.len()];
    let mut total = 0i64;
    for j in 0..a.n_columns() {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut gaps = 0usize;
        for row in &grid.cells {
            match row[j] {
                Some(code) => counts[code as usize] += 1,
                None => gaps += 1,
            }
        }
        let occupied = a.n_rows() - gaps;
        let matches: u64 = counts.iter().map(|&c| pairs(c)).sum();
        let mismatches = pairs(occupied) - matches;
        total += scheme.match_score * matches as i64
            + scheme.mismatch * mismatches as i64
            + scheme.gap * (gaps * occupied) as i64;
    }
    total
}

fn check_same_source(a: &Alignment, reference: &Alignment) -> Result<()> {
    if a.same_source(reference) {
        Ok(())
    } else {
        Err(Error::SourceMismatch)
    }
}

/// Column index of every occurrence, keyed by occurrence.
fn column_of(a: &Alignment) -> HashMap<OccurrenceId, usize> {
    let mut map = HashMap::with_capacity(a.source().total_activities());
    for row in a.rows() {
        for (j, cell) in row.iter().enumerate() {
            if let Some(o) = cell.occurrence() {
                map.insert(o, j);
            }
        }
    }
    map
}

/// Fraction of the reference's co-column occurrence pairs that are also
/// co-column in `a`.
pub fn ref_based_sps(a: &Alignment, reference: &Alignment) -> Result<f64> {
    check_same_source(a, reference)?;
    let ref_pairs: u64 = reference.column_sets().iter().map(|c| pairs(c.len())).sum();
    if ref_pairs == 0 {
        return Err(Error::DegenerateReference);
    }
    let ref_col = column_of(reference);
    let mut shared = 0u64;
    let mut groups: HashMap<usize, usize> = HashMap::new();
    for column in a.column_sets() {
        groups.clear();
        for o in &column {
            *groups.entry(ref_col[o]).or_insert(0) += 1;
        }
        shared += groups.values().map(|&n| pairs(n)).sum::<u64>();
    }
    Ok(shared as f64 / ref_pairs as f64)
}

/// Fraction of the columns of `a` whose occurrence set equals some reference
/// column exactly.
pub fn column_score(a: &Alignment, reference: &Alignment) -> Result<f64> {
    check_same_source(a, reference)?;
    if reference.column_sets().iter().all(|c| c.len() < 2) {
        return Err(Error::DegenerateReference);
    }
    let mut available: HashMap<Vec<OccurrenceId>, usize> = HashMap::new();
    for c in reference.column_sets() {
        *available.entry(c).or_insert(0) += 1;
    }
    let mut correct = 0usize;
    for c in a.column_sets() {
        if let Some(n) = available.get_mut(&c) {
            if *n > 0 {
                *n -= 1;
                correct += 1;
            }
        }
    }
    Ok(correct as f64 / a.n_columns() as f64)
}

/// Number of occurrences whose set of co-column partners differs between `a`
/// and the reference.
pub fn count_heuristic_errors(a: &Alignment, reference: &Alignment) -> Result<usize> {
    check_same_source(a, reference)?;
    let sets_a = a.column_sets();
    let sets_r = reference.column_sets();
    let col_a = column_of(a);
    let col_r = column_of(reference);
    Ok(col_a
        .iter()
        .filter(|(o, ja)| sets_a[**ja] != sets_r[col_r[*o]])
        .count())
}
