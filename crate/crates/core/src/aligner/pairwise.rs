use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::dp::{global_align, Step};
use super::ScoringScheme;
use crate::error::{Error, Result};
use crate::model::{Alignment, Cell, EventLog, OccurrenceId, Trace};

#[derive(Clone, Debug)]
pub struct PairwiseAlignment {
    pub alignment: Alignment,
    pub score: i64,
}

/// Optimal global alignment of two traces.
pub fn pairwise_align(t1: &Trace, t2: &Trace, scheme: &ScoringScheme) -> Result<PairwiseAlignment> {
    let log = Arc::new(EventLog::new(vec![t1.clone(), t2.clone()])?);
    let encoded = log.encode();
    let (steps, score) = align_codes(&encoded.traces[0], &encoded.traces[1], scheme);
    let mut rows = vec![Vec::with_capacity(steps.len()), Vec::with_capacity(steps.len())];
    for step in steps {
        let (a, b) = match step {
            Step::Both(i, j) => (Some(i), Some(j)),
            Step::First(i) => (Some(i), None),
            Step::Second(j) => (None, Some(j)),
        };
        rows[0].push(a.map_or(Cell::Gap, |i| Cell::Occupied(OccurrenceId::new(0, i))));
        rows[1].push(b.map_or(Cell::Gap, |j| Cell::Occupied(OccurrenceId::new(1, j))));
    }
    Ok(PairwiseAlignment {
        alignment: Alignment::new(log, rows)?,
        score,
    })
}

pub(crate) fn align_codes(a: &[u32], b: &[u32], s: &ScoringScheme) -> (Vec<Step>, i64) {
    global_align(
        a.len(),
        b.len(),
        0i64,
        |i, j| s.substitution(a[i], b[j]),
        |_| s.gap,
        |_| s.gap,
    )
}

/// Symmetric matrix of normalized alignment-score distances in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Config("distance matrix must be square".into()));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        let d = Self { n, values };
        for i in 0..n {
            if d.get(i, i) != 0.0 {
                return Err(Error::Config(format!("distance matrix diagonal ({i}, {i}) is not zero")));
            }
            for j in 0..i {
                if (d.get(i, j) - d.get(j, i)).abs() > 1e-12 || d.get(i, j).is_nan() {
                    return Err(Error::Config(format!("distance matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Copy with every off-diagonal pair scaled by `factor(i, j)`, `i < j`.
    pub fn scaled(&self, mut factor: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = self.get(i, j) * factor(i, j);
                out.values[i * self.n + j] = v;
                out.values[j * self.n + i] = v;
            }
        }
        out
    }
}

/// `d(i, j) = 1 - score(i, j) / (match * min(|Ti|, |Tj|))`, clamped to `[0, 1]`.
pub fn distance_matrix(log: &EventLog, scheme: &ScoringScheme) -> Result<DistanceMatrix> {
    let n = log.len();
    if n < 2 {
        return Err(Error::Size(format!("distance matrix needs at least 2 traces, got {n}")));
    }
    let encoded = log.encode();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let dists: HashMap<(usize, usize), f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&encoded.traces[i], &encoded.traces[j]);
            let (_, score) = align_codes(a, b, scheme);
            let max_possible = scheme.match_score as f64 * a.len().min(b.len()) as f64;
            let d = if max_possible > 0.0 {
                (1.0 - score as f64 / max_possible).clamp(0.0, 1.0)
            } else {
                1.0
            };
            ((i, j), d)
        })
        .collect();
    let mut values = vec![0.0; n * n];
    for ((i, j), d) in dists {
        values[i * n + j] = d;
        values[j * n + i] = d;
    }
    Ok(DistanceMatrix { n, values })
}
