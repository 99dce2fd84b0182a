use std::sync::Arc;

use super::dp::{global_align, Step};
use super::ScoringScheme;
use crate::error::{Error, Result};
use crate::model::{Alignment, Cell, EncodedLog, EventLog, OccurrenceId};

/// An intermediate alignment of a subset of the log's traces, summarized as
/// per-column symbol frequencies. The last slot of each frequency vector is
/// the gap.
#[derive(Clone, Debug)]
pub struct Profile {
    source: Arc<EventLog>,
    encoded: Arc<EncodedLog>,
    members: Vec<usize>,
    rows: Vec<Vec<Cell>>,
    columns: Vec<Vec<f64>>,
}

impl Profile {
    /// Profile holding the single trace `index`.
    pub fn singleton(source: Arc<EventLog>, encoded: Arc<EncodedLog>, index: usize) -> Result<Self> {
        let len = source.len();
        let trace = source
            .traces()
            .get(index)
            .ok_or(Error::OutOfBounds { index, len })?;
        let row = (0..trace.len())
            .map(|k| Cell::Occupied(OccurrenceId::new(index, k)))
            .collect();
        Ok(Self::from_rows(source, encoded, vec![index], vec![row]))
    }

    fn from_rows(
        source: Arc<EventLog>,
        encoded: Arc<EncodedLog>,
        members: Vec<usize>,
        rows: Vec<Vec<Cell>>,
    ) -> Self {
        let n_sym = encoded.alphabet.len();
        let width = rows.first().map_or(0, Vec::len);
        let weight = 1.0 / rows.len() as f64;
        let mut columns = vec![vec![0.0; n_sym + 1]; width];
        for row in &rows {
            for (col, cell) in columns.iter_mut().zip(row) {
                let slot = match cell {
                    Cell::Gap => n_sym,
                    Cell::Occupied(o) => encoded.traces[o.trace_index][o.ordinal] as usize,
                };
                col[slot] += weight;
            }
        }
        Self {
            source,
            encoded,
            members,
            rows,
            columns,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Finishes a profile covering every trace of the log as an alignment,
    /// rows in log order.
    pub fn into_alignment(self) -> Result<Alignment> {
        let n = self.source.len();
        if self.members.len() != n {
            return Err(Error::Config(format!(
                "profile covers {} of {n} traces",
                self.members.len()
            )));
        }
        let mut ordered = vec![Vec::new(); n];
        for (member, row) in self.members.into_iter().zip(self.rows) {
            ordered[member] = row;
        }
        Alignment::new(self.source, ordered)
    }

    fn gap_slot(&self) -> usize {
        self.encoded.alphabet.len()
    }
}

/// Expected pair score between two frequency columns.
fn column_pair_score(a: &[f64], b: &[f64], gap_slot: usize, s: &ScoringScheme) -> f64 {
    let mut dot = 0.0;
    let mut non_gap_a = 0.0;
    let mut non_gap_b = 0.0;
    for k in 0..gap_slot {
        dot += a[k] * b[k];
        non_gap_a += a[k];
        non_gap_b += b[k];
    }
    let gap_pairs = a[gap_slot] * non_gap_b + non_gap_a * b[gap_slot];
    s.match_score as f64 * dot
        + s.mismatch as f64 * (non_gap_a * non_gap_b - dot)
        + s.gap as f64 * gap_pairs
}

fn column_vs_gap(a: &[f64], gap_slot: usize, s: &ScoringScheme) -> f64 {
    let non_gap: f64 = a[..gap_slot].iter().sum();
    s.gap as f64 * non_gap
}

/// Aligns two profiles with a global DP over their columns. Returns the
/// merged profile and the DP score. Existing gaps are kept.
pub fn align_profiles(p1: &Profile, p2: &Profile, scheme: &ScoringScheme) -> Result<(Profile, f64)> {
    if p1.encoded.alphabet != p2.encoded.alphabet || !Arc::ptr_eq(&p1.source, &p2.source) && *p1.source != *p2.source {
        return Err(Error::Config("profiles are over different logs or alphabets".into()));
    }
    if p1.members.iter().any(|m| p2.members.contains(m)) {
        return Err(Error::Config("profiles share member traces".into()));
    }
    let g = p1.gap_slot();
    let (steps, score) = global_align(
        p1.len(),
        p2.len(),
        0.0f64,
        |i, j| column_pair_score(&p1.columns[i], &p2.columns[j], g, scheme),
        |i| column_vs_gap(&p1.columns[i], g, scheme),
        |j| column_vs_gap(&p2.columns[j], g, scheme),
    );

    let mut rows: Vec<Vec<Cell>> = vec![Vec::with_capacity(steps.len()); p1.rows.len() + p2.rows.len()];
    let split = p1.rows.len();
    for step in &steps {
        let (left, right) = match *step {
            Step::Both(i, j) => (Some(i), Some(j)),
            Step::First(i) => (Some(i), None),
            Step::Second(j) => (None, Some(j)),
        };
        for (r, row) in p1.rows.iter().enumerate() {
            rows[r].push(left.map_or(Cell::Gap, |i| row[i]));
        }
        for (r, row) in p2.rows.iter().enumerate() {
            rows[split + r].push(right.map_or(Cell::Gap, |j| row[j]));
        }
    }
    let members = p1.members.iter().chain(&p2.members).copied().collect();
    let merged = Profile::from_rows(p1.source.clone(), p1.encoded.clone(), members, rows);
    Ok((merged, score))
}
