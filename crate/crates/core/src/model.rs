//! Event logs, alignments and the structural checks shared by every other module.
//!
//! An [`Alignment`] never stores activity labels directly. Each occupied cell
//! holds an [`OccurrenceId`] pointing back into the source [`EventLog`], so
//! repeated activities of the same type stay distinguishable. This is what the
//! reference-based metrics and heuristic-error counting compare.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Serialized form of a gap cell. Reserved: no activity may use it as a label.
pub const GAP: &str = "-";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Activity(String);

impl Activity {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let reason = if label.is_empty() {
            Some("label is empty")
        } else if label == GAP {
            Some("\"-\" is reserved for gaps")
        } else if label.contains(['\t', '\n', '\r']) {
            Some("label contains a tab or newline")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidActivity { label, reason }),
            None => Ok(Self(label)),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One process execution: a case id and its activities in chronological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    case_id: String,
    activities: Vec<Activity>,
}

impl Trace {
    pub fn new(case_id: impl Into<String>, activities: Vec<Activity>) -> Result<Self> {
        let case_id = case_id.into();
        if activities.is_empty() {
            return Err(Error::EmptyTrace { case_id });
        }
        Ok(Self {
            case_id,
            activities,
        })
    }

    pub fn from_labels<S: AsRef<str>>(case_id: impl Into<String>, labels: &[S]) -> Result<Self> {
        let activities = labels
            .iter()
            .map(|l| Activity::new(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(case_id, activities)
    }

    pub fn case_id(&self) -> &str {
        &self.case_id
    }

    pub fn activities(&self) -> &[Activity] {
        &self.activities
    }

    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.activities.iter().map(Activity::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EventLog {
    traces: Vec<Trace>,
}

impl EventLog {
    pub fn new(traces: Vec<Trace>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(traces.len());
        for t in &traces {
            if !seen.insert(t.case_id()) {
                return Err(Error::DuplicateCaseId(t.case_id().to_owned()));
            }
        }
        Ok(Self { traces })
    }

    /// Builds a log from `(case_id, labels)` pairs.
    pub fn from_label_rows<C: AsRef<str>, S: AsRef<str>>(rows: &[(C, Vec<S>)]) -> Result<Self> {
        let traces = rows
            .iter()
            .map(|(id, labels)| Trace::from_labels(id.as_ref(), labels))
            .collect::<Result<Vec<_>>>()?;
        Self::new(traces)
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Distinct activity labels, sorted. Always derived from the traces.
    pub fn alphabet(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.traces.iter().flat_map(Trace::labels).collect();
        set.into_iter().collect()
    }

    /// Total number of activity occurrences.
    pub fn total_activities(&self) -> usize {
        self.traces.iter().map(Trace::len).sum()
    }

    pub fn max_trace_len(&self) -> usize {
        self.traces.iter().map(Trace::len).max().unwrap_or(0)
    }

    /// Integer-coded view of the log, codes indexing into the sorted alphabet.
    pub fn encode(&self) -> EncodedLog {
        let alphabet: Vec<String> = self.alphabet().into_iter().map(str::to_owned).collect();
        let index: BTreeMap<&str, u32> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32))
            .collect();
        let traces = self
            .traces
            .iter()
            .map(|t| t.labels().map(|l| index[l]).collect())
            .collect();
        EncodedLog { alphabet, traces }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedLog {
    pub alphabet: Vec<String>,
    pub traces: Vec<Vec<u32>>,
}

/// Identity of one activity occurrence in the source log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrenceId {
    pub trace_index: usize,
    pub ordinal: usize,
}

impl OccurrenceId {
    pub fn new(trace_index: usize, ordinal: usize) -> Self {
        Self {
            trace_index,
            ordinal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Gap,
    Occupied(OccurrenceId),
}

impl Cell {
    pub fn is_gap(self) -> bool {
        matches!(self, Cell::Gap)
    }

    pub fn occurrence(self) -> Option<OccurrenceId> {
        match self {
            Cell::Gap => None,
            Cell::Occupied(o) => Some(o),
        }
    }
}

/// A structural defect found by [`Alignment::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyGrid,
    RowCount { rows: usize, traces: usize },
    Ragged { row: usize, len: usize, expected: usize },
    ForeignOccurrence { row: usize, column: usize },
    OrderViolated { row: usize, column: usize, expected: usize, found: usize },
    MissingOccurrences { row: usize, found: usize, expected: usize },
    AllGapColumn { column: usize },
    TooShort { columns: usize, l_min: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::EmptyGrid => write!(f, "grid is empty"),
            Violation::RowCount { rows, traces } => {
                write!(f, "grid has {rows} rows but the source log has {traces} traces")
            }
            Violation::Ragged { row, len, expected } => {
                write!(f, "row {row} has {len} cells, expected {expected}")
            }
            Violation::ForeignOccurrence { row, column } => {
                write!(f, "cell ({row}, {column}) refers to another trace")
            }
            Violation::OrderViolated {
                row,
                column,
                expected,
                found,
            } => write!(
                f,
                "order violated in row {row} at column {column}: expected ordinal {expected}, found {found}"
            ),
            Violation::MissingOccurrences {
                row,
                found,
                expected,
            } => write!(f, "row {row} holds {found} activities, its trace has {expected}"),
            Violation::AllGapColumn { column } => write!(f, "column {column} is all gaps"),
            Violation::TooShort { columns, l_min } => {
                write!(f, "alignment has {columns} columns, fewer than the longest trace ({l_min})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Column symbol: an activity label or the gap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Gap,
    Label(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Gap => f.write_str(GAP),
            Symbol::Label(l) => f.write_str(l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnHistogram {
    counts: BTreeMap<Symbol, usize>,
    rows: usize,
}

impl ColumnHistogram {
    pub fn count(&self, symbol: &Symbol) -> usize {
        self.counts.get(symbol).copied().unwrap_or(0)
    }

    pub fn frequency(&self, symbol: &Symbol) -> f64 {
        self.count(symbol) as f64 / self.rows as f64
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `(symbol, count, relative frequency)` in symbol order, gap first.
    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize, f64)> + '_ {
        self.counts
            .iter()
            .map(move |(s, &c)| (s, c, c as f64 / self.rows as f64))
    }
}

/// A rectangular grid of gaps and occurrence references over a source log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    source: Arc<EventLog>,
    rows: Vec<Vec<Cell>>,
}

impl Alignment {
    /// Builds an alignment and rejects it if any structural invariant fails.
    pub fn new(source: Arc<EventLog>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        let a = Self { source, rows };
        match a.validate().violations.into_iter().next() {
            Some(v) => Err(Error::InvalidAlignment(v)),
            None => Ok(a),
        }
    }

    /// Builds an alignment without checking it. Use [`Alignment::validate`] afterwards.
    pub fn from_rows_unchecked(source: Arc<EventLog>, rows: Vec<Vec<Cell>>) -> Self {
        Self { source, rows }
    }

    /// Every trace left-justified with trailing gaps up to the longest trace.
    pub fn gapless(source: Arc<EventLog>) -> Result<Self> {
        let width = source.max_trace_len();
        let rows = source
            .traces()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                (0..width)
                    .map(|k| {
                        if k < t.len() {
                            Cell::Occupied(OccurrenceId::new(i, k))
                        } else {
                            Cell::Gap
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(source, rows)
    }

    /// Builds an alignment from labelled rows, `"-"` marking gaps. The source
    /// log is whatever the rows spell once the gaps are removed.
    pub fn from_label_rows<C: AsRef<str>, S: AsRef<str>>(rows: &[(C, Vec<S>)]) -> Result<Self> {
        let mut traces = Vec::with_capacity(rows.len());
        let mut grid = Vec::with_capacity(rows.len());
        for (i, (case_id, cells)) in rows.iter().enumerate() {
            let mut labels = Vec::new();
            let mut row = Vec::with_capacity(cells.len());
            for cell in cells {
                let cell = cell.as_ref();
                if cell == GAP {
                    row.push(Cell::Gap);
                } else {
                    row.push(Cell::Occupied(OccurrenceId::new(i, labels.len())));
                    labels.push(Activity::new(cell)?);
                }
            }
            traces.push(Trace::new(case_id.as_ref(), labels)?);
            grid.push(row);
        }
        Self::new(Arc::new(EventLog::new(traces)?), grid)
    }

    pub fn source(&self) -> &EventLog {
        &self.source
    }

    pub fn source_arc(&self) -> &Arc<EventLog> {
        &self.source
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Alignment length L.
    pub fn n_columns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Shortest possible alignment length: the longest source trace.
    pub fn l_min(&self) -> usize {
        self.source.max_trace_len()
    }

    pub fn cell(&self, row: usize, column: usize) -> Cell {
        self.rows[row][column]
    }

    pub fn label(&self, occ: OccurrenceId) -> &str {
        self.source.traces()[occ.trace_index].activities()[occ.ordinal].as_str()
    }

    pub fn column(&self, column: usize) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().map(move |r| r[column])
    }

    /// True when both alignments are over equal source logs.
    pub fn same_source(&self, other: &Alignment) -> bool {
        Arc::ptr_eq(&self.source, &other.source) || *self.source == *other.source
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.rows.is_empty() {
            violations.push(Violation::EmptyGrid);
            return ValidationReport { violations };
        }
        let traces = self.source.traces();
        if self.rows.len() != traces.len() {
            violations.push(Violation::RowCount {
                rows: self.rows.len(),
                traces: traces.len(),
            });
        }
        let width = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        for (row, cells) in self.rows.iter().enumerate() {
            if cells.len() != width {
                violations.push(Violation::Ragged {
                    row,
                    len: cells.len(),
                    expected: width,
                });
            }
            let mut next = 0usize;
            let mut broken = false;
            for (column, cell) in cells.iter().enumerate() {
                let Cell::Occupied(occ) = *cell else { continue };
                if occ.trace_index != row {
                    violations.push(Violation::ForeignOccurrence { row, column });
                    broken = true;
                    break;
                }
                if occ.ordinal != next {
                    violations.push(Violation::OrderViolated {
                        row,
                        column,
                        expected: next,
                        found: occ.ordinal,
                    });
                    broken = true;
                    break;
                }
                next += 1;
            }
            let expected = traces.get(row).map_or(0, Trace::len);
            if !broken && next != expected {
                violations.push(Violation::MissingOccurrences {
                    row,
                    found: next,
                    expected,
                });
            }
        }
        for column in 0..width {
            let all_gap = self
                .rows
                .iter()
                .all(|r| r.get(column).is_none_or(|c| c.is_gap()));
            if all_gap {
                violations.push(Violation::AllGapColumn { column });
            }
        }
        if width < self.l_min() {
            violations.push(Violation::TooShort {
                columns: width,
                l_min: self.l_min(),
            });
        }
        ValidationReport { violations }
    }

    /// Reads the activities back out of the grid, dropping gaps.
    pub fn strip_gaps(&self) -> Result<EventLog> {
        if let Some(v) = self.validate().violations.into_iter().next() {
            return Err(Error::InvalidAlignment(v));
        }
        let traces = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let acts = row
                    .iter()
                    .filter_map(|c| c.occurrence())
                    .map(|o| self.source.traces()[o.trace_index].activities()[o.ordinal].clone())
                    .collect();
                Trace::new(self.source.traces()[i].case_id(), acts)
            })
            .collect::<Result<Vec<_>>>()?;
        EventLog::new(traces)
    }

    pub fn column_histogram(&self, column: usize) -> Result<ColumnHistogram> {
        let len = self.n_columns();
        if column >= len {
            return Err(Error::OutOfBounds { index: column, len });
        }
        let mut counts = BTreeMap::new();
        for cell in self.column(column) {
            let sym = match cell {
                Cell::Gap => Symbol::Gap,
                Cell::Occupied(o) => Symbol::Label(self.label(o).to_owned()),
            };
            *counts.entry(sym).or_insert(0) += 1;
        }
        Ok(ColumnHistogram {
            counts,
            rows: self.n_rows(),
        })
    }

    /// Integer-coded grid: `None` for gaps, alphabet index otherwise.
    pub fn symbol_grid(&self) -> SymbolGrid {
        let encoded = self.source.encode();
        let cells = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.occurrence().map(|o| encoded.traces[o.trace_index][o.ordinal]))
                    .collect()
            })
            .collect();
        SymbolGrid {
            alphabet: encoded.alphabet,
            cells,
        }
    }

    /// For every trace, the column of each of its occurrences in ordinal order.
    pub fn occurrence_columns(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_gap())
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }

    /// Occupied occurrences of each column, sorted.
    pub fn column_sets(&self) -> Vec<Vec<OccurrenceId>> {
        (0..self.n_columns())
            .map(|j| self.column(j).filter_map(Cell::occurrence).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolGrid {
    pub alphabet: Vec<String>,
    pub cells: Vec<Vec<Option<u32>>>,
}
