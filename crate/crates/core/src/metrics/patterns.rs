//! Census of contiguous activity patterns.
//!
//! Patterns are counted in a prefix trie: every start position of every trace
//! walks down the trie one symbol at a time, bumping the count of each node it
//! passes. Each node is one distinct pattern, so the census never
//! materializes pattern label vectors unless asked to.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{EventLog, GAP};

/// A gap-free sequence of at least two activity labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<String>);

impl Pattern {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.len() < 2 {
            return Err(Error::Config(format!(
                "a pattern needs at least 2 activities, got {}",
                symbols.len()
            )));
        }
        if symbols.iter().any(|s| s == GAP || s.is_empty()) {
            return Err(Error::Config("a pattern cannot contain gaps".into()));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0.join(", "))
    }
}

/// Handle to one pattern inside a [`PatternCensus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternId(u32);

#[derive(Clone, Debug)]
struct Node {
    parent: u32,
    symbol: u32,
    depth: u32,
    count: u64,
}

#[derive(Clone, Debug)]
pub struct PatternCensus {
    alphabet: Vec<String>,
    nodes: Vec<Node>,
    children: HashMap<(u32, u32), u32>,
    min_len: usize,
    max_len: usize,
    f_max: u64,
    n_patterns: usize,
}

/// Counts every contiguous subsequence with length in `[min_len, max_len]`
/// over all traces, overlapping occurrences included. `max_len` defaults to
/// the longest trace.
pub fn extract_patterns(log: &EventLog, min_len: usize, max_len: Option<usize>) -> Result<PatternCensus> {
    if log.is_empty() {
        return Err(Error::Size("cannot extract patterns from an empty log".into()));
    }
    let max_len = max_len.unwrap_or_else(|| log.max_trace_len().max(min_len));
    if min_len < 2 {
        return Err(Error::Config(format!("min_len must be at least 2, got {min_len}")));
    }
    if max_len < min_len {
        return Err(Error::Config(format!("max_len ({max_len}) is below min_len ({min_len})")));
    }
    let encoded = log.encode();
    let mut nodes = vec![Node {
        parent: 0,
        symbol: u32::MAX,
        depth: 0,
        count: 0,
    }];
    let mut children: HashMap<(u32, u32), u32> = HashMap::new();
    for trace in &encoded.traces {
        for start in 0..trace.len() {
            let mut at = 0u32;
            for &sym in trace[start..].iter().take(max_len) {
                let next = *children.entry((at, sym)).or_insert_with(|| {
                    nodes.push(Node {
                        parent: at,
                        symbol: sym,
                        depth: nodes[at as usize].depth + 1,
                        count: 0,
                    });
                    (nodes.len() - 1) as u32
                });
                nodes[next as usize].count += 1;
                at = next;
            }
        }
    }
    let in_range = |n: &Node| (min_len..=max_len).contains(&(n.depth as usize));
    let f_max = nodes.iter().filter(|n| in_range(n)).map(|n| n.count).max().unwrap_or(0);
    let n_patterns = nodes.iter().filter(|n| in_range(n)).count();
    Ok(PatternCensus {
        alphabet: encoded.alphabet,
        nodes,
        children,
        min_len,
        max_len,
        f_max,
        n_patterns,
    })
}

impl PatternCensus {
    /// f_M: the largest occurrence count of any pattern, 0 if there are none.
    pub fn f_max(&self) -> u64 {
        self.f_max
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.n_patterns
    }

    pub fn is_empty(&self) -> bool {
        self.n_patterns == 0
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Every counted pattern with its occurrence count f_p.
    pub fn entries(&self) -> impl Iterator<Item = (PatternId, u64)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| (self.min_len..=self.max_len).contains(&(n.depth as usize)))
            .map(|(i, n)| (PatternId(i as u32), n.count))
    }

    pub fn count(&self, id: PatternId) -> u64 {
        self.nodes[id.0 as usize].count
    }

    pub fn pattern_len(&self, id: PatternId) -> usize {
        self.nodes[id.0 as usize].depth as usize
    }

    /// Alphabet codes of the pattern, first symbol first.
    pub fn codes(&self, id: PatternId) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.pattern_len(id));
        let mut at = id.0;
        while at != 0 {
            let n = &self.nodes[at as usize];
            out.push(n.symbol);
            at = n.parent;
        }
        out.reverse();
        out
    }

    pub fn pattern(&self, id: PatternId) -> Pattern {
        Pattern(
            self.codes(id)
                .into_iter()
                .map(|c| self.alphabet[c as usize].clone())
                .collect(),
        )
    }

    /// Occurrence count of `p`, 0 if it was never seen or is outside the length bounds.
    pub fn count_of(&self, p: &Pattern) -> u64 {
        if !(self.min_len..=self.max_len).contains(&p.len()) {
            return 0;
        }
        let mut at = 0u32;
        for label in p.symbols() {
            let Ok(code) = self.alphabet.binary_search(label) else { return 0 };
            match self.children.get(&(at, code as u32)) {
                Some(&next) => at = next,
                None => return 0,
            }
        }
        self.nodes[at as usize].count
    }

    /// The pattern with the highest count; ties go to the shorter pattern,
    /// then to the lexicographically smaller one.
    pub fn most_frequent(&self) -> Option<PatternId> {
        self.entries()
            .filter(|&(_, c)| c == self.f_max)
            .map(|(id, _)| (self.pattern_len(id), self.codes(id), id))
            .min()
            .map(|t| t.2)
    }

    /// Patterns with `f_p > ratio * f_M`, in a stable order. A count equal
    /// to the threshold up to rounding is not eligible.
    pub fn eligible(&self, tf_ratio: f64) -> Vec<PatternId> {
        let threshold = tf_ratio * self.f_max as f64;
        self.entries()
            .filter(|&(_, c)| c as f64 > threshold + 1e-9)
            .map(|(id, _)| id)
            .collect()
    }

    /// Pattern counts by frequency band and pattern length. Band `b` holds
    /// patterns with `f_p / f_M` in `(b / bands, (b + 1) / bands]`; band 0
    /// also takes the lower edge.
    pub fn frequency_histogram(&self, bands: usize) -> Vec<HistogramBin> {
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        if self.f_max == 0 || bands == 0 {
            return Vec::new();
        }
        for (id, c) in self.entries() {
            let ratio = c as f64 / self.f_max as f64;
            let band = ((ratio * bands as f64).ceil() as usize).clamp(1, bands) - 1;
            *counts.entry((band, self.pattern_len(id))).or_insert(0) += 1;
        }
        let mut bins: Vec<HistogramBin> = counts
            .into_iter()
            .map(|((band, length), patterns)| HistogramBin {
                lower: band as f64 / bands as f64,
                upper: (band + 1) as f64 / bands as f64,
                length,
                patterns,
            })
            .collect();
        bins.sort_by(|a, b| a.lower.total_cmp(&b.lower).then(a.length.cmp(&b.length)));
        bins
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub length: usize,
    pub patterns: usize,
}
