use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Alignment;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsensusEntry {
    pub column: usize,
    pub label: String,
    /// Another label had the same count; the lexicographically first won.
    pub tied: bool,
}

/// Per column, the most frequent activity if its share of all rows is
/// strictly above `majority`.
pub fn consensus_sequence(a: &Alignment, majority: f64) -> Result<Vec<ConsensusEntry>> {
    if !(majority > 0.0 && majority <= 1.0) {
        return Err(Error::Config(format!("majority must be in (0, 1], got {majority}")));
    }
    let grid = a.symbol_grid();
    let rows = a.n_rows() as f64;
    let mut counts = vec![0usize; grid.alphabet.len()];
    let mut out = Vec::new();
    for j in 0..a.n_columns() {
        counts.iter_mut().for_each(|c| *c = 0);
        for row in &grid.cells {
            if let Some(code) = row[j] {
                counts[code as usize] += 1;
            }
        }
        let best = counts.iter().copied().max().unwrap_or(0);
        if best == 0 || best as f64 / rows <= majority {
            continue;
        }
        // alphabet is sorted, so the first maximal code is the smallest label
        let winner = counts.iter().position(|&c| c == best).expect("max exists");
        out.push(ConsensusEntry {
            column: j,
            label: grid.alphabet[winner].clone(),
            tied: counts.iter().filter(|&&c| c == best).count() > 1,
        });
    }
    Ok(out)
}
