use crate::error::{Error, Result};
use crate::model::{Alignment, ColumnHistogram};

/// Shannon entropy in bits; zero-probability terms contribute nothing.
pub fn entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Largest possible column entropy: uniform over every activity type plus the gap.
pub fn max_entropy(n_types: usize) -> f64 {
    ((n_types + 1) as f64).log2()
}

/// `1 - E / E_max` for a single column, with the gap counted as a symbol.
pub fn information_score(histogram: &ColumnHistogram, n_types: usize) -> Result<f64> {
    if n_types == 0 {
        return Err(Error::Config("information score needs at least one activity type".into()));
    }
    let e = entropy(histogram.iter().map(|(_, _, f)| f));
    Ok((1.0 - e / max_entropy(n_types)).clamp(0.0, 1.0))
}

/// `1 - sum_j E_j / (E_max * L)`: column entropies normalized by the
/// alignment length, so splitting a column only pays off when the entropy
/// it removes outweighs the extra column.
pub fn overall_information_score(a: &Alignment) -> f64 {
    let grid = a.symbol_grid();
    let n_types = grid.alphabet.len();
    let rows = a.n_rows() as f64;
    let mut counts = vec![0usize; n_types + 1];
    let mut total = 0.0;
    for j in 0..a.n_columns() {
        counts.iter_mut().for_each(|c| *c = 0);
        for row in &grid.cells {
            counts[row[j].map_or(n_types, |c| c as usize)] += 1;
        }
        total += entropy(counts.iter().map(|&c| c as f64 / rows));
    }
    1.0 - total / (max_entropy(n_types) * a.n_columns() as f64)
}
