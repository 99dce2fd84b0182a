use serde::Serialize;

use crate::model::Alignment;

/// Gap fraction `P = 1 - M / (N * L)` with its attainable range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complexity {
    pub value: f64,
    /// `1 - M / (N * L_min)`: no gaps beyond padding to the longest trace.
    pub lower_bound: f64,
    /// `1 - 1 / N`: one activity per column.
    pub upper_bound: f64,
}

impl Complexity {
    pub fn within_bounds(&self) -> bool {
        const EPS: f64 = 1e-12;
        self.lower_bound <= self.value + EPS && self.value <= self.upper_bound + EPS
    }
}

pub fn alignment_complexity(a: &Alignment) -> Complexity {
    let m = a.source().total_activities() as f64;
    let n = a.n_rows() as f64;
    let c = Complexity {
        value: 1.0 - m / (n * a.n_columns() as f64),
        lower_bound: 1.0 - m / (n * a.l_min() as f64),
        upper_bound: 1.0 - 1.0 / n,
    };
    debug_assert!(c.within_bounds(), "complexity out of bounds: {c:?}");
    c
}
