//! Alignment quality metrics: accuracy (sum-of-pairs, column score,
//! misalignment), confidence (information scores) and complexity.

mod complexity;
mod consensus;
mod information;
mod misalignment;
mod patterns;
mod report;
mod sps;

pub use complexity::{alignment_complexity, Complexity};
pub use consensus::{consensus_sequence, ConsensusEntry};
pub use information::{entropy, information_score, max_entropy, overall_information_score};
pub use misalignment::{misalignment_score, overall_misalignment_score};
pub use patterns::{extract_patterns, HistogramBin, Pattern, PatternCensus, PatternId};
pub use report::{
    evaluate, AccuracyMetrics, AlignmentShape, ConfidenceMetrics, EvaluationParams, MetricReport, PatternScore,
    REPORT_SCHEMA_VERSION,
};
pub use sps::{column_score, count_heuristic_errors, ref_based_sps, ref_free_sps};
