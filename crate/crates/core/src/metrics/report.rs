use serde::{Deserialize, Serialize};

use super::misalignment::{eligible_patterns, weighted_mean, MisalignmentIndex};
use super::{
    alignment_complexity, column_score, consensus_sequence, count_heuristic_errors, extract_patterns,
    overall_information_score, ref_based_sps, ref_free_sps, Complexity, ConsensusEntry,
};
use crate::aligner::ScoringScheme;
use crate::error::Result;
use crate::model::Alignment;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationParams {
    pub scoring: ScoringScheme,
    pub tf_ratio: f64,
    pub majority: f64,
}

impl Default for EvaluationParams {
    fn default() -> Self {
        Self {
            scoring: ScoringScheme::default(),
            tf_ratio: 0.40,
            majority: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternScore {
    pub pattern: Vec<String>,
    pub frequency: u64,
    pub score: u64,
}

/// Accuracy metrics. The reference-based fields are present only when a
/// reference alignment was supplied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracyMetrics {
    pub ref_free_sps: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ref_based_sps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_e: Option<usize>,
    pub ms_top: PatternScore,
    pub oms: f64,
    pub eligible_patterns: usize,
    pub f_max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfidenceMetrics {
    pub ois: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlignmentShape {
    pub traces: usize,
    pub activities: usize,
    pub activity_types: usize,
    pub columns: usize,
    pub min_columns: usize,
}

/// Every metric for one alignment, grouped accuracy, confidence, complexity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub schema_version: u32,
    pub parameters: EvaluationParams,
    pub shape: AlignmentShape,
    pub accuracy: AccuracyMetrics,
    pub confidence: ConfidenceMetrics,
    pub complexity: Complexity,
    pub consensus: Vec<ConsensusEntry>,
}

pub fn evaluate(a: &Alignment, reference: Option<&Alignment>, params: &EvaluationParams) -> Result<MetricReport> {
    let census = extract_patterns(a.source(), 2, None)?;
    let eligible = eligible_patterns(&census, params.tf_ratio)?;
    let index = MisalignmentIndex::new(a);
    let oms = weighted_mean(&index, &census, &eligible);
    let top = census.most_frequent().expect("census is not empty");
    let top_pattern = census.pattern(top);
    let ms_top = PatternScore {
        score: index.score(&top_pattern),
        frequency: census.count(top),
        pattern: top_pattern.symbols().to_vec(),
    };

    let (ref_based, cs, n_e) = match reference {
        Some(r) => (
            Some(ref_based_sps(a, r)?),
            Some(column_score(a, r)?),
            Some(count_heuristic_errors(a, r)?),
        ),
        None => (None, None, None),
    };

    Ok(MetricReport {
        schema_version: REPORT_SCHEMA_VERSION,
        parameters: *params,
        shape: AlignmentShape {
            traces: a.n_rows(),
            activities: a.source().total_activities(),
            activity_types: a.source().alphabet().len(),
            columns: a.n_columns(),
            min_columns: a.l_min(),
        },
        accuracy: AccuracyMetrics {
            ref_free_sps: ref_free_sps(a, &params.scoring),
            ref_based_sps: ref_based,
            column_score: cs,
            n_e,
            ms_top,
            oms,
            eligible_patterns: eligible.len(),
            f_max: census.f_max(),
        },
        confidence: ConfidenceMetrics {
            ois: overall_information_score(a),
        },
        complexity: alignment_complexity(a),
        consensus: consensus_sequence(a, params.majority)?,
    })
}
