use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::perturb::perturb;
use super::stats::pearson;
use crate::aligner::{consensus_reference, ScoringScheme};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, extract_patterns, overall_misalignment_score, EvaluationParams, MetricReport};
use crate::model::{Alignment, EventLog};

pub const TF_RATIO_GRID: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scoring: ScoringScheme,
    pub samples: usize,
    pub max_moves: usize,
    pub tf_ratio: f64,
    pub seed: u64,
    /// Guide trees tried when building the consensus reference.
    pub consensus_trees: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scoring: ScoringScheme::default(),
            samples: 30,
            max_moves: 30,
            tf_ratio: 0.40,
            seed: 0,
            consensus_trees: 8,
        }
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.samples < 10 {
            return Err(Error::Config(format!("samples must be at least 10, got {}", self.samples)));
        }
        if !(self.tf_ratio > 0.0 && self.tf_ratio <= 1.0) {
            return Err(Error::Config(format!("tf_ratio must be in (0, 1], got {}", self.tf_ratio)));
        }
        Ok(())
    }

    /// Moves for sample `i`, spread evenly over `[0, max_moves]`.
    pub fn moves_for(&self, i: usize) -> usize {
        if self.samples < 2 {
            return 0;
        }
        ((i * self.max_moves) as f64 / (self.samples - 1) as f64).round() as usize
    }

    fn sample_seed(&self, i: usize) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64 + 1);
        rng.gen()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    RefFreeSps,
    RefBasedSps,
    ColumnScore,
    MsTop,
    Oms,
    Ois,
    Complexity,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::RefFreeSps,
        Metric::RefBasedSps,
        Metric::ColumnScore,
        Metric::MsTop,
        Metric::Oms,
        Metric::Ois,
        Metric::Complexity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::RefFreeSps => "ref_free_sps",
            Metric::RefBasedSps => "ref_based_sps",
            Metric::ColumnScore => "column_score",
            Metric::MsTop => "ms_top",
            Metric::Oms => "oms",
            Metric::Ois => "ois",
            Metric::Complexity => "complexity",
        }
    }

    fn read(self, r: &MetricReport) -> f64 {
        match self {
            Metric::RefFreeSps => r.accuracy.ref_free_sps as f64,
            Metric::RefBasedSps => r.accuracy.ref_based_sps.unwrap_or(f64::NAN),
            Metric::ColumnScore => r.accuracy.column_score.unwrap_or(f64::NAN),
            Metric::MsTop => r.accuracy.ms_top.score as f64,
            Metric::Oms => r.accuracy.oms,
            Metric::Ois => r.confidence.ois,
            Metric::Complexity => r.complexity.value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub sample_id: usize,
    pub moves: usize,
    pub seed: u64,
    pub n_e: usize,
    /// One value per [`Metric::ALL`] entry.
    pub values: Vec<f64>,
}

impl Sample {
    pub fn value(&self, m: Metric) -> f64 {
        self.values[Metric::ALL.iter().position(|&x| x == m).expect("metric listed")]
    }
}

/// Pearson coefficient of one metric against N_e, or why it is undefined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricCorrelation {
    pub metric: Metric,
    pub coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub config: ExperimentConfig,
    pub reference_columns: usize,
    pub correlations: Vec<MetricCorrelation>,
    pub samples: Vec<Sample>,
}

impl CorrelationReport {
    pub fn coefficient(&self, m: Metric) -> Option<f64> {
        self.correlations.iter().find(|c| c.metric == m).and_then(|c| c.coefficient)
    }
}

/// Builds a consensus reference for `log`, injects errors into it and
/// correlates every metric with the resulting N_e.
pub fn correlation_experiment(log: Arc<EventLog>, config: &ExperimentConfig) -> Result<CorrelationReport> {
    config.validate()?;
    let reference = consensus_reference(log, &config.scoring, config.consensus_trees, config.seed)?;
    correlation_against(&reference, config)
}

/// Same as [`correlation_experiment`] with a caller-supplied reference.
pub fn correlation_against(reference: &Alignment, config: &ExperimentConfig) -> Result<CorrelationReport> {
    config.validate()?;
    let params = EvaluationParams {
        scoring: config.scoring,
        tf_ratio: config.tf_ratio,
        ..EvaluationParams::default()
    };
    let samples = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let moves = config.moves_for(i);
            let seed = config.sample_seed(i);
            let p = perturb(reference, moves, seed)?;
            let report = evaluate(&p.alignment, Some(reference), &params)?;
            Ok(Sample {
                sample_id: i,
                moves,
                seed,
                n_e: report.accuracy.n_e.expect("reference supplied"),
                values: Metric::ALL.iter().map(|m| m.read(&report)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n_e: Vec<f64> = samples.iter().map(|s| s.n_e as f64).collect();
    check_error_spread(&n_e)?;
    let correlations = Metric::ALL
        .iter()
        .map(|&metric| {
            let ys: Vec<f64> = samples.iter().map(|s| s.value(metric)).collect();
            match pearson(&ys, &n_e) {
                Ok(r) => MetricCorrelation {
                    metric,
                    coefficient: Some(r),
                    error: None,
                },
                Err(e) => MetricCorrelation {
                    metric,
                    coefficient: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(CorrelationReport {
        config: *config,
        reference_columns: reference.n_columns(),
        correlations,
        samples,
    })
}

fn check_error_spread(n_e: &[f64]) -> Result<()> {
    if n_e.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::UndefinedCorrelation(format!(
            "every sample has N_e = {}; raise max_moves",
            n_e.first().copied().unwrap_or(0.0)
        )));
    }
    Ok(())
}

/// corr(OMS, N_e) at one threshold ratio. The coefficient is absent when
/// no pattern clears the threshold or OMS does not vary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub tf_ratio: f64,
    pub eligible_patterns: usize,
    pub coefficient: Option<f64>,
}

/// Correlates OMS with N_e at each ratio, over one shared set of samples.
pub fn tf_ratio_sweep(reference: &Alignment, config: &ExperimentConfig, ratios: &[f64]) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    let census = extract_patterns(reference.source(), 2, None)?;
    let perturbed = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let p = perturb(reference, config.moves_for(i), config.sample_seed(i))?;
            let n_e = crate::metrics::count_heuristic_errors(&p.alignment, reference)?;
            Ok((p.alignment, n_e as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let n_e: Vec<f64> = perturbed.iter().map(|p| p.1).collect();
    check_error_spread(&n_e)?;
    ratios
        .iter()
        .map(|&tf| {
            if !(tf > 0.0 && tf <= 1.0) {
                return Err(Error::Config(format!("tf_ratio must be in (0, 1], got {tf}")));
            }
            let eligible = census.eligible(tf).len();
            if eligible == 0 {
                return Ok(SweepPoint {
                    tf_ratio: tf,
                    eligible_patterns: 0,
                    coefficient: None,
                });
            }
            let oms = perturbed
                .par_iter()
                .map(|(a, _)| overall_misalignment_score(a, &census, tf))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepPoint {
                tf_ratio: tf,
                eligible_patterns: eligible,
                coefficient: pearson(&oms, &n_e).ok(),
            })
        })
        .collect()
}
