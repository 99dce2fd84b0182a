//! Validation harness: synthetic logs from process models, controlled error
//! injection and metric-vs-N_e correlation.

mod correlation;
mod generate;
mod model_spec;
mod perturb;
mod stats;

pub use correlation::{
    correlation_against, correlation_experiment, tf_ratio_sweep, CorrelationReport, ExperimentConfig, Metric,
    MetricCorrelation, Sample, SweepPoint, TF_RATIO_GRID,
};
pub use generate::generate_log;
pub use model_spec::{Branch, ProcessModel, ProcessModelSpec, MODEL_SCHEMA_VERSION};
pub use perturb::{perturb, PerturbedAlignment};
pub use stats::{pearson, spearman};
