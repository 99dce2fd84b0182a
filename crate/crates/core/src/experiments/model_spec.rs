//! Block-structured process models for synthetic log generation.
//!
//! Serialized as JSON:
//!
//! ```json
//! { "version": 1, "name": "triage",
//!   "model": { "kind": "sequence", "children": [
//!     { "kind": "activity", "label": "Arrive" },
//!     { "kind": "choice", "branches": [
//!         { "probability": 0.7, "model": { "kind": "activity", "label": "Airway" } },
//!         { "probability": 0.3, "model": { "kind": "sequence", "children": [] } } ] },
//!     { "kind": "parallel", "children": [ ... ] },
//!     { "kind": "loop", "repeat_probability": 0.2, "body": { ... } } ] } }
//! ```
//!
//! An empty sequence is a silent step. A model must not be able to produce
//! an empty trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Activity;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessModel {
    Activity { label: String },
    Sequence { children: Vec<ProcessModel> },
    Choice { branches: Vec<Branch> },
    Parallel { children: Vec<ProcessModel> },
    Loop { body: Box<ProcessModel>, repeat_probability: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub probability: f64,
    pub model: ProcessModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessModelSpec {
    pub version: u32,
    pub name: String,
    pub model: ProcessModel,
}

impl ProcessModelSpec {
    pub fn new(name: impl Into<String>, model: ProcessModel) -> Result<Self> {
        let spec = Self {
            version: MODEL_SCHEMA_VERSION,
            name: name.into(),
            model,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("model spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model specs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != MODEL_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported model spec version {} (expected {MODEL_SCHEMA_VERSION})",
                self.version
            )));
        }
        self.model.validate()?;
        if self.model.min_trace_len() == 0 {
            return Err(Error::Config("model can produce an empty trace".into()));
        }
        Ok(())
    }
}

impl ProcessModel {
    pub fn activity(label: &str) -> Self {
        Self::Activity { label: label.into() }
    }

    pub fn sequence(children: Vec<ProcessModel>) -> Self {
        Self::Sequence { children }
    }

    pub fn parallel(children: Vec<ProcessModel>) -> Self {
        Self::Parallel { children }
    }

    pub fn choice(branches: Vec<(f64, ProcessModel)>) -> Self {
        Self::Choice {
            branches: branches
                .into_iter()
                .map(|(probability, model)| Branch { probability, model })
                .collect(),
        }
    }

    pub fn repeat(body: ProcessModel, repeat_probability: f64) -> Self {
        Self::Loop {
            body: Box::new(body),
            repeat_probability,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Activity { label } => Activity::new(label.as_str()).map(|_| ()),
            Self::Sequence { children } | Self::Parallel { children } => {
                children.iter().try_for_each(ProcessModel::validate)
            }
            Self::Choice { branches } => {
                if branches.is_empty() {
                    return Err(Error::Config("choice block has no branches".into()));
                }
                if branches.iter().any(|b| b.probability.is_nan() || b.probability < 0.0) {
                    return Err(Error::Config("choice probabilities must be non-negative".into()));
                }
                let total: f64 = branches.iter().map(|b| b.probability).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::Config(format!("choice probabilities sum to {total}, not 1")));
                }
                branches.iter().try_for_each(|b| b.model.validate())
            }
            Self::Loop {
                body,
                repeat_probability,
            } => {
                if !(0.0..1.0).contains(repeat_probability) {
                    return Err(Error::Config(format!(
                        "loop repeat probability must be in [0, 1), got {repeat_probability}"
                    )));
                }
                body.validate()
            }
        }
    }

    /// Shortest trace this block can emit.
    pub fn min_trace_len(&self) -> usize {
        match self {
            Self::Activity { .. } => 1,
            Self::Sequence { children } | Self::Parallel { children } => {
                children.iter().map(ProcessModel::min_trace_len).sum()
            }
            Self::Choice { branches } => branches
                .iter()
                .filter(|b| b.probability > 0.0)
                .map(|b| b.model.min_trace_len())
                .min()
                .unwrap_or(0),
            Self::Loop { body, .. } => body.min_trace_len(),
        }
    }

    /// Distinct activity labels, sorted.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_labels(&self, out: &mut Vec<String>) {
        match self {
            Self::Activity { label } => out.push(label.clone()),
            Self::Sequence { children } | Self::Parallel { children } => {
                children.iter().for_each(|c| c.collect_labels(out))
            }
            Self::Choice { branches } => branches.iter().for_each(|b| b.model.collect_labels(out)),
            Self::Loop { body, .. } => body.collect_labels(out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ProcessModel as M;

    #[test]
    fn json_round_trip() {
        let spec = ProcessModelSpec::new(
            "demo",
            M::sequence(vec![
                M::activity("A"),
                M::choice(vec![(0.25, M::activity("B")), (0.75, M::sequence(vec![]))]),
                M::parallel(vec![M::activity("C"), M::repeat(M::activity("D"), 0.3)]),
            ]),
        )
        .unwrap();
        assert_eq!(ProcessModelSpec::from_json(&spec.to_json()).unwrap(), spec);
        assert_eq!(spec.model.labels(), vec!["A", "B", "C", "D"]);
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(ProcessModelSpec::new("p", M::choice(vec![(0.5, M::activity("A")), (0.4, M::activity("B"))])).is_err());
        assert!(ProcessModelSpec::new("l", M::repeat(M::activity("A"), 1.0)).is_err());
        assert!(ProcessModelSpec::new("g", M::activity("-")).is_err());
        assert!(ProcessModelSpec::new("e", M::choice(vec![(1.0, M::sequence(vec![]))])).is_err());
    }

    #[test]
    fn unknown_versions_and_fields_are_rejected() {
        let bad_version = r#"{"version": 2, "name": "x", "model": {"kind": "activity", "label": "A"}}"#;
        assert!(ProcessModelSpec::from_json(bad_version).is_err());
        let bad_kind = r#"{"version": 1, "name": "x", "model": {"kind": "xor", "label": "A"}}"#;
        assert!(ProcessModelSpec::from_json(bad_kind).is_err());
    }
}
