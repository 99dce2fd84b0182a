use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::model_spec::{ProcessModel, ProcessModelSpec};
use crate::error::{Error, Result};
use crate::model::{EventLog, Trace};

/// Samples `n_traces` independent traces from `spec`. Trace `i` draws from
/// its own RNG stream, so the log does not depend on thread scheduling.
pub fn generate_log(spec: &ProcessModelSpec, n_traces: usize, seed: u64) -> Result<EventLog> {
    spec.validate()?;
    if n_traces == 0 {
        return Err(Error::Config("n_traces must be at least 1".into()));
    }
    let width = n_traces.to_string().len().max(4);
    let traces = (0..n_traces)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut labels = Vec::new();
            sample(&spec.model, &mut rng, &mut labels);
            Trace::from_labels(format!("case{:0width$}", i + 1), &labels)
        })
        .collect::<Result<Vec<_>>>()?;
    EventLog::new(traces)
}

fn sample<'a>(model: &'a ProcessModel, rng: &mut ChaCha8Rng, out: &mut Vec<&'a str>) {
    match model {
        ProcessModel::Activity { label } => out.push(label),
        ProcessModel::Sequence { children } => children.iter().for_each(|c| sample(c, rng, out)),
        ProcessModel::Choice { branches } => {
            let mut u: f64 = rng.gen();
            let last = branches.len() - 1;
            for (i, b) in branches.iter().enumerate() {
                if u < b.probability || i == last {
                    sample(&b.model, rng, out);
                    break;
                }
                u -= b.probability;
            }
        }
        ProcessModel::Parallel { children } => {
            let mut parts: Vec<Vec<&str>> = children
                .iter()
                .map(|c| {
                    let mut part = Vec::new();
                    sample(c, rng, &mut part);
                    part
                })
                .collect();
            interleave(&mut parts, rng, out);
        }
        ProcessModel::Loop {
            body,
            repeat_probability,
        } => loop {
            sample(body, rng, out);
            if !rng.gen_bool(*repeat_probability) {
                break;
            }
        },
    }
}

/// Uniform random interleaving: each step takes the next symbol of a part
/// with probability proportional to what that part has left.
fn interleave<'a>(parts: &mut [Vec<&'a str>], rng: &mut ChaCha8Rng, out: &mut Vec<&'a str>) {
    let mut cursors = vec![0usize; parts.len()];
    let mut remaining: usize = parts.iter().map(Vec::len).sum();
    while remaining > 0 {
        let mut pick = rng.gen_range(0..remaining);
        for (part, cursor) in parts.iter().zip(cursors.iter_mut()) {
            let left = part.len() - *cursor;
            if pick < left {
                out.push(part[*cursor]);
                *cursor += 1;
                break;
            }
            pick -= left;
        }
        remaining -= 1;
    }
}
