use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{align_profiles, build_guide_tree, distance_matrix, GuideNode, GuideTree, Profile, ScoringScheme};
use crate::error::{Error, Result};
use crate::metrics::{alignment_complexity, ref_free_sps};
use crate::model::{Alignment, EncodedLog, EventLog};

/// Progressive multiple alignment: profiles are merged bottom-up along the
/// guide tree, built from [`distance_matrix`] when none is given.
pub fn progressive_align(
    log: Arc<EventLog>,
    scheme: &ScoringScheme,
    tree: Option<&GuideTree>,
) -> Result<Alignment> {
    let n = log.len();
    if n < 2 {
        return Err(Error::Size(format!("progressive alignment needs at least 2 traces, got {n}")));
    }
    let built;
    let tree = match tree {
        Some(t) => t,
        None => {
            built = build_guide_tree(&distance_matrix(&log, scheme)?)?;
            &built
        }
    };
    if tree.n_leaves() != n {
        return Err(Error::Config(format!(
            "guide tree has {} leaves, log has {n} traces",
            tree.n_leaves()
        )));
    }
    let encoded = Arc::new(log.encode());
    fold(tree, tree.root(), &log, &encoded, scheme)?.into_alignment()
}

fn fold(
    tree: &GuideTree,
    node: usize,
    log: &Arc<EventLog>,
    encoded: &Arc<EncodedLog>,
    scheme: &ScoringScheme,
) -> Result<Profile> {
    match tree.nodes()[node] {
        GuideNode::Leaf(i) => Profile::singleton(log.clone(), encoded.clone(), i),
        GuideNode::Merge { left, right, .. } => {
            let (l, r) = rayon::join(
                || fold(tree, left, log, encoded, scheme),
                || fold(tree, right, log, encoded, scheme),
            );
            Ok(align_profiles(&l?, &r?, scheme)?.0)
        }
    }
}

/// Best of `k` progressive alignments: one from the plain guide tree and
/// `k - 1` from trees over distance matrices with seeded multiplicative noise
/// in `[0.9, 1.1]`. Highest reference-free SPS wins, then lower complexity,
/// then the earlier candidate.
pub fn consensus_reference(
    log: Arc<EventLog>,
    scheme: &ScoringScheme,
    k: usize,
    seed: u64,
) -> Result<Alignment> {
    if k == 0 {
        return Err(Error::Config("consensus needs at least one guide tree".into()));
    }
    let d = distance_matrix(&log, scheme)?;
    let candidates = (0..k)
        .into_par_iter()
        .map(|c| {
            let tree = if c == 0 {
                build_guide_tree(&d)?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                build_guide_tree(&d.scaled(|_, _| rng.gen_range(0.9..=1.1)))?
            };
            let a = progressive_align(log.clone(), scheme, Some(&tree))?;
            let sps = ref_free_sps(&a, scheme);
            let p = alignment_complexity(&a).value;
            Ok((sps, p, a))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, (sps, p, _)) in candidates.iter().enumerate().skip(1) {
        let (bs, bp, _) = &candidates[best];
        if sps > bs || (sps == bs && p < bp) {
            best = i;
        }
    }
    Ok(candidates.into_iter().nth(best).expect("k >= 1").2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log(rows: &[(&str, Vec<&str>)]) -> Arc<EventLog> {
        Arc::new(EventLog::from_label_rows(rows).unwrap())
    }

    #[test]
    fn identical_traces_need_no_gaps() {
        let l = log(&[
            ("1", vec!["A", "B", "C", "D"]),
            ("2", vec!["A", "B", "C", "D"]),
            ("3", vec!["A", "B", "C", "D"]),
        ]);
        let a = progressive_align(l.clone(), &ScoringScheme::default(), None).unwrap();
        assert_eq!(a.n_columns(), 4);
        let c = consensus_reference(l, &ScoringScheme::default(), 5, 3).unwrap();
        assert_eq!(c.n_columns(), 4);
    }

    #[test]
    fn same_type_activities_share_a_column() {
        let l = log(&[
            ("1", vec!["A", "B", "C", "D"]),
            ("2", vec!["A", "C", "D"]),
            ("3", vec!["B", "C"]),
            ("4", vec!["A", "B", "D"]),
        ]);
        let a = progressive_align(l, &ScoringScheme::default(), None).unwrap();
        assert!(a.validate().is_valid());
        for label in ["A", "B", "C", "D"] {
            let cols: std::collections::BTreeSet<usize> = (0..a.n_columns())
                .filter(|&j| a.column(j).any(|c| c.occurrence().is_some_and(|o| a.label(o) == label)))
                .collect();
            assert_eq!(cols.len(), 1, "{label} spread over {cols:?}");
        }
        assert_eq!(a.n_columns(), 4);
    }

    #[test]
    fn single_tree_consensus_is_progressive() {
        let l = log(&[
            ("1", vec!["A", "B", "A", "C"]),
            ("2", vec!["B", "A", "C"]),
            ("3", vec!["C", "A", "B"]),
        ]);
        let s = ScoringScheme::default();
        assert_eq!(
            consensus_reference(l.clone(), &s, 1, 99).unwrap(),
            progressive_align(l, &s, None).unwrap()
        );
    }

    #[test]
    fn rejects_tree_of_wrong_size() {
        let l = log(&[("1", vec!["A"]), ("2", vec!["A"]), ("3", vec!["B"])]);
        let d = super::super::DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let t = build_guide_tree(&d).unwrap();
        assert!(progressive_align(l, &ScoringScheme::default(), Some(&t)).is_err());
    }
}
