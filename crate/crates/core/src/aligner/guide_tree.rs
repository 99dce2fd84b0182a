use super::DistanceMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum GuideNode {
    Leaf(usize),
    Merge { left: usize, right: usize, distance: f64 },
}

/// Binary merge order for progressive alignment. Nodes are stored children
/// before parents; the root is the last node.
#[derive(Clone, Debug, PartialEq)]
pub struct GuideTree {
    nodes: Vec<GuideNode>,
}

impl GuideTree {
    /// Checks that the nodes form one binary tree over leaves `0..n_leaves`.
    pub fn from_nodes(nodes: Vec<GuideNode>, n_leaves: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Config("guide tree is empty".into()));
        }
        let mut leaf_seen = vec![false; n_leaves];
        let mut used = vec![false; nodes.len()];
        for (idx, node) in nodes.iter().enumerate() {
            match *node {
                GuideNode::Leaf(l) => {
                    if l >= n_leaves || std::mem::replace(&mut leaf_seen[l], true) {
                        return Err(Error::Config(format!("guide tree leaf {l} is invalid or repeated")));
                    }
                }
                GuideNode::Merge { left, right, .. } => {
                    for child in [left, right] {
                        if child >= idx || std::mem::replace(&mut used[child], true) {
                            return Err(Error::Config(format!("guide tree node {idx} has a bad child {child}")));
                        }
                    }
                }
            }
        }
        let roots = used.iter().filter(|u| !**u).count();
        if leaf_seen.iter().any(|s| !s) || roots != 1 || !used[..nodes.len() - 1].iter().all(|u| *u) {
            return Err(Error::Config("guide tree does not cover every trace exactly once".into()));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[GuideNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    /// Leaves under `node`, in left-to-right order.
    pub fn leaves(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            match self.nodes[n] {
                GuideNode::Leaf(l) => out.push(l),
                GuideNode::Merge { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        out
    }

    /// Internal nodes as `(left leaves, right leaves)` in merge order.
    pub fn merges(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.nodes
            .iter()
            .filter_map(|n| match *n {
                GuideNode::Merge { left, right, .. } => Some((self.leaves(left), self.leaves(right))),
                GuideNode::Leaf(_) => None,
            })
            .collect()
    }
}

const TIE_EPS: f64 = 1e-12;

struct Cluster {
    node: usize,
    size: usize,
    min_leaf: usize,
}

/// Average-linkage agglomerative clustering. Among equally close cluster
/// pairs (within 1e-12), the one with the smaller merged size wins, then the
/// lexicographically smallest pair of minimum leaf indices.
pub fn build_guide_tree(d: &DistanceMatrix) -> Result<GuideTree> {
    let n = d.len();
    if n < 2 {
        return Err(Error::Size(format!("guide tree needs at least 2 traces, got {n}")));
    }
    let mut nodes: Vec<GuideNode> = (0..n).map(GuideNode::Leaf).collect();
    let mut clusters: Vec<Option<Cluster>> = (0..n)
        .map(|i| {
            Some(Cluster {
                node: i,
                size: 1,
                min_leaf: i,
            })
        })
        .collect();
    // average inter-cluster distance, indexed by cluster slot
    let mut dist: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| d.get(i, j)).collect()).collect();

    // (distance, merged size, min-leaf key, slot a, slot b)
    type Candidate = (f64, usize, (usize, usize), usize, usize);
    for _ in 1..n {
        let mut best: Option<Candidate> = None;
        for a in 0..n {
            let Some(ca) = &clusters[a] else { continue };
            for b in (a + 1)..n {
                let Some(cb) = &clusters[b] else { continue };
                let dv = dist[a][b];
                let size = ca.size + cb.size;
                let key = (ca.min_leaf.min(cb.min_leaf), ca.min_leaf.max(cb.min_leaf));
                let better = match best {
                    None => true,
                    Some((bd, bs, bk, _, _)) => {
                        if dv < bd - TIE_EPS {
                            true
                        } else if dv > bd + TIE_EPS {
                            false
                        } else {
                            (size, key) < (bs, bk)
                        }
                    }
                };
                if better {
                    best = Some((dv, size, key, a, b));
                }
            }
        }
        let (dv, _, _, a, b) = best.expect("at least two clusters remain");
        let ca = clusters[a].take().unwrap();
        let cb = clusters[b].take().unwrap();
        let (l, r) = if ca.min_leaf < cb.min_leaf { (&ca, &cb) } else { (&cb, &ca) };
        nodes.push(GuideNode::Merge {
            left: l.node,
            right: r.node,
            distance: dv,
        });
        let size = ca.size + cb.size;
        for k in 0..n {
            if clusters[k].is_some() {
                let merged = (ca.size as f64 * dist[a][k] + cb.size as f64 * dist[b][k]) / size as f64;
                dist[a][k] = merged;
                dist[k][a] = merged;
            }
        }
        clusters[a] = Some(Cluster {
            node: nodes.len() - 1,
            size,
            min_leaf: ca.min_leaf.min(cb.min_leaf),
        });
    }
    GuideTree::from_nodes(nodes, n)
}
