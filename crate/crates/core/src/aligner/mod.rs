//! Pairwise and progressive multi-trace alignment.

mod dp;
mod guide_tree;
mod pairwise;
mod profile;
mod progressive;
mod scoring;

pub use guide_tree::{build_guide_tree, GuideNode, GuideTree};
pub use pairwise::{distance_matrix, pairwise_align, DistanceMatrix, PairwiseAlignment};
pub use profile::{align_profiles, Profile};
pub use progressive::{consensus_reference, progressive_align};
pub use scoring::ScoringScheme;
