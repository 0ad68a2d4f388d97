//! Decision-tree induction over the three binary function features, using
//! the gain-ratio split criterion, plus the evaluation stream around it:
//! accuracy, class balancing, hold-out splits and k-fold cross-validation.

mod eval;
mod induce;
mod tree;

use serde::{Deserialize, Serialize};

use crate::coding::{Dataset, FeatureValue, FormLabel};

pub use eval::{accuracy, balance, cross_validate, holdout_split, majority_tree, CrossValidation};
pub use induce::{entropy, gain_ratio, induce, information_gain};
pub use tree::TreeNode;

/// Function features in, grammatical form out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrainingInstance {
    pub features: FeatureValue,
    pub target: FormLabel,
}

impl TrainingInstance {
    pub fn from_dataset(d: &Dataset) -> Vec<TrainingInstance> {
        d.examples
            .iter()
            .map(|e| TrainingInstance {
                features: e.features,
                target: e.form,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerParams {
    /// Nodes with fewer instances than this become leaves.
    pub min_split: usize,
    pub seed: u64,
    /// Balance training data by duplication before inducing.
    pub balance: bool,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            min_split: 2,
            seed: 0,
            balance: false,
        }
    }
}
