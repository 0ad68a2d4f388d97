use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coding::{ClassCounts, FormLabel};
use crate::{Error, Result};

use super::{induce, LearnerParams, TrainingInstance, TreeNode};

/// Fraction of `data` the tree labels correctly.
pub fn accuracy(tree: &TreeNode, data: &[TrainingInstance]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::InvalidArgument(
            "accuracy of an empty data set is undefined".into(),
        ));
    }
    let hits = data
        .iter()
        .filter(|i| tree.classify(&i.features) == i.target)
        .count();
    Ok(hits as f64 / data.len() as f64)
}

/// Single-leaf tree predicting the most frequent class.
pub fn majority_tree(data: &[TrainingInstance]) -> TreeNode {
    let counts = ClassCounts::from_labels(data.iter().map(|i| i.target));
    TreeNode::leaf(counts.majority(), counts)
}

/// Duplicates randomly chosen instances of every under-represented class
/// until each present class matches the largest one. The originals come
/// first, in order, followed by the duplicates class by class. Classes with
/// no instances stay absent.
pub fn balance(data: &[TrainingInstance], seed: u64) -> Vec<TrainingInstance> {
    let counts = ClassCounts::from_labels(data.iter().map(|i| i.target));
    let target = FormLabel::ALL
        .iter()
        .map(|l| counts.get(*l))
        .max()
        .unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = data.to_vec();
    for label in FormLabel::ALL {
        let pool: Vec<&TrainingInstance> = data.iter().filter(|i| i.target == label).collect();
        if pool.is_empty() {
            continue;
        }
        for _ in pool.len()..target {
            out.push(*pool[rng.random_range(0..pool.len())]);
        }
    }
    out
}

/// Seeded shuffle, then the last `test_size` instances become the test set.
pub fn holdout_split(
    data: &[TrainingInstance],
    test_size: usize,
    seed: u64,
) -> Result<(Vec<TrainingInstance>, Vec<TrainingInstance>)> {
    if test_size == 0 || test_size >= data.len() {
        return Err(Error::InvalidArgument(format!(
            "test size must be between 1 and {} for {} instances",
            data.len().saturating_sub(1),
            data.len()
        )));
    }
    let mut shuffled = data.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = shuffled.split_off(data.len() - test_size);
    Ok((shuffled, test))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
}

/// k-fold cross-validation without stratification.
///
/// Instances are shuffled with `params.seed` and cut into `folds`
/// contiguous folds whose sizes differ by at most one. Each fold is scored
/// on a tree induced from the others; with `params.balance` only the
/// training part is balanced. Folds run in parallel and the result does not
/// depend on scheduling.
pub fn cross_validate(
    data: &[TrainingInstance],
    folds: usize,
    params: &LearnerParams,
) -> Result<CrossValidation> {
    if folds < 2 {
        return Err(Error::InvalidArgument(
            "cross-validation needs at least 2 folds".into(),
        ));
    }
    if folds > data.len() {
        return Err(Error::InvalidArgument(format!(
            "{folds} folds requested for only {} instances",
            data.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(params.seed));
    let n = data.len();
    let bounds: Vec<(usize, usize)> = (0..folds)
        .map(|f| (f * n / folds, (f + 1) * n / folds))
        .collect();

    let fold_accuracies = bounds
        .par_iter()
        .enumerate()
        .map(|(f, &(lo, hi))| {
            let test: Vec<TrainingInstance> = order[lo..hi].iter().map(|&i| data[i]).collect();
            let mut train: Vec<TrainingInstance> = order[..lo]
                .iter()
                .chain(&order[hi..])
                .map(|&i| data[i])
                .collect();
            if params.balance {
                train = balance(&train, params.seed.wrapping_add(f as u64 + 1));
            }
            let tree = induce(&train, params)?;
            accuracy(&tree, &test)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = fold_accuracies.iter().sum::<f64>() / folds as f64;
    Ok(CrossValidation {
        fold_accuracies,
        mean,
    })
}
