use crate::coding::{ClassCounts, Feature, FormLabel};
use crate::{Error, Result};

use super::{LearnerParams, TrainingInstance, TreeNode};

/// Gains at or below this are treated as zero.
const GAIN_EPSILON: f64 = 1e-12;

/// Shannon entropy in bits of a count vector; zero counts are skipped.
pub fn entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn class_vector(counts: &ClassCounts) -> [usize; 3] {
    FormLabel::ALL.map(|l| counts.get(l))
}

struct SplitStats {
    gain: f64,
    split_info: f64,
}

impl SplitStats {
    fn ratio(&self) -> f64 {
        if self.split_info > 0.0 {
            self.gain / self.split_info
        } else {
            0.0
        }
    }
}

fn split_stats(data: &[&TrainingInstance], feature: Feature) -> SplitStats {
    let mut parts = [ClassCounts::default(); 2];
    let mut total = ClassCounts::default();
    for inst in data {
        parts[inst.features.index(feature)].add(inst.target, 1);
        total.add(inst.target, 1);
    }
    let n = data.len() as f64;
    let remainder: f64 = parts
        .iter()
        .map(|p| p.total() as f64 / n * entropy(&class_vector(p)))
        .sum();
    let sizes: Vec<usize> = parts.iter().map(ClassCounts::total).collect();
    SplitStats {
        gain: entropy(&class_vector(&total)) - remainder,
        split_info: entropy(&sizes),
    }
}

/// Information gain (bits) of splitting `data` on `feature`.
pub fn information_gain(data: &[TrainingInstance], feature: Feature) -> f64 {
    let refs: Vec<&TrainingInstance> = data.iter().collect();
    split_stats(&refs, feature).gain
}

/// Information gain divided by split information; 0 when the feature does
/// not partition `data`.
pub fn gain_ratio(data: &[TrainingInstance], feature: Feature) -> f64 {
    let refs: Vec<&TrainingInstance> = data.iter().collect();
    split_stats(&refs, feature).ratio()
}

/// Top-down induction. Each node splits on the unused feature with the
/// highest gain ratio among those with positive gain, ties going to the
/// lexicographically first feature name. An impure node where no feature has
/// positive gain (an interaction such as XOR) splits on the first feature
/// that partitions it. Nodes that are pure, smaller than `min_split`, or out
/// of features become leaves.
pub fn induce(data: &[TrainingInstance], params: &LearnerParams) -> Result<TreeNode> {
    if data.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot induce a tree from no data".into(),
        ));
    }
    if params.min_split == 0 {
        return Err(Error::InvalidArgument(
            "min_split must be at least 1".into(),
        ));
    }
    let refs: Vec<&TrainingInstance> = data.iter().collect();
    Ok(grow(&refs, &Feature::ALL, params.min_split))
}

fn grow(data: &[&TrainingInstance], available: &[Feature], min_split: usize) -> TreeNode {
    let distribution = ClassCounts::from_labels(data.iter().map(|i| i.target));
    let leaf = || TreeNode::leaf(distribution.majority(), distribution);
    if distribution.nonzero_classes() <= 1 || data.len() < min_split || available.is_empty() {
        return leaf();
    }

    // `available` is kept in lexicographic order, so strict comparison keeps
    // the first feature on ties.
    let mut best: Option<(Feature, f64)> = None;
    let mut fallback = None;
    for &feature in available {
        let stats = split_stats(data, feature);
        if stats.split_info > 0.0 && fallback.is_none() {
            fallback = Some(feature);
        }
        if stats.gain > GAIN_EPSILON {
            let ratio = stats.ratio();
            if best.is_none_or(|(_, r)| ratio > r + GAIN_EPSILON) {
                best = Some((feature, ratio));
            }
        }
    }
    let Some(feature) = best.map(|(f, _)| f).or(fallback) else {
        return leaf();
    };

    let rest: Vec<Feature> = available
        .iter()
        .copied()
        .filter(|f| *f != feature)
        .collect();
    let children = (0..feature.values().len())
        .map(|v| {
            let part: Vec<&TrainingInstance> = data
                .iter()
                .copied()
                .filter(|i| i.features.index(feature) == v)
                .collect();
            // Splits are only taken on features that partition the node, and
            // every feature is binary, so no part is empty.
            grow(&part, &rest, min_split)
        })
        .collect();
    TreeNode::internal(feature, children)
}
