use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::coding::{ClassCounts, Feature, FeatureValue, FormLabel};
use crate::{Error, Result};

/// A learned decision tree. Internal nodes hold one child per value of their
/// feature, in the feature's canonical value order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NodeRepr", into = "NodeRepr")]
pub enum TreeNode {
    Internal {
        feature: Feature,
        children: Vec<TreeNode>,
    },
    Leaf {
        label: FormLabel,
        distribution: ClassCounts,
    },
}

/// On-disk shape: `{feature, children: {value: node}}` or
/// `{label, distribution}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum NodeRepr {
    Internal {
        feature: Feature,
        children: IndexMap<String, NodeRepr>,
    },
    Leaf {
        label: FormLabel,
        distribution: ClassCounts,
    },
}

impl From<TreeNode> for NodeRepr {
    fn from(node: TreeNode) -> Self {
        match node {
            TreeNode::Leaf {
                label,
                distribution,
            } => NodeRepr::Leaf {
                label,
                distribution,
            },
            TreeNode::Internal { feature, children } => NodeRepr::Internal {
                feature,
                children: feature
                    .values()
                    .iter()
                    .map(|v| v.to_string())
                    .zip(children.into_iter().map(NodeRepr::from))
                    .collect(),
            },
        }
    }
}

impl TryFrom<NodeRepr> for TreeNode {
    type Error = Error;

    fn try_from(repr: NodeRepr) -> Result<Self> {
        let node = convert(repr)?;
        node.validate()?;
        Ok(node)
    }
}

fn convert(repr: NodeRepr) -> Result<TreeNode> {
    match repr {
        NodeRepr::Leaf {
            label,
            distribution,
        } => Ok(TreeNode::Leaf {
            label,
            distribution,
        }),
        NodeRepr::Internal {
            feature,
            mut children,
        } => {
            let values = feature.values();
            if children.len() != values.len() {
                return Err(Error::Tree(format!(
                    "{feature} node needs exactly the children {values:?}, found {:?}",
                    children.keys().collect::<Vec<_>>()
                )));
            }
            let mut ordered = Vec::with_capacity(values.len());
            for v in values {
                let child = children.shift_remove(v).ok_or_else(|| {
                    Error::Tree(format!("{feature} node is missing a child for {v}"))
                })?;
                ordered.push(convert(child)?);
            }
            Ok(TreeNode::Internal {
                feature,
                children: ordered,
            })
        }
    }
}

impl TreeNode {
    pub fn leaf(label: FormLabel, distribution: ClassCounts) -> Self {
        TreeNode::Leaf {
            label,
            distribution,
        }
    }

    /// A leaf whose distribution is a single instance of `label`.
    pub fn unit_leaf(label: FormLabel) -> Self {
        TreeNode::Leaf {
            label,
            distribution: ClassCounts::from_labels([label]),
        }
    }

    pub fn internal(feature: Feature, children: Vec<TreeNode>) -> Self {
        TreeNode::Internal { feature, children }
    }

    /// The tree printed for the 179-example reference data.
    pub fn reference() -> Self {
        use FormLabel::*;
        TreeNode::internal(
            Feature::Awareness,
            vec![
                TreeNode::unit_leaf(NegTc),
                TreeNode::internal(
                    Feature::Intention,
                    vec![
                        TreeNode::unit_leaf(Dont),
                        TreeNode::internal(
                            Feature::Safety,
                            vec![TreeNode::unit_leaf(Never), TreeNode::unit_leaf(Dont)],
                        ),
                    ],
                ),
            ],
        )
    }

    /// Checks child arity, that no feature repeats on a root-to-leaf path,
    /// and that every leaf label is a most frequent class of its
    /// distribution.
    pub fn validate(&self) -> Result<()> {
        fn walk(node: &TreeNode, path: &mut Vec<Feature>) -> Result<()> {
            match node {
                TreeNode::Leaf {
                    label,
                    distribution,
                } => {
                    let best = FormLabel::ALL
                        .iter()
                        .map(|l| distribution.get(*l))
                        .max()
                        .unwrap_or(0);
                    if distribution.get(*label) < best {
                        return Err(Error::Tree(format!(
                            "leaf label {label} is not a majority of its distribution {distribution}"
                        )));
                    }
                    Ok(())
                }
                TreeNode::Internal { feature, children } => {
                    if path.contains(feature) {
                        return Err(Error::Tree(format!(
                            "feature {feature} repeats on one path"
                        )));
                    }
                    if children.len() != feature.values().len() {
                        return Err(Error::Tree(format!(
                            "{feature} node has {} children",
                            children.len()
                        )));
                    }
                    path.push(*feature);
                    for c in children {
                        walk(c, path)?;
                    }
                    path.pop();
                    Ok(())
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    pub fn classify(&self, features: &FeatureValue) -> FormLabel {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return *label,
                TreeNode::Internal { feature, children } => {
                    node = &children[features.index(*feature)]
                }
            }
        }
    }

    /// Every root-to-leaf path as the sequence of features tested on it.
    pub fn paths(&self) -> Vec<Vec<Feature>> {
        match self {
            TreeNode::Leaf { .. } => vec![Vec::new()],
            TreeNode::Internal { feature, children } => children
                .iter()
                .flat_map(|c| c.paths())
                .map(|mut p| {
                    p.insert(0, *feature);
                    p
                })
                .collect(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { children, .. } => {
                1 + children.iter().map(TreeNode::depth).max().unwrap_or(0)
            }
        }
    }

    /// Leaf labels, left to right.
    pub fn leaf_labels(&self) -> Vec<FormLabel> {
        match self {
            TreeNode::Leaf { label, .. } => vec![*label],
            TreeNode::Internal { children, .. } => {
                children.iter().flat_map(TreeNode::leaf_labels).collect()
            }
        }
    }

    /// Indented text form, one `feature = value:` test per line, with `|  `
    /// per level of nesting and the predicted form after the colon on
    /// leaf branches. No trailing newline.
    pub fn pretty(&self) -> String {
        fn walk(node: &TreeNode, depth: usize, out: &mut String) {
            let TreeNode::Internal { feature, children } = node else {
                return;
            };
            for (value, child) in feature.values().iter().zip(children) {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&"|  ".repeat(depth));
                let _ = write!(out, "{feature} = {value}:");
                match child {
                    TreeNode::Leaf { label, .. } => {
                        let _ = write!(out, " {}", label.display_name());
                    }
                    internal => walk(internal, depth + 1, out),
                }
            }
        }
        match self {
            TreeNode::Leaf { label, .. } => label.display_name().to_string(),
            internal => {
                let mut out = String::new();
                walk(internal, 0, &mut out);
                out
            }
        }
    }
}
