//! Inter-coder agreement: percent agreement, chance agreement from pooled
//! category proportions, and the Kappa coefficient with its qualitative band.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coding::{Dataset, Feature};
use crate::{Error, Result};

/// Band boundaries are compared with this slack so that values such as
/// `(0.8 - 0.5) / 0.5` land on the printed boundary they represent.
const BAND_EPSILON: f64 = 1e-9;

/// Paired labels from two coders over a shared category set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementInput<L> {
    items: Vec<(L, L)>,
    categories: BTreeSet<L>,
}

impl<L: Ord + Clone> AgreementInput<L> {
    /// Categories are the labels observed in `items`.
    pub fn new(items: Vec<(L, L)>) -> Self {
        let categories = items
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        AgreementInput { items, categories }
    }

    /// Declares the category set explicitly; every label must belong to it.
    pub fn with_categories(items: Vec<(L, L)>, categories: BTreeSet<L>) -> Result<Self> {
        if items
            .iter()
            .any(|(a, b)| !categories.contains(a) || !categories.contains(b))
        {
            return Err(Error::InvalidArgument(
                "label outside the declared category set".into(),
            ));
        }
        Ok(AgreementInput { items, categories })
    }

    pub fn items(&self) -> &[(L, L)] {
        &self.items
    }

    pub fn categories(&self) -> &BTreeSet<L> {
        &self.categories
    }

    fn require_items(&self) -> Result<()> {
        if self.items.is_empty() {
            Err(Error::InvalidArgument(
                "agreement statistics need at least one item".into(),
            ))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReliabilityBand {
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl ReliabilityBand {
    /// Maps K onto the five-level scale (.00-.20 slight, .21-.40 fair,
    /// .41-.60 moderate, .61-.80 substantial, .81-1.00 almost perfect), each
    /// range closed at its upper end. Negative K falls into `Slight`.
    pub fn from_kappa(k: f64) -> Self {
        if k <= 0.20 + BAND_EPSILON {
            ReliabilityBand::Slight
        } else if k <= 0.40 + BAND_EPSILON {
            ReliabilityBand::Fair
        } else if k <= 0.60 + BAND_EPSILON {
            ReliabilityBand::Moderate
        } else if k <= 0.80 + BAND_EPSILON {
            ReliabilityBand::Substantial
        } else {
            ReliabilityBand::AlmostPerfect
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ReliabilityBand::Slight => "slight",
            ReliabilityBand::Fair => "fair",
            ReliabilityBand::Moderate => "moderate",
            ReliabilityBand::Substantial => "substantial",
            ReliabilityBand::AlmostPerfect => "almost perfect",
        }
    }
}

impl fmt::Display for ReliabilityBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub p_a: f64,
    pub p_e: f64,
    pub kappa: f64,
    pub band: ReliabilityBand,
    /// Set when K < 0, which the band table does not cover.
    pub below_scale: bool,
}

pub fn percent_agreement<L: Ord + Clone>(input: &AgreementInput<L>) -> Result<f64> {
    input.require_items()?;
    let agree = input.items.iter().filter(|(a, b)| a == b).count();
    Ok(agree as f64 / input.items.len() as f64)
}

/// Σ p_j² where p_j is category j's share of all 2n assignments made by the
/// two coders together.
pub fn chance_agreement<L: Ord + Clone>(input: &AgreementInput<L>) -> Result<f64> {
    input.require_items()?;
    let mut counts: BTreeMap<&L, usize> = input.categories.iter().map(|c| (c, 0)).collect();
    for (a, b) in &input.items {
        *counts.entry(a).or_default() += 1;
        *counts.entry(b).or_default() += 1;
    }
    let total = 2.0 * input.items.len() as f64;
    Ok(counts
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum())
}

pub fn kappa<L: Ord + Clone>(input: &AgreementInput<L>) -> Result<KappaResult> {
    let p_a = percent_agreement(input)?;
    let p_e = chance_agreement(input)?;
    if p_e >= 1.0 - 1e-15 {
        return Err(Error::DegenerateDistribution);
    }
    let kappa = (p_a - p_e) / (1.0 - p_e);
    Ok(KappaResult {
        p_a,
        p_e,
        kappa,
        band: ReliabilityBand::from_kappa(kappa),
        below_scale: kappa < 0.0,
    })
}

/// Which coded column to compare across two coder files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CodedColumn {
    Form,
    Feature(Feature),
}

impl CodedColumn {
    pub const ALL: [CodedColumn; 4] = [
        CodedColumn::Form,
        CodedColumn::Feature(Feature::Intention),
        CodedColumn::Feature(Feature::Awareness),
        CodedColumn::Feature(Feature::Safety),
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodedColumn::Form => "form",
            CodedColumn::Feature(Feature::Intention) => "intentionality",
            CodedColumn::Feature(f) => f.name(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("form") {
            Ok(CodedColumn::Form)
        } else {
            s.parse().map(CodedColumn::Feature)
        }
    }
}

/// Pairs two coders' values of one column over the ids both have coded, in
/// `a`'s order.
pub fn paired_labels(
    a: &Dataset,
    b: &Dataset,
    column: CodedColumn,
) -> AgreementInput<&'static str> {
    let value = |e: &crate::coding::CodedExample| match column {
        CodedColumn::Form => e.form.token(),
        CodedColumn::Feature(f) => e.features.token(f),
    };
    let by_id: BTreeMap<&str, &crate::coding::CodedExample> = b
        .examples
        .iter()
        .rev()
        .map(|e| (e.id.as_str(), e))
        .collect();
    let items = a
        .examples
        .iter()
        .filter_map(|ea| by_id.get(ea.id.as_str()).map(|eb| (value(ea), value(eb))))
        .collect();
    AgreementInput::new(items)
}
