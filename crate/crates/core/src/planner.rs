//! Procedure models and document planning.
//!
//! A procedure has a goal and one or more methods; each method lists its
//! steps and may carry a warning slot naming an action to prevent. Planning
//! produces one title plan, one numbered plan per step, and one warning plan
//! per warning slot. The form of each warning comes from a compiled
//! [`SystemNetwork`], whose questions are answered from the author-supplied
//! [`GenerationParams`].

use serde::{Deserialize, Serialize};

use crate::coding::{Awareness, FeatureValue, FormLabel, Intentionality, Safety};
use crate::network::{traverse, SplDirective, SystemNetwork, TraceStep};
use crate::{Error, Language, Result};

/// Name under which the warning-parameter lookup is bound in compiled
/// networks.
pub const VALUE_BINDING: &str = "warning-params";

fn reader() -> String {
    "reader".to_string()
}

/// A language-independent action: lexical keys, not surface strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionProposition {
    pub id: String,
    /// Unexpressed in imperatives.
    #[serde(default = "reader")]
    pub actor: String,
    pub process: String,
    pub patient: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modifiers: Vec<String>,
}

impl ActionProposition {
    pub fn new(id: &str, process: &str, patient: &str) -> Self {
        ActionProposition {
            id: id.to_string(),
            actor: reader(),
            process: process.to_string(),
            patient: patient.to_string(),
            modifiers: Vec::new(),
        }
    }

    /// Outline rendering, e.g. `[reader] damage service cover`.
    pub fn pseudo_text(&self) -> String {
        let mut parts = vec![
            format!("[{}]", self.actor),
            self.process.clone(),
            self.patient.replace('-', " "),
        ];
        parts.extend(self.modifiers.iter().map(|m| m.replace('-', " ")));
        parts.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WarningMode {
    Prevent,
    Ensure,
}

/// The four warning parameters an author sets by hand. None has a default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationParams {
    pub mode: WarningMode,
    pub safety: Safety,
    pub intentionality: Intentionality,
    pub awareness: Awareness,
}

impl GenerationParams {
    pub fn prevent(safety: Safety, intentionality: Intentionality, awareness: Awareness) -> Self {
        GenerationParams {
            mode: WarningMode::Prevent,
            safety,
            intentionality,
            awareness,
        }
    }

    /// The feature-value function the network's systems are answered from.
    pub fn feature_values(&self) -> FeatureValue {
        FeatureValue::new(self.awareness, self.intentionality, self.safety)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarningSpec {
    /// The action to be prevented.
    pub action: ActionProposition,
    pub params: GenerationParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Method {
    pub name: String,
    pub steps: Vec<ActionProposition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<WarningSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureModel {
    #[serde(default)]
    pub id: String,
    pub goal: ActionProposition,
    pub methods: Vec<Method>,
}

impl ProcedureModel {
    pub fn from_json(content: &str) -> Result<Self> {
        let model: ProcedureModel = serde_json::from_str(content)?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("procedure serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument(
                "a procedure needs at least one method".into(),
            ));
        }
        if let Some(m) = self.methods.iter().find(|m| m.steps.is_empty()) {
            return Err(Error::InvalidArgument(format!(
                "method {:?} has no steps",
                m.name
            )));
        }
        Ok(())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &WarningSpec> {
        self.methods.iter().filter_map(|m| m.warning.as_ref())
    }

    pub fn step_count(&self) -> usize {
        self.methods.iter().map(|m| m.steps.len()).sum()
    }

    pub fn summary(&self) -> ProcedureSummary {
        ProcedureSummary {
            id: self.id.clone(),
            goal: self.goal.pseudo_text(),
            methods: self.methods.iter().map(|m| m.name.clone()).collect(),
            steps: self.step_count(),
            warnings: self.warnings().map(|w| w.action.pseudo_text()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureSummary {
    pub id: String,
    pub goal: String,
    pub methods: Vec<String>,
    pub steps: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    Title,
    Step,
    Warning,
}

/// Form decision attached to a warning plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarningForm {
    pub form: FormLabel,
    pub directive: SplDirective,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePlan {
    pub kind: PlanKind,
    pub language: Language,
    pub proposition: ActionProposition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form_directive: Option<WarningForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_number: Option<usize>,
}

/// Plans one warning by entering the network with the warning's parameters.
pub fn plan_warning(
    spec: &WarningSpec,
    language: Language,
    network: &SystemNetwork,
) -> Result<SentencePlan> {
    if spec.params.mode == WarningMode::Ensure {
        return Err(Error::UnsupportedMode);
    }
    let t = traverse(network, &spec.params.feature_values(), language)?;
    Ok(SentencePlan {
        kind: PlanKind::Warning,
        language,
        proposition: spec.action.clone(),
        form_directive: Some(WarningForm {
            form: t.form,
            directive: t.directive,
            trace: t.trace,
        }),
        step_number: None,
    })
}

/// Title, then for each method its steps (numbered across the whole
/// procedure) followed by its warning.
pub fn plan_document(
    proc: &ProcedureModel,
    language: Language,
    network: &SystemNetwork,
) -> Result<Vec<SentencePlan>> {
    if !network.languages.contains(&language) {
        return Err(Error::UnsupportedLanguage(language.to_string()));
    }
    let mut plans = vec![SentencePlan {
        kind: PlanKind::Title,
        language,
        proposition: proc.goal.clone(),
        form_directive: None,
        step_number: None,
    }];
    let mut number = 0;
    for method in &proc.methods {
        for step in &method.steps {
            number += 1;
            plans.push(SentencePlan {
                kind: PlanKind::Step,
                language,
                proposition: step.clone(),
                form_directive: None,
                step_number: Some(number),
            });
        }
        if let Some(w) = &method.warning {
            plans.push(plan_warning(w, language, network)?);
        }
    }
    Ok(plans)
}
