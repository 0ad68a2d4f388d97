//! Compilation of a learned decision tree into a micro-planning system
//! network.
//!
//! Each internal tree node becomes a system that asks for the value of one
//! function feature; each leaf becomes a terminal choice carrying the
//! sentence-plan directives for its form, one per language. The result keeps
//! the shape of the tree, so:
//!
//! * realization statements sit on terminal choices only, never on a system;
//! * a feature tested in several sub-trees yields several systems, told
//!   apart by integer suffixes (`safety-1`, `safety-2`);
//! * there is a single tree of systems with no metafunctional partition.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::c45::TreeNode;
use crate::coding::{Feature, FeatureValue, FormLabel};
use crate::{Error, Language, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeechAct {
    Imperative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

/// A matrix clause that takes the prevented action as its complement, as in
/// "take care not to ..." or "éviter de ...".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MatrixClause {
    pub verb: String,
    pub complementizer: String,
    /// Whether the complement itself carries the negation.
    #[serde(default)]
    pub negate_complement: bool,
}

/// Sentence-plan directive for one form in one language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SplDirective {
    pub speech_act: SpeechAct,
    pub polarity: Polarity,
    /// Negative adverb replacing the plain negator ("never", "jamais").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adverb: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixClause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationStatement {
    pub form: FormLabel,
    pub spl: BTreeMap<Language, SplDirective>,
}

/// Grammatical form specifications: per form, one directive per language.
pub type FormSpecs = BTreeMap<FormLabel, BTreeMap<Language, SplDirective>>;

/// Parses a form-specification file.
pub fn parse_form_specs(content: &str) -> Result<FormSpecs> {
    Ok(serde_json::from_str(content)?)
}

/// The bundled English and French form specifications.
pub fn default_form_specs() -> FormSpecs {
    parse_form_specs(include_str!("../data/forms.json")).expect("bundled form specs are valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompilerInputs {
    pub languages: BTreeSet<Language>,
    /// Features that gate entry to the compiled sub-network.
    pub entry_features: Vec<String>,
    pub tree: TreeNode,
    /// Name of the function the micro-planner uses to answer each system's
    /// question.
    pub value_binding: String,
    pub form_specs: FormSpecs,
    pub output_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Branch {
    System { system: String },
    Terminal { realization: RealizationStatement },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub value: String,
    /// Output feature selected by this choice; also the entry condition of
    /// the system it leads to.
    pub feature: String,
    pub next: Branch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct System {
    pub name: String,
    pub entry_condition: String,
    pub question_feature: Feature,
    pub choices: Vec<Choice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemNetwork {
    pub name: String,
    pub languages: BTreeSet<Language>,
    pub entry_features: Vec<String>,
    pub value_binding: String,
    pub root: Branch,
    pub systems: Vec<System>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub system: String,
    pub value: String,
}

/// Outcome of one pass through a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Traversal {
    pub form: FormLabel,
    pub directive: SplDirective,
    pub trace: Vec<TraceStep>,
}

pub fn compile(inputs: &CompilerInputs) -> Result<SystemNetwork> {
    inputs.tree.validate()?;
    if inputs.languages.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one language is required".into(),
        ));
    }
    let mut statements = BTreeMap::new();
    for label in inputs.tree.leaf_labels() {
        let spec = inputs
            .form_specs
            .get(&label)
            .ok_or(Error::MissingFormSpec(label))?;
        let mut spl = BTreeMap::new();
        for &language in &inputs.languages {
            let directive = spec.get(&language).ok_or(Error::MissingDirective {
                form: label,
                language,
            })?;
            spl.insert(language, directive.clone());
        }
        statements.insert(label, RealizationStatement { form: label, spl });
    }

    let mut uses: HashMap<Feature, usize> = HashMap::new();
    count_uses(&inputs.tree, &mut uses);
    let mut compiler = Compiler {
        uses,
        issued: HashMap::new(),
        statements,
        systems: Vec::new(),
    };
    let root = compiler.branch(&inputs.tree, inputs.entry_features.join(" & "));
    Ok(SystemNetwork {
        name: inputs.output_name.clone(),
        languages: inputs.languages.clone(),
        entry_features: inputs.entry_features.clone(),
        value_binding: inputs.value_binding.clone(),
        root,
        systems: compiler.systems,
    })
}

fn count_uses(node: &TreeNode, uses: &mut HashMap<Feature, usize>) {
    if let TreeNode::Internal { feature, children } = node {
        *uses.entry(*feature).or_default() += 1;
        children.iter().for_each(|c| count_uses(c, uses));
    }
}

struct Compiler {
    uses: HashMap<Feature, usize>,
    issued: HashMap<Feature, usize>,
    statements: BTreeMap<FormLabel, RealizationStatement>,
    systems: Vec<System>,
}

impl Compiler {
    fn system_name(&mut self, feature: Feature) -> String {
        if self.uses[&feature] <= 1 {
            return feature.name().to_string();
        }
        let n = self.issued.entry(feature).or_default();
        *n += 1;
        format!("{}-{}", feature.name(), n)
    }

    /// Emits systems in pre-order so the root system comes first.
    fn branch(&mut self, node: &TreeNode, entry_condition: String) -> Branch {
        match node {
            TreeNode::Leaf { label, .. } => Branch::Terminal {
                realization: self.statements[label].clone(),
            },
            TreeNode::Internal { feature, children } => {
                let name = self.system_name(*feature);
                let slot = self.systems.len();
                self.systems.push(System {
                    name: name.clone(),
                    entry_condition,
                    question_feature: *feature,
                    choices: Vec::new(),
                });
                let choices = feature
                    .values()
                    .iter()
                    .zip(children)
                    .map(|(value, child)| {
                        let out_feature = format!("{name}-{}", value.to_ascii_lowercase());
                        Choice {
                            value: value.to_string(),
                            feature: out_feature.clone(),
                            next: self.branch(child, out_feature),
                        }
                    })
                    .collect();
                self.systems[slot].choices = choices;
                Branch::System { system: name }
            }
        }
    }
}

/// Walks the network from the root, answering each system's question from
/// `values`, and returns the directive of the terminal reached.
pub fn traverse(
    network: &SystemNetwork,
    values: &FeatureValue,
    language: Language,
) -> Result<Traversal> {
    if !network.languages.contains(&language) {
        return Err(Error::UnsupportedLanguage(language.to_string()));
    }
    let index: HashMap<&str, &System> = network
        .systems
        .iter()
        .map(|s| (s.name.as_str(), s))
        .collect();
    let mut trace = Vec::new();
    let mut branch = &network.root;
    // A valid network is a tree, so the walk is bounded by its size.
    for _ in 0..=network.systems.len() {
        match branch {
            Branch::Terminal { realization } => {
                let directive = realization
                    .spl
                    .get(&language)
                    .ok_or(Error::MissingDirective {
                        form: realization.form,
                        language,
                    })?
                    .clone();
                return Ok(Traversal {
                    form: realization.form,
                    directive,
                    trace,
                });
            }
            Branch::System { system } => {
                let sys = index
                    .get(system.as_str())
                    .ok_or_else(|| Error::Network(format!("unknown system {system:?}")))?;
                let value = values.token(sys.question_feature);
                let choice = sys
                    .choices
                    .iter()
                    .find(|c| c.value == value)
                    .ok_or_else(|| {
                        Error::Network(format!("system {} has no choice for {value}", sys.name))
                    })?;
                trace.push(TraceStep {
                    system: sys.name.clone(),
                    value: value.to_string(),
                });
                branch = &choice.next;
            }
        }
    }
    Err(Error::Network("traversal does not terminate".into()))
}

impl SystemNetwork {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("network serializes");
        s.push('\n');
        s
    }

    /// Parses and validates a network file. Syntax errors carry the line and
    /// column from the JSON parser; structural errors name the system.
    pub fn from_json(content: &str) -> Result<Self> {
        let network: SystemNetwork = serde_json::from_str(content)?;
        network.validate()?;
        Ok(network)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Network(m));
        if self.languages.is_empty() {
            return bad("no languages".into());
        }
        let mut index: HashMap<&str, &System> = HashMap::new();
        for s in &self.systems {
            if index.insert(s.name.as_str(), s).is_some() {
                return bad(format!("duplicate system name {:?}", s.name));
            }
            let values = s.question_feature.values();
            let got: BTreeSet<&str> = s.choices.iter().map(|c| c.value.as_str()).collect();
            if s.choices.len() != values.len() || got != values.into_iter().collect() {
                return bad(format!(
                    "system {:?} must offer exactly the choices {values:?}",
                    s.name
                ));
            }
        }

        let mut referenced: BTreeSet<&str> = BTreeSet::new();
        let mut stack = vec![&self.root];
        while let Some(branch) = stack.pop() {
            match branch {
                Branch::Terminal { realization } => {
                    for l in &self.languages {
                        if !realization.spl.contains_key(l) {
                            return bad(format!(
                                "{} realization lacks a {l} directive",
                                realization.form
                            ));
                        }
                    }
                }
                Branch::System { system } => {
                    let Some(sys) = index.get(system.as_str()) else {
                        return bad(format!("reference to unknown system {system:?}"));
                    };
                    if !referenced.insert(system.as_str()) {
                        return bad(format!(
                            "system {system:?} is entered from more than one choice"
                        ));
                    }
                    stack.extend(sys.choices.iter().map(|c| &c.next));
                }
            }
        }
        if let Some(orphan) = self
            .systems
            .iter()
            .find(|s| !referenced.contains(s.name.as_str()))
        {
            return bad(format!(
                "system {:?} is unreachable from the root",
                orphan.name
            ));
        }
        Ok(())
    }

    /// Every system with its question, in file order; handy for printing.
    pub fn outline(&self) -> Vec<String> {
        self.systems
            .iter()
            .map(|s| {
                let choices: Vec<String> = s
                    .choices
                    .iter()
                    .map(|c| match &c.next {
                        Branch::System { system } => format!("{} -> {system}", c.feature),
                        Branch::Terminal { realization } => {
                            format!("{} => {}", c.feature, realization.form)
                        }
                    })
                    .collect();
                format!(
                    "{} [{}] ({})",
                    s.name,
                    s.entry_condition,
                    choices.join(", ")
                )
            })
            .collect()
    }
}
