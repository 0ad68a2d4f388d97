//! Template realization of sentence plans into English and French.
//!
//! Steps are bare imperatives in English and infinitives in French. Titles
//! are an infinitive of purpose in English ("To repair the device") and a
//! nominalization in French ("Réparation du dispositif"). Warnings follow
//! the directive chosen by the network:
//!
//! | form   | en                        | fr                        |
//! |--------|---------------------------|---------------------------|
//! | DONT   | Do not *verb* ...         | Ne pas *infinitive* ...   |
//! | NEVER  | Never *verb* ...          | Ne jamais *infinitive* ...|
//! | NEG_TC | Take care not to *verb*   | Éviter de *infinitive*    |

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::network::{Polarity, SplDirective};
use crate::planner::{ActionProposition, PlanKind, SentencePlan};
use crate::{Error, Language, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub infinitive: String,
    /// Imperative stem when it differs from the infinitive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imperative: Option<String>,
    /// Noun used for titles in languages that title procedures with one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nominalization: Option<String>,
    /// Preposition governing the patient ("se reporter à").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
}

impl VerbEntry {
    fn imperative(&self) -> &str {
        self.imperative.as_deref().unwrap_or(&self.infinitive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NounEntry {
    #[serde(default)]
    pub determiner: String,
    pub head: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageLexicon {
    pub verbs: BTreeMap<String, VerbEntry>,
    pub nouns: BTreeMap<String, NounEntry>,
    #[serde(default)]
    pub adjuncts: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lexicon {
    pub languages: BTreeMap<Language, LanguageLexicon>,
}

impl Lexicon {
    pub fn from_json(content: &str) -> Result<Self> {
        Ok(serde_json::from_str(content)?)
    }

    /// English and French entries for the bundled procedures.
    pub fn bundled() -> Self {
        Self::from_json(include_str!("../data/lexicon.json")).expect("bundled lexicon is valid")
    }

    fn language(&self, language: Language, key: &str) -> Result<&LanguageLexicon> {
        self.languages
            .get(&language)
            .ok_or_else(|| miss(key, language))
    }

    fn verb(&self, language: Language, key: &str) -> Result<&VerbEntry> {
        self.language(language, key)?
            .verbs
            .get(key)
            .ok_or_else(|| miss(key, language))
    }

    fn noun(&self, language: Language, key: &str) -> Result<&NounEntry> {
        self.language(language, key)?
            .nouns
            .get(key)
            .ok_or_else(|| miss(key, language))
    }

    fn adjunct(&self, language: Language, key: &str) -> Result<&str> {
        self.language(language, key)?
            .adjuncts
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| miss(key, language))
    }
}

fn miss(key: &str, language: Language) -> Error {
    Error::LexiconMiss {
        key: key.to_string(),
        language,
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn starts_with_vowel(word: &str) -> bool {
    word.chars()
        .next()
        .and_then(|c| c.to_lowercase().next())
        .is_some_and(|c| "aàâäeéèêëiîïoôöuùûüyœæ".contains(c))
}

/// French elision of a clitic before a vowel: `de` + `endommager` gives
/// `d'endommager`.
pub fn elide(word: &str, next: &str) -> String {
    if matches!(word, "de" | "ne" | "que" | "le" | "la" | "je" | "se") && starts_with_vowel(next) {
        format!("{}'{next}", &word[..word.len() - 1])
    } else {
        format!("{word} {next}")
    }
}

/// French preposition + article contraction (`à le` to `au`, `de le` to
/// `du`, and plurals).
fn fr_preposition(prep: &str, determiner: &str, head: &str) -> String {
    let fused = match (prep, determiner) {
        ("à", "le") => Some("au"),
        ("à", "les") => Some("aux"),
        ("de", "le") => Some("du"),
        ("de", "les") => Some("des"),
        _ => None,
    };
    match fused {
        Some(f) => format!("{f} {head}"),
        None if determiner.is_empty() => elide(prep, head),
        None => format!("{prep} {}", attach(determiner, head)),
    }
}

fn attach(determiner: &str, head: &str) -> String {
    if determiner.is_empty() {
        head.to_string()
    } else if determiner.ends_with('\'') {
        format!("{determiner}{head}")
    } else {
        format!("{determiner} {head}")
    }
}

fn noun_phrase(language: Language, prep: Option<&str>, noun: &NounEntry) -> String {
    match (language, prep) {
        (Language::Fr, Some(p)) => fr_preposition(p, &noun.determiner, &noun.head),
        (Language::En, Some(p)) => format!("{p} {}", attach(&noun.determiner, &noun.head)),
        (_, None) => attach(&noun.determiner, &noun.head),
    }
}

/// Patient plus adjuncts, as they follow the verb.
fn complement(
    lexicon: &Lexicon,
    language: Language,
    prop: &ActionProposition,
    prep: Option<&str>,
) -> Result<String> {
    let noun = lexicon.noun(language, &prop.patient)?;
    let mut out = noun_phrase(language, prep, noun);
    for m in &prop.modifiers {
        out.push(' ');
        out.push_str(lexicon.adjunct(language, m)?);
    }
    Ok(out)
}

fn warning_head(language: Language, directive: &SplDirective, verb: &VerbEntry) -> String {
    match language {
        Language::En => {
            let stem = verb.imperative();
            if let Some(m) = &directive.matrix {
                let not = if m.negate_complement { " not" } else { "" };
                format!("{}{not} {} {stem}", capitalize(&m.verb), m.complementizer)
            } else if let Some(adv) = &directive.adverb {
                format!("{} {stem}", capitalize(adv))
            } else if directive.polarity == Polarity::Negative {
                format!("Do not {stem}")
            } else {
                capitalize(stem)
            }
        }
        Language::Fr => {
            let inf = &verb.infinitive;
            if let Some(m) = &directive.matrix {
                let comp = if m.negate_complement {
                    format!("{} ne pas {inf}", m.complementizer)
                } else {
                    elide(&m.complementizer, inf)
                };
                format!("{} {comp}", capitalize(&m.verb))
            } else if let Some(adv) = &directive.adverb {
                capitalize(&elide("ne", &format!("{adv} {inf}")))
            } else if directive.polarity == Polarity::Negative {
                format!("Ne pas {inf}")
            } else {
                capitalize(inf)
            }
        }
    }
}

/// Renders one plan as a single sentence (titles carry no final period).
pub fn realize_plan(plan: &SentencePlan, lexicon: &Lexicon) -> Result<String> {
    let language = plan.language;
    let prop = &plan.proposition;
    let verb = lexicon.verb(language, &prop.process)?;
    let prep = verb.preposition.as_deref();
    match plan.kind {
        PlanKind::Title => match language {
            Language::En => Ok(format!(
                "To {} {}",
                verb.infinitive,
                complement(lexicon, language, prop, prep)?
            )),
            Language::Fr => {
                let noun = verb
                    .nominalization
                    .as_deref()
                    .ok_or_else(|| miss(&format!("{}#nominalization", prop.process), language))?;
                Ok(format!(
                    "{} {}",
                    capitalize(noun),
                    complement(lexicon, language, prop, Some("de"))?
                ))
            }
        },
        PlanKind::Step => {
            let head = match language {
                Language::En => verb.imperative(),
                Language::Fr => &verb.infinitive,
            };
            Ok(format!(
                "{} {}.",
                capitalize(head),
                complement(lexicon, language, prop, prep)?
            ))
        }
        PlanKind::Warning => {
            let form = plan.form_directive.as_ref().ok_or_else(|| {
                Error::InvalidArgument("warning plan without a form directive".into())
            })?;
            Ok(format!(
                "{} {}.",
                warning_head(language, &form.directive, verb),
                complement(lexicon, language, prop, prep)?
            ))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedDocument {
    pub title: String,
    pub steps: Vec<String>,
    pub warnings: Vec<String>,
    /// Every output line in plan order.
    pub lines: Vec<String>,
    /// Lines joined with `\n`, without a trailing newline.
    pub text: String,
}

/// Lays out plans one per line: the title as is, steps as `N. ...`, warnings
/// as `- ...`.
pub fn render_document(plans: &[SentencePlan], lexicon: &Lexicon) -> Result<RenderedDocument> {
    let mut doc = RenderedDocument {
        title: String::new(),
        steps: Vec::new(),
        warnings: Vec::new(),
        lines: Vec::with_capacity(plans.len()),
        text: String::new(),
    };
    for plan in plans {
        let sentence = realize_plan(plan, lexicon)?;
        let line = match plan.kind {
            PlanKind::Title => {
                doc.title = sentence.clone();
                sentence
            }
            PlanKind::Step => {
                let line = format!(
                    "{}. {sentence}",
                    plan.step_number.unwrap_or(doc.steps.len() + 1)
                );
                doc.steps.push(line.clone());
                line
            }
            PlanKind::Warning => {
                let line = format!("- {sentence}");
                doc.warnings.push(line.clone());
                line
            }
        };
        doc.lines.push(line);
    }
    doc.text = doc.lines.join("\n");
    Ok(doc)
}
