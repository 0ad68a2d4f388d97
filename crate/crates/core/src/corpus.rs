//! Sentence breaking, string probing and seeded sampling over raw
//! instructional text.

use std::collections::BTreeSet;
use std::path::Path;

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One expression produced by the sentence breaker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expression {
    pub id: usize,
    pub text: String,
    pub source: String,
}

/// A literal probe string. Matching is case-insensitive and anchored on word
/// boundaries at both ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbePattern {
    pub label: String,
    pub pattern: String,
}

impl ProbePattern {
    pub fn new(literal: &str) -> Self {
        ProbePattern {
            label: literal.to_string(),
            pattern: literal.to_string(),
        }
    }

    /// The seven negative-imperative probes: two DONT spellings, NEVER, and
    /// the four Neg-TC matrix phrases.
    pub fn defaults() -> Vec<ProbePattern> {
        [
            "don't",
            "do not",
            "never",
            "take care",
            "make sure",
            "be careful",
            "be sure",
        ]
        .into_iter()
        .map(ProbePattern::new)
        .collect()
    }

    /// Reads one pattern per line; blank lines and `#` comments are skipped.
    pub fn parse_list(content: &str) -> Vec<ProbePattern> {
        content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| ProbePattern::new(&normalize_apostrophes(l)))
            .collect()
    }

    fn compile(&self) -> Regex {
        let words: Vec<String> = normalize_apostrophes(&self.pattern)
            .split_whitespace()
            .map(regex::escape)
            .collect();
        let body = words.join(r"\s+");
        Regex::new(&format!(r"(?i)\b{body}\b")).expect("escaped literal is a valid regex")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub counts: IndexMap<String, usize>,
    pub hits: IndexMap<String, Vec<Expression>>,
    pub total_expressions: usize,
    pub hit_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<IndexMap<String, Vec<Expression>>>,
}

impl ProbeReport {
    /// Replaces every label's hits with a seeded sample of at most `cap`.
    pub fn with_samples(mut self, cap: usize, seed: u64) -> Result<Self> {
        let mut samples = IndexMap::new();
        for (label, hits) in &self.hits {
            samples.insert(label.clone(), sample(hits, cap, seed)?);
        }
        self.samples = Some(samples);
        Ok(self)
    }
}

fn normalize_apostrophes(s: &str) -> String {
    s.replace(['\u{2019}', '\u{2018}'], "'")
}

const CLOSERS: [char; 7] = ['"', '\'', ')', ']', '\u{201d}', '\u{2019}', '\u{bb}'];
const OPENERS: [char; 6] = ['"', '\'', '(', '[', '\u{201c}', '\u{ab}'];
const LIST_BULLETS: [char; 4] = ['-', '*', '+', '\u{2022}'];

/// Splits raw text into expressions.
///
/// A boundary falls after `.`, `!` or `?` (plus any closing quotes or
/// brackets) when what follows is whitespace and an uppercase letter
/// (possibly behind opening quotes or brackets), or the end of input. Blank lines and newlines that open a list item (`-`, `*`,
/// `+`, `•`, `1.`, `2)`) are boundaries too. A period that closes a bare
/// enumeration number ("1.") never ends an expression. Internal whitespace is
/// collapsed to single spaces.
pub fn break_sentences(raw_text: &str, source: &str) -> Vec<Expression> {
    let chars: Vec<char> = raw_text.chars().collect();
    let mut cuts = vec![0];
    let mut seg_start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            let mut k = i + 1;
            while k < chars.len() && chars[k].is_whitespace() && chars[k] != '\n' {
                k += 1;
            }
            if k < chars.len() && (chars[k] == '\n' || starts_list_item(&chars, k)) {
                cuts.push(k);
                seg_start = k;
                i = k;
                continue;
            }
        } else if matches!(c, '.' | '!' | '?') && !is_enumerator(&chars[seg_start..i], c) {
            let mut j = i + 1;
            while j < chars.len()
                && (matches!(chars[j], '.' | '!' | '?') || CLOSERS.contains(&chars[j]))
            {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].is_whitespace() {
                k += 1;
            }
            let mut u = k;
            while u < chars.len() && OPENERS.contains(&chars[u]) {
                u += 1;
            }
            if k == chars.len() || (k > j && u < chars.len() && chars[u].is_uppercase()) {
                cuts.push(j);
                seg_start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    cuts.push(chars.len());

    cuts.windows(2)
        .map(|w| chars[w[0]..w[1]].iter().collect::<String>())
        .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(id, text)| Expression {
            id,
            text,
            source: source.to_string(),
        })
        .collect()
}

fn starts_list_item(chars: &[char], at: usize) -> bool {
    let followed_by_space = |k: usize| k < chars.len() && chars[k].is_whitespace();
    if LIST_BULLETS.contains(&chars[at]) {
        return followed_by_space(at + 1);
    }
    let mut k = at;
    while k < chars.len() && chars[k].is_ascii_digit() {
        k += 1;
    }
    k > at && k < chars.len() && matches!(chars[k], '.' | ')') && followed_by_space(k + 1)
}

fn is_enumerator(segment_so_far: &[char], punct: char) -> bool {
    let token: Vec<&char> = segment_so_far
        .iter()
        .filter(|c| !c.is_whitespace())
        .collect();
    punct == '.' && !token.is_empty() && token.iter().all(|c| c.is_ascii_digit())
}

/// Reads every `*.txt` file in `dir` (sorted by file name) and breaks each
/// into expressions, using the file name as the source identifier.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<Expression>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path)?;
        let source = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        out.extend(break_sentences(&text, &source));
    }
    Ok(out)
}

/// Collects, per pattern, every expression whose text contains it.
pub fn probe(expressions: &[Expression], patterns: &[ProbePattern]) -> Result<ProbeReport> {
    if patterns.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one probe pattern is required".into(),
        ));
    }
    let compiled: Vec<Regex> = patterns.iter().map(ProbePattern::compile).collect();
    let mut hits: IndexMap<String, Vec<Expression>> = patterns
        .iter()
        .map(|p| (p.label.clone(), Vec::new()))
        .collect();
    let mut distinct = BTreeSet::new();
    for (n, expr) in expressions.iter().enumerate() {
        let text = normalize_apostrophes(&expr.text);
        for (pattern, re) in patterns.iter().zip(&compiled) {
            if re.is_match(&text) {
                hits[&pattern.label].push(expr.clone());
                distinct.insert(n);
            }
        }
    }
    let counts = hits.iter().map(|(l, h)| (l.clone(), h.len())).collect();
    let hit_fraction = if expressions.is_empty() {
        0.0
    } else {
        distinct.len() as f64 / expressions.len() as f64
    };
    Ok(ProbeReport {
        counts,
        hits,
        total_expressions: expressions.len(),
        hit_fraction,
        samples: None,
    })
}

/// Draws `min(cap, items.len())` distinct items uniformly without
/// replacement. Selected items keep their input order.
pub fn sample<T: Clone>(items: &[T], cap: usize, seed: u64) -> Result<Vec<T>> {
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "sample cap must be at least 1".into(),
        ));
    }
    if items.len() <= cap {
        return Ok(items.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, items.len(), cap).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| items[i].clone()).collect())
}
