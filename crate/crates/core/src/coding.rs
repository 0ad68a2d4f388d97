//! The annotation schema: one grammatical form label plus three function
//! features per coded expression, read from coder CSV files.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Grammatical form of a preventative expression. The declaration order
/// (DONT, NEVER, NEG_TC) is the tie-break order wherever one is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormLabel {
    #[serde(rename = "DONT")]
    Dont,
    #[serde(rename = "NEVER")]
    Never,
    #[serde(rename = "NEG_TC", alias = "NEG-TC")]
    NegTc,
}

impl FormLabel {
    pub const ALL: [FormLabel; 3] = [FormLabel::Dont, FormLabel::Never, FormLabel::NegTc];

    pub fn token(self) -> &'static str {
        match self {
            FormLabel::Dont => "DONT",
            FormLabel::Never => "NEVER",
            FormLabel::NegTc => "NEG_TC",
        }
    }

    /// Spelling used in printed trees (`NEG-TC`).
    pub fn display_name(self) -> &'static str {
        match self {
            FormLabel::NegTc => "NEG-TC",
            other => other.token(),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FormLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FormLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "DONT" => Ok(FormLabel::Dont),
            "NEVER" => Ok(FormLabel::Never),
            "NEG_TC" => Ok(FormLabel::NegTc),
            _ => Err(format!(
                "unknown form {s:?} (expected DONT, NEVER or NEG_TC)"
            )),
        }
    }
}

macro_rules! binary_feature {
    ($(#[$meta:meta])* $name:ident { $first:ident = $ft:literal, $second:ident = $st:literal }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            #[serde(rename = $ft)]
            $first,
            #[serde(rename = $st)]
            $second,
        }

        impl $name {
            pub const TOKENS: [&'static str; 2] = [$ft, $st];

            pub fn token(self) -> &'static str {
                Self::TOKENS[self as usize]
            }

            pub fn from_index(i: usize) -> Self {
                if i == 0 { $name::$first } else { $name::$second }
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $ft => Ok($name::$first),
                    $st => Ok($name::$second),
                    _ => Err(format!("unknown {} value {s:?} (expected {} or {})", stringify!($name), $ft, $st)),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }
    };
}

binary_feature!(
    /// Whether the agent is expected to adopt the intention of performing
    /// the prevented action (CON) or not realize a choice is involved (UNC).
    Intentionality { Con = "CON", Unc = "UNC" }
);
binary_feature!(
    /// Whether the agent is aware that the prevented action is bad.
    Awareness { Aw = "AW", Unaw = "UNAW" }
);
binary_feature!(
    /// Whether performing the action puts the agent's safety at risk (BADP)
    /// or is merely inconvenient (NOT).
    Safety { Badp = "BADP", Not = "NOT" }
);

/// A function feature as used by the learner and the compiled network. Names
/// sort lexicographically in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feature {
    Awareness,
    #[serde(alias = "intentionality")]
    Intention,
    Safety,
}

impl Feature {
    pub const ALL: [Feature; 3] = [Feature::Awareness, Feature::Intention, Feature::Safety];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Awareness => "awareness",
            Feature::Intention => "intention",
            Feature::Safety => "safety",
        }
    }

    /// Value tokens in canonical order.
    pub fn values(self) -> [&'static str; 2] {
        match self {
            Feature::Awareness => Awareness::TOKENS,
            Feature::Intention => Intentionality::TOKENS,
            Feature::Safety => Safety::TOKENS,
        }
    }

    pub fn value_index(self, token: &str) -> Option<usize> {
        self.values().iter().position(|v| *v == token)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "awareness" => Ok(Feature::Awareness),
            "intention" | "intentionality" => Ok(Feature::Intention),
            "safety" => Ok(Feature::Safety),
            _ => Err(Error::InvalidArgument(format!("unknown feature {s:?}"))),
        }
    }
}

/// A complete assignment of the three function features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeatureValue {
    pub intentionality: Intentionality,
    pub awareness: Awareness,
    pub safety: Safety,
}

impl FeatureValue {
    pub fn new(awareness: Awareness, intentionality: Intentionality, safety: Safety) -> Self {
        FeatureValue {
            intentionality,
            awareness,
            safety,
        }
    }

    pub fn index(&self, feature: Feature) -> usize {
        match feature {
            Feature::Awareness => self.awareness as usize,
            Feature::Intention => self.intentionality as usize,
            Feature::Safety => self.safety as usize,
        }
    }

    pub fn token(&self, feature: Feature) -> &'static str {
        feature.values()[self.index(feature)]
    }

    /// All eight assignments, in (awareness, intentionality, safety) order.
    pub fn all() -> Vec<FeatureValue> {
        let mut out = Vec::with_capacity(8);
        for a in 0..2 {
            for i in 0..2 {
                for s in 0..2 {
                    out.push(FeatureValue::new(
                        Awareness::from_index(a),
                        Intentionality::from_index(i),
                        Safety::from_index(s),
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedExample {
    pub id: String,
    pub text: String,
    pub form: FormLabel,
    pub features: FeatureValue,
    pub coder: String,
    /// Free-text sub-form ("don't", "be careful", ...). Carried through but
    /// not used for learning.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subform: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub examples: Vec<CodedExample>,
    pub coders: BTreeSet<String>,
}

/// Coder identifier given to the output of [`agreed_subset`].
pub const AGREED_CODER: &str = "agreed";

pub const HEADER: [&str; 7] = [
    "id",
    "text",
    "form",
    "intentionality",
    "awareness",
    "safety",
    "coder",
];

impl Dataset {
    pub fn from_examples(examples: Vec<CodedExample>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &examples {
            if !seen.insert((e.id.as_str(), e.coder.as_str())) {
                return Err(Error::DuplicateKey {
                    id: e.id.clone(),
                    coder: e.coder.clone(),
                });
            }
        }
        let coders = examples.iter().map(|e| e.coder.clone()).collect();
        Ok(Dataset { examples, coders })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Serializes in the same CSV layout [`parse_dataset`] reads. The
    /// `subform` column is written only when some example carries one.
    pub fn to_csv(&self) -> Result<String> {
        let with_subform = self.examples.iter().any(|e| e.subform.is_some());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = HEADER.to_vec();
        if with_subform {
            header.push("subform");
        }
        w.write_record(&header).map_err(csv_io)?;
        for e in &self.examples {
            let mut row = vec![
                e.id.as_str(),
                e.text.as_str(),
                e.form.token(),
                e.features.intentionality.token(),
                e.features.awareness.token(),
                e.features.safety.token(),
                e.coder.as_str(),
            ];
            if with_subform {
                row.push(e.subform.as_deref().unwrap_or(""));
            }
            w.write_record(&row).map_err(csv_io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits the UTF-8 it was given"))
    }
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Parses a coder CSV. Data rows are numbered from 1 in error messages.
pub fn parse_dataset(content: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(content.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(0, "header", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let has_subform = match header.len() {
        7 => false,
        8 if header[7] == "subform" => true,
        _ => {
            return Err(parse_err(
                0,
                "header",
                format!(
                    "expected columns {}[,subform], found {}",
                    HEADER.join(","),
                    header.join(",")
                ),
            ))
        }
    };
    if header[..7] != HEADER {
        return Err(parse_err(
            0,
            "header",
            format!(
                "expected columns {}[,subform], found {}",
                HEADER.join(","),
                header.join(",")
            ),
        ));
    }

    let mut examples = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let row = n + 1;
        let record = record.map_err(|e| parse_err(row, "*", e.to_string()))?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let id = field(0).to_string();
        if id.is_empty() {
            return Err(parse_err(row, "id", "empty id".into()));
        }
        let coder = field(6).to_string();
        if coder.is_empty() {
            return Err(parse_err(row, "coder", "empty coder".into()));
        }
        let subform = has_subform
            .then(|| field(7).to_string())
            .filter(|s| !s.is_empty());
        examples.push(CodedExample {
            id,
            text: field(1).to_string(),
            form: field(2).parse().map_err(|m| parse_err(row, HEADER[2], m))?,
            features: FeatureValue {
                intentionality: field(3).parse().map_err(|m| parse_err(row, HEADER[3], m))?,
                awareness: field(4).parse().map_err(|m| parse_err(row, HEADER[4], m))?,
                safety: field(5).parse().map_err(|m| parse_err(row, HEADER[5], m))?,
            },
            coder,
            subform,
        });
    }
    Dataset::from_examples(examples)
}

fn parse_err(row: usize, column: &str, message: String) -> Error {
    Error::Parse {
        row,
        column: column.to_string(),
        message,
    }
}

/// Keeps the examples both coders coded identically on form and all three
/// features, in `a`'s order. Both inputs are expected to hold a single
/// coder each; ids are matched on their first occurrence in `b`.
pub fn agreed_subset(a: &Dataset, b: &Dataset) -> Dataset {
    let mut by_id: HashMap<&str, &CodedExample> = HashMap::new();
    for e in &b.examples {
        by_id.entry(e.id.as_str()).or_insert(e);
    }
    let examples: Vec<CodedExample> = a
        .examples
        .iter()
        .filter(|ea| {
            by_id
                .get(ea.id.as_str())
                .is_some_and(|eb| eb.form == ea.form && eb.features == ea.features)
        })
        .map(|e| CodedExample {
            coder: AGREED_CODER.to_string(),
            ..e.clone()
        })
        .collect();
    let coders = if examples.is_empty() {
        BTreeSet::new()
    } else {
        BTreeSet::from([AGREED_CODER.to_string()])
    };
    Dataset { examples, coders }
}

/// Per-form example counts, indexable by [`FormLabel`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    #[serde(rename = "DONT")]
    pub dont: usize,
    #[serde(rename = "NEVER")]
    pub never: usize,
    #[serde(rename = "NEG_TC")]
    pub neg_tc: usize,
}

impl ClassCounts {
    pub fn get(&self, label: FormLabel) -> usize {
        match label {
            FormLabel::Dont => self.dont,
            FormLabel::Never => self.never,
            FormLabel::NegTc => self.neg_tc,
        }
    }

    pub fn add(&mut self, label: FormLabel, n: usize) {
        match label {
            FormLabel::Dont => self.dont += n,
            FormLabel::Never => self.never += n,
            FormLabel::NegTc => self.neg_tc += n,
        }
    }

    pub fn total(&self) -> usize {
        self.dont + self.never + self.neg_tc
    }

    pub fn from_labels(labels: impl IntoIterator<Item = FormLabel>) -> Self {
        let mut c = ClassCounts::default();
        for l in labels {
            c.add(l, 1);
        }
        c
    }

    /// Most frequent label; ties go to the earliest label in DONT, NEVER,
    /// NEG_TC order.
    pub fn majority(&self) -> FormLabel {
        let mut best = FormLabel::Dont;
        for l in FormLabel::ALL {
            if self.get(l) > self.get(best) {
                best = l;
            }
        }
        best
    }

    pub fn nonzero_classes(&self) -> usize {
        FormLabel::ALL.iter().filter(|l| self.get(**l) > 0).count()
    }
}

impl fmt::Display for ClassCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DONT={} NEVER={} NEG_TC={}",
            self.dont, self.never, self.neg_tc
        )
    }
}

pub fn class_distribution(d: &Dataset) -> ClassCounts {
    ClassCounts::from_labels(d.examples.iter().map(|e| e.form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HEAD: &str = "id,text,form,intentionality,awareness,safety,coder\n";

    #[test]
    fn empty_body() {
        let d = parse_dataset(HEAD).unwrap();
        assert!(d.is_empty());
        assert_eq!(class_distribution(&d), ClassCounts::default());
    }

    #[test]
    fn one_row() {
        let d =
            parse_dataset(&format!("{HEAD}e1,\"Don't sand it\",DONT,UNC,UNAW,NOT,A\n")).unwrap();
        assert_eq!(d.len(), 1);
        let e = &d.examples[0];
        assert_eq!(e.text, "Don't sand it");
        assert_eq!(e.form, FormLabel::Dont);
        assert_eq!(
            e.features,
            FeatureValue::new(Awareness::Unaw, Intentionality::Unc, Safety::Not)
        );
        assert_eq!(d.coders, BTreeSet::from(["A".to_string()]));
        assert_eq!(class_distribution(&d).dont, 1);
    }

    #[test]
    fn invalid_enum_names_row_and_column() {
        let csv = format!("{HEAD}e1,ok,DONT,UNC,UNAW,NOT,A\ne2,bad,MAYBE,UNC,UNAW,NOT,A\n");
        match parse_dataset(&csv) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "form");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let csv = format!("{HEAD}e1,ok,DONT,UNC,SORT_OF,NOT,A\n");
        assert!(
            matches!(parse_dataset(&csv), Err(Error::Parse { column, .. }) if column == "awareness")
        );
    }

    #[test]
    fn duplicate_id_coder_rejected() {
        let csv = format!("{HEAD}e1,a,DONT,UNC,UNAW,NOT,A\ne1,b,NEVER,UNC,UNAW,BADP,A\n");
        assert!(matches!(
            parse_dataset(&csv),
            Err(Error::DuplicateKey { .. })
        ));
        let csv = format!("{HEAD}e1,a,DONT,UNC,UNAW,NOT,A\ne1,b,NEVER,UNC,UNAW,BADP,B\n");
        assert_eq!(parse_dataset(&csv).unwrap().coders.len(), 2);
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_dataset("id,text,form\n").is_err());
        assert!(
            parse_dataset("id,text,form,intentionality,awareness,safety,coder,extra\n").is_err()
        );
    }

    #[test]
    fn subform_column_is_optional_and_carried() {
        let csv = "id,text,form,intentionality,awareness,safety,coder,subform\n\
                   e1,x,NEG_TC,UNC,AW,NOT,A,be careful\ne2,y,DONT,CON,UNAW,NOT,A,\n";
        let d = parse_dataset(csv).unwrap();
        assert_eq!(d.examples[0].subform.as_deref(), Some("be careful"));
        assert_eq!(d.examples[1].subform, None);
        assert_eq!(parse_dataset(&d.to_csv().unwrap()).unwrap(), d);
    }

    #[test]
    fn agreement_cases() {
        let a = parse_dataset(&format!(
            "{HEAD}e1,x,DONT,UNC,UNAW,NOT,A\ne2,y,NEVER,UNC,UNAW,BADP,A\ne3,z,NEG_TC,CON,AW,NOT,A\n"
        ))
        .unwrap();
        let b = parse_dataset(&format!(
            "{HEAD}e3,z,NEG_TC,CON,AW,NOT,B\ne2,y,NEVER,CON,UNAW,BADP,B\ne9,q,DONT,UNC,UNAW,NOT,B\n"
        ))
        .unwrap();
        let agreed = agreed_subset(&a, &b);
        assert_eq!(agreed.examples.len(), 1);
        assert_eq!(agreed.examples[0].id, "e3");
        assert_eq!(agreed.examples[0].coder, AGREED_CODER);

        let b_disjoint = parse_dataset(&format!("{HEAD}x1,x,DONT,UNC,UNAW,NOT,B\n")).unwrap();
        assert!(agreed_subset(&a, &b_disjoint).is_empty());
    }

    #[test]
    fn majority_tie_break() {
        assert_eq!(ClassCounts::default().majority(), FormLabel::Dont);
        let c = ClassCounts {
            dont: 0,
            never: 4,
            neg_tc: 4,
        };
        assert_eq!(c.majority(), FormLabel::Never);
    }

    fn arb_example(coder: &'static str) -> impl Strategy<Value = CodedExample> {
        (0u8..12, 0usize..3, 0usize..2, 0usize..2, 0usize..2).prop_map(move |(id, f, i, a, s)| {
            CodedExample {
                id: format!("e{id}"),
                text: String::new(),
                form: FormLabel::ALL[f],
                features: FeatureValue::new(
                    Awareness::from_index(a),
                    Intentionality::from_index(i),
                    Safety::from_index(s),
                ),
                coder: coder.to_string(),
                subform: None,
            }
        })
    }

    fn dedup(v: Vec<CodedExample>) -> Dataset {
        let mut seen = HashSet::new();
        let v = v
            .into_iter()
            .filter(|e| seen.insert(e.id.clone()))
            .collect();
        Dataset::from_examples(v).unwrap()
    }

    proptest! {
        #[test]
        fn agreement_is_symmetric(a in proptest::collection::vec(arb_example("A"), 0..12),
                                  b in proptest::collection::vec(arb_example("B"), 0..12)) {
            let (a, b) = (dedup(a), dedup(b));
            let ids = |d: &Dataset| d.examples.iter().map(|e| e.id.clone()).collect::<BTreeSet<_>>();
            prop_assert_eq!(ids(&agreed_subset(&a, &b)), ids(&agreed_subset(&b, &a)));
        }

        #[test]
        fn self_agreement_is_identity(a in proptest::collection::vec(arb_example("A"), 0..12)) {
            let a = dedup(a);
            let agreed = agreed_subset(&a, &a);
            prop_assert_eq!(agreed.len(), a.len());
            for (x, y) in agreed.examples.iter().zip(&a.examples) {
                prop_assert_eq!(&CodedExample { coder: "A".into(), ..x.clone() }, y);
            }
            prop_assert_eq!(class_distribution(&a).total(), a.len());
        }
    }
}
