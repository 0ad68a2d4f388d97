//! # preventgen
//!
//! Learned micro-planning for preventative expressions ("Do not ...",
//! "Never ...", "Take care not to ...") in procedural instructions.
//!
//! The pipeline runs from raw instructional text to bilingual output:
//!
//! 1. [`corpus`] breaks text into expressions and probes them for the seven
//!    negative-imperative strings, with seeded sampling of the hits.
//! 2. [`coding`] ingests coder CSVs (form label plus the INTENTIONALITY,
//!    AWARENESS and SAFETY function features) and keeps the agreed subset.
//! 3. [`reliability`] measures inter-coder agreement with the Kappa statistic.
//! 4. [`c45`] induces a gain-ratio decision tree from function features to
//!    form, with balancing and k-fold cross-validation.
//! 5. [`network`] compiles the tree into a system network whose leaves carry
//!    per-language sentence-plan directives.
//! 6. [`planner`] turns a procedure model into title, step and warning
//!    sentence plans, entering the network for every warning.
//! 7. [`realizer`] renders the plans into English and French text.
//!
//! [`cli`] and [`service`] expose the same pipeline as the `preventgen`
//! binary and an HTTP API.
//!
//! ## Examples
//!
//! Every major capability has a runnable example under `examples/`:
//!
//! ```bash
//! cargo run -p preventgen --example probe_corpus
//! cargo run -p preventgen --example coder_reliability
//! cargo run -p preventgen --example learn_tree
//! cargo run -p preventgen --example train_test_stream
//! cargo run -p preventgen --example cross_validation
//! cargo run -p preventgen --example compile_network
//! cargo run -p preventgen --example generate_document
//! cargo run -p preventgen --example warning_forms
//! cargo run -p preventgen --example write_fixtures
//! ```

pub mod c45;
pub mod cli;
pub mod coding;
pub mod corpus;
mod error;
pub mod fixtures;
pub mod network;
pub mod planner;
pub mod realizer;
pub mod reliability;
pub mod service;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};

/// Output languages supported by the realizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Fr,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::En, Language::Fr];

    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Fr => "fr",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "en" => Ok(Language::En),
            "fr" => Ok(Language::Fr),
            _ => Err(Error::UnsupportedLanguage(s.to_string())),
        }
    }
}
