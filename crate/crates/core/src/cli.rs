//! The `preventgen` command line.
//!
//! ```text
//! preventgen probe <corpus-dir> [--patterns FILE] [--sample N --seed S] [-o FILE]
//! preventgen kappa <coder-a.csv> <coder-b.csv> --feature <form|intentionality|awareness|safety|all> [--json]
//! preventgen learn <agreed.csv> [--balance] [--seed S] [--min-split N] [-o tree.json]
//! preventgen crossval <agreed.csv> --folds K --seed S [--balance] [--json]
//! preventgen compile <tree.json> [--forms specs.json] [--langs en,fr] [-o net.json]
//! preventgen generate <procedure.json> --lang <en|fr> --net <net.json> [--lexicon FILE]
//! preventgen serve [--port 8787] [--data DIR] [--net FILE] [--lexicon FILE] [--ui DIR] [--preload]
//! ```
//!
//! Exit status is 0 on success, 2 for usage, I/O and parse failures, and 3
//! for domain errors such as an ensure-mode warning or an unsupported
//! language.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::c45::{
    accuracy, balance, cross_validate, induce, LearnerParams, TrainingInstance, TreeNode,
};
use crate::coding::{parse_dataset, ClassCounts, Dataset};
use crate::corpus::{load_corpus_dir, probe, ProbePattern};
use crate::network::{
    compile, default_form_specs, parse_form_specs, CompilerInputs, SystemNetwork,
};
use crate::planner::{ProcedureModel, VALUE_BINDING};
use crate::realizer::Lexicon;
use crate::reliability::{kappa, paired_labels, CodedColumn};
use crate::service::{self, ServiceConfig};
use crate::{Error, Language, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Environment variable naming the procedure store directory.
pub const DATA_ENV: &str = "PREVENTGEN_DATA";

#[derive(Debug, Parser)]
#[command(
    name = "preventgen",
    version,
    about = "Learned micro-planning for preventative expressions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Break a corpus into expressions and count probe hits.
    Probe {
        corpus_dir: PathBuf,
        /// One probe string per line; defaults to the seven built-in probes.
        #[arg(long)]
        patterns: Option<PathBuf>,
        /// Keep at most N hits per probe.
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inter-coder agreement and kappa for one coded column or all of them.
    Kappa {
        coder_a: PathBuf,
        coder_b: PathBuf,
        #[arg(long)]
        feature: String,
        #[arg(long)]
        json: bool,
    },
    /// Induce a decision tree from coded examples.
    Learn {
        data: PathBuf,
        #[arg(long)]
        balance: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        min_split: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// k-fold cross-validation of the learner.
    Crossval {
        data: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        balance: bool,
        #[arg(long, default_value_t = 2)]
        min_split: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compile a tree into a system network.
    Compile {
        tree: PathBuf,
        /// Form specifications; defaults to the bundled English and French set.
        #[arg(long)]
        forms: Option<PathBuf>,
        #[arg(long, default_value = "en,fr")]
        langs: String,
        /// Comma-separated features gating entry to the network.
        #[arg(long, default_value = "warning")]
        entry: String,
        #[arg(long, default_value = "preventative")]
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a document for a procedure.
    Generate {
        procedure: PathBuf,
        #[arg(long)]
        lang: String,
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8787)]
        port: u16,
        /// Procedure store; defaults to $PREVENTGEN_DATA, then ./procedures.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Compiled network; defaults to the reference tree compiled in memory.
        #[arg(long)]
        net: Option<PathBuf>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Built authoring UI to serve as static files.
        #[arg(long)]
        ui: Option<PathBuf>,
        /// Store the bundled procedures that are not present yet.
        #[arg(long)]
        preload: bool,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                EXIT_DOMAIN
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_dataset(path: &Path) -> Result<Dataset> {
    parse_dataset(&read(path)?)
}

fn load_lexicon(path: Option<&Path>) -> Result<Lexicon> {
    match path {
        Some(p) => Lexicon::from_json(&read(p)?),
        None => Ok(Lexicon::bundled()),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Probe {
            corpus_dir,
            patterns,
            sample,
            seed,
            output,
        } => {
            if !corpus_dir.is_dir() {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("{}: no such corpus directory", corpus_dir.display()),
                )));
            }
            let patterns = match patterns {
                Some(p) => ProbePattern::parse_list(&read(&p)?),
                None => ProbePattern::defaults(),
            };
            let expressions = load_corpus_dir(&corpus_dir)?;
            let mut report = probe(&expressions, &patterns)?;
            if let Some(cap) = sample {
                report = report.with_samples(cap, seed.unwrap_or_default())?;
            }
            let body = serde_json::to_string_pretty(&report)? + "\n";
            match output {
                Some(path) => {
                    write_file(&path, &body)?;
                    for (label, count) in &report.counts {
                        writeln!(out, "{label}\t{count}")?;
                    }
                    writeln!(
                        out,
                        "hits {}/{} = {:.4}",
                        report.counts.values().sum::<usize>(),
                        report.total_expressions,
                        report.hit_fraction
                    )?;
                }
                None => emit(out, &body)?,
            }
        }
        Command::Kappa {
            coder_a,
            coder_b,
            feature,
            json,
        } => {
            let columns = if feature.eq_ignore_ascii_case("all") {
                CodedColumn::ALL.to_vec()
            } else {
                vec![CodedColumn::parse(&feature)?]
            };
            let (a, b) = (load_dataset(&coder_a)?, load_dataset(&coder_b)?);
            let mut rows = Vec::new();
            for column in columns {
                let input = paired_labels(&a, &b, column);
                if input.items().is_empty() {
                    return Err(Error::InvalidArgument(
                        "the two files share no example ids".into(),
                    ));
                }
                let k = kappa(&input)?;
                if json {
                    rows.push(json!({
                        "column": column.name(),
                        "items": input.items().len(),
                        "p_a": k.p_a,
                        "p_e": k.p_e,
                        "kappa": k.kappa,
                        "band": k.band.label(),
                        "below_scale": k.below_scale,
                    }));
                } else {
                    let note = if k.below_scale { ", below scale" } else { "" };
                    writeln!(
                        out,
                        "{}: n={} p_a={:.4} p_e={:.4} kappa={:.4} ({}{note})",
                        column.name(),
                        input.items().len(),
                        k.p_a,
                        k.p_e,
                        k.kappa,
                        k.band
                    )?;
                }
            }
            if json {
                emit(out, &(serde_json::to_string_pretty(&rows)? + "\n"))?;
            }
        }
        Command::Learn {
            data,
            balance: balanced,
            seed,
            min_split,
            output,
        } => {
            let instances = TrainingInstance::from_dataset(&load_dataset(&data)?);
            let params = LearnerParams {
                min_split,
                seed,
                balance: balanced,
            };
            let training = if balanced {
                let b = balance(&instances, seed);
                let counts = ClassCounts::from_labels(b.iter().map(|i| i.target));
                writeln!(err, "balanced class counts: {counts}")?;
                b
            } else {
                instances.clone()
            };
            let tree = induce(&training, &params)?;
            writeln!(out, "{}", tree.pretty())?;
            writeln!(
                out,
                "training accuracy: {:.4}",
                accuracy(&tree, &instances)?
            )?;
            if let Some(path) = output {
                write_file(&path, &(serde_json::to_string_pretty(&tree)? + "\n"))?;
            }
        }
        Command::Crossval {
            data,
            folds,
            seed,
            balance,
            min_split,
            json,
        } => {
            let instances = TrainingInstance::from_dataset(&load_dataset(&data)?);
            let params = LearnerParams {
                min_split,
                seed,
                balance,
            };
            let cv = cross_validate(&instances, folds, &params)?;
            if json {
                emit(out, &(serde_json::to_string_pretty(&cv)? + "\n"))?;
            } else {
                for (i, a) in cv.fold_accuracies.iter().enumerate() {
                    writeln!(out, "fold {:>2}: {a:.4}", i + 1)?;
                }
                writeln!(out, "mean: {:.4}", cv.mean)?;
            }
        }
        Command::Compile {
            tree,
            forms,
            langs,
            entry,
            name,
            output,
        } => {
            let tree: TreeNode = serde_json::from_str(&read(&tree)?)?;
            let form_specs = match forms {
                Some(p) => parse_form_specs(&read(&p)?)?,
                None => default_form_specs(),
            };
            let languages = langs
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse)
                .collect::<Result<_>>()?;
            let network = compile(&CompilerInputs {
                languages,
                entry_features: entry
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                tree,
                value_binding: VALUE_BINDING.into(),
                form_specs,
                output_name: name,
            })?;
            match output {
                Some(path) => {
                    write_file(&path, &network.to_json())?;
                    for line in network.outline() {
                        writeln!(out, "{line}")?;
                    }
                }
                None => emit(out, &network.to_json())?,
            }
        }
        Command::Generate {
            procedure,
            lang,
            net,
            lexicon,
        } => {
            let language: Language = lang.parse()?;
            let model = ProcedureModel::from_json(&read(&procedure)?)?;
            let network = SystemNetwork::from_json(&read(&net)?)?;
            let lexicon = load_lexicon(lexicon.as_deref())?;
            let response = service::generate(&model, language, &network, &lexicon)?;
            writeln!(out, "{}", response.text)?;
        }
        Command::Serve {
            port,
            data,
            net,
            lexicon,
            ui,
            preload,
        } => {
            let data_dir = data
                .or_else(|| std::env::var_os(DATA_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("procedures"));
            let network = match net {
                Some(p) => SystemNetwork::from_json(&read(&p)?)?,
                None => crate::fixtures::reference_network(),
            };
            let config = ServiceConfig {
                port,
                data_dir,
                network,
                lexicon: load_lexicon(lexicon.as_deref())?,
                ui_dir: ui,
                preload,
            };
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()?;
            runtime.block_on(service::serve(config, err))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("preventgen").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["probe", "/definitely/not/here"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["probe", ".", "--sample", "3"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("generate"));
    }

    #[test]
    fn unknown_feature_exits_2() {
        let dir = tempfile::tempdir().unwrap();
        let (a, _) = crate::fixtures::coder_pair();
        let path = dir.path().join("a.csv");
        fs::write(&path, a.to_csv().unwrap()).unwrap();
        let p = path.to_str().unwrap();
        let (code, _, err) = run_args(&["kappa", p, p, "--feature", "colour"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
    }

    #[test]
    fn bad_language_is_a_domain_error() {
        let dir = tempfile::tempdir().unwrap();
        let proc_path = dir.path().join("p.json");
        let net_path = dir.path().join("n.json");
        fs::write(&proc_path, crate::fixtures::repair_procedure().to_json()).unwrap();
        fs::write(&net_path, crate::fixtures::reference_network().to_json()).unwrap();
        let (code, _, err) = run_args(&[
            "generate",
            proc_path.to_str().unwrap(),
            "--lang",
            "de",
            "--net",
            net_path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("unsupported language"));
    }
}
