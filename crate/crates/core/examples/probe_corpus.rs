//! Breaks the bundled corpus into expressions, counts hits for the seven
//! default probes, and prints a seeded sample of the hits.
//!
//! ```bash
//! cargo run -p preventgen --example probe_corpus [corpus-dir]
//! ```

use std::path::PathBuf;

use preventgen::corpus::{load_corpus_dir, probe, ProbePattern};

fn main() -> preventgen::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus")));
    let expressions = load_corpus_dir(&dir)?;
    let report = probe(&expressions, &ProbePattern::defaults())?.with_samples(1, 7)?;

    println!(
        "{} expressions in {}",
        report.total_expressions,
        dir.display()
    );
    for (label, count) in &report.counts {
        println!("{label:>12}  {count}");
    }
    println!("hit fraction: {:.4}", report.hit_fraction);
    for (label, picked) in report.samples.iter().flatten() {
        for e in picked {
            println!("[{label}] {} #{}: {}", e.source, e.id, e.text);
        }
    }
    Ok(())
}
