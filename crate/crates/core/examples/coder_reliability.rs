//! Agreement and kappa for both bundled coder pairs, plus the agreed
//! subset kept for learning.
//!
//! ```bash
//! cargo run -p preventgen --example coder_reliability
//! ```

use preventgen::coding::{agreed_subset, class_distribution, Dataset};
use preventgen::fixtures::{coder_pair, reliability_pair};
use preventgen::reliability::{kappa, paired_labels, CodedColumn};

fn report(name: &str, a: &Dataset, b: &Dataset) -> preventgen::Result<()> {
    println!("{name}: {} rows per coder", a.len());
    for column in CodedColumn::ALL {
        let k = kappa(&paired_labels(a, b, column))?;
        println!(
            "  {:<15} p_a={:.3} p_e={:.3} K={:.3} {}",
            column.name(),
            k.p_a,
            k.p_e,
            k.kappa,
            k.band
        );
    }
    let agreed = agreed_subset(a, b);
    println!(
        "  agreed on all four codings: {} ({})",
        agreed.len(),
        class_distribution(&agreed)
    );
    Ok(())
}

fn main() -> preventgen::Result<()> {
    let (a, b) = reliability_pair();
    report("reliability pair", &a, &b)?;
    let (a, b) = coder_pair();
    report("learning pair", &a, &b)
}
