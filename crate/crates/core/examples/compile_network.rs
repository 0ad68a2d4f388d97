//! Compiles the reference tree into a bilingual system network, prints its
//! outline, and walks it for all eight feature vectors.
//!
//! ```bash
//! cargo run -p preventgen --example compile_network
//! ```

use preventgen::coding::{Feature, FeatureValue};
use preventgen::fixtures::reference_network;
use preventgen::network::traverse;
use preventgen::Language;

fn main() -> preventgen::Result<()> {
    let network = reference_network();
    for line in network.outline() {
        println!("{line}");
    }
    println!();
    for v in FeatureValue::all() {
        let t = traverse(&network, &v, Language::En)?;
        let key: Vec<&str> = Feature::ALL.iter().map(|f| v.token(*f)).collect();
        let path: Vec<String> = t
            .trace
            .iter()
            .map(|s| format!("{}={}", s.system, s.value))
            .collect();
        println!(
            "{:<16} -> {:<6} via {}",
            key.join(" "),
            t.form.display_name(),
            path.join(", ")
        );
    }
    Ok(())
}
