//! One warning realized under every combination of the three warning
//! parameters, in both languages.
//!
//! ```bash
//! cargo run -p preventgen --example warning_forms [verb-key] [noun-key]
//! ```

use preventgen::coding::FeatureValue;
use preventgen::fixtures::reference_network;
use preventgen::planner::{plan_warning, ActionProposition, GenerationParams, WarningSpec};
use preventgen::realizer::{realize_plan, Lexicon};
use preventgen::Language;

fn main() -> preventgen::Result<()> {
    let mut args = std::env::args().skip(1);
    let verb = args.next().unwrap_or_else(|| "damage".into());
    let noun = args.next().unwrap_or_else(|| "service-cover".into());
    let (network, lexicon) = (reference_network(), Lexicon::bundled());

    for v in FeatureValue::all() {
        let spec = WarningSpec {
            action: ActionProposition::new("w", &verb, &noun),
            params: GenerationParams::prevent(v.safety, v.intentionality, v.awareness),
        };
        println!("{} {} {}", v.awareness, v.intentionality, v.safety);
        for language in Language::ALL {
            let plan = plan_warning(&spec, language, &network)?;
            println!("  {language}: {}", realize_plan(&plan, &lexicon)?);
        }
    }
    Ok(())
}
