//! Generates the repair procedure in English and French.
//!
//! ```bash
//! cargo run -p preventgen --example generate_document [procedure.json]
//! ```

use preventgen::fixtures::{reference_network, repair_procedure};
use preventgen::planner::ProcedureModel;
use preventgen::realizer::Lexicon;
use preventgen::service::generate;
use preventgen::Language;

fn main() -> preventgen::Result<()> {
    let procedure = match std::env::args().nth(1) {
        Some(path) => ProcedureModel::from_json(&std::fs::read_to_string(path)?)?,
        None => repair_procedure(),
    };
    let (network, lexicon) = (reference_network(), Lexicon::bundled());
    println!("{}\n", procedure.summary().goal);
    for language in Language::ALL {
        let out = generate(&procedure, language, &network, &lexicon)?;
        println!("[{language}]\n{}\n", out.text);
    }
    Ok(())
}
