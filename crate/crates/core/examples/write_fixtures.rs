//! Regenerates the synthetic data files under `crates/core/data/`.
//!
//! ```bash
//! cargo run -p preventgen --example write_fixtures [out-dir]
//! ```

use std::fs;
use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")));
    for (rel, content) in preventgen::fixtures::files() {
        let path = root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, content)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
