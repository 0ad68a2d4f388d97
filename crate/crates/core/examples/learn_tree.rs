//! Induces a tree from the noise-free agreed fixture, with and without
//! balancing, and compares it with the majority-class baseline.
//!
//! ```bash
//! cargo run -p preventgen --example learn_tree
//! ```

use preventgen::c45::{
    accuracy, balance, gain_ratio, induce, majority_tree, LearnerParams, TrainingInstance,
};
use preventgen::coding::{ClassCounts, Feature};
use preventgen::fixtures::noise_free_agreed;

fn main() -> preventgen::Result<()> {
    let data = TrainingInstance::from_dataset(&noise_free_agreed());

    for f in Feature::ALL {
        println!(
            "root gain ratio {:<10} {:.4}",
            f.name(),
            gain_ratio(&data, f)
        );
    }

    let tree = induce(&data, &LearnerParams::default())?;
    println!("\n{}\n", tree.pretty());
    println!("training accuracy {:.4}", accuracy(&tree, &data)?);
    println!(
        "majority baseline {:.4}",
        accuracy(&majority_tree(&data), &data)?
    );

    let balanced = balance(&data, 0);
    println!(
        "\nbalanced: {}",
        ClassCounts::from_labels(balanced.iter().map(|i| i.target))
    );
    let balanced_tree = induce(&balanced, &LearnerParams::default())?;
    println!(
        "same tree after balancing: {}",
        balanced_tree.pretty() == tree.pretty()
    );
    Ok(())
}
