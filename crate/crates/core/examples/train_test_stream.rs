//! The select, type, learn and test stream: pick the agreed examples from a
//! coder pair, project them onto features and form, hold out a test set,
//! and score the induced tree.
//!
//! ```bash
//! cargo run -p preventgen --example train_test_stream [test-size] [seed]
//! ```

use preventgen::c45::{accuracy, holdout_split, induce, LearnerParams, TrainingInstance};
use preventgen::coding::agreed_subset;
use preventgen::fixtures::coder_pair;

fn main() -> preventgen::Result<()> {
    let mut args = std::env::args().skip(1);
    let test_size: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(18);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);

    let (a, b) = coder_pair();
    let agreed = agreed_subset(&a, &b);
    let instances = TrainingInstance::from_dataset(&agreed);
    println!("selected {} of {} coded rows", instances.len(), a.len());

    let (train, test) = holdout_split(&instances, test_size, seed)?;
    let tree = induce(&train, &LearnerParams::default())?;
    println!("trained on {}, tested on {}", train.len(), test.len());
    println!("{}", tree.pretty());
    println!("test accuracy {:.4}", accuracy(&tree, &test)?);
    Ok(())
}
