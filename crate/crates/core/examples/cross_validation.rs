//! Ten-fold cross-validation on the noise-free fixture and on the fixture
//! with a quarter of its labels flipped, followed by a sweep over 100 seeds
//! that reports the spread of the noisy mean.
//!
//! ```bash
//! cargo run -p preventgen --release --example cross_validation
//! ```

use preventgen::c45::{cross_validate, LearnerParams, TrainingInstance};
use preventgen::fixtures::{noise_free_agreed, noisy_agreed};

fn main() -> preventgen::Result<()> {
    let clean = TrainingInstance::from_dataset(&noise_free_agreed());
    let noisy = TrainingInstance::from_dataset(&noisy_agreed());

    for (name, data) in [("noise-free", &clean), ("25% noise", &noisy)] {
        for balance in [false, true] {
            let params = LearnerParams {
                seed: 1,
                balance,
                ..Default::default()
            };
            let cv = cross_validate(data, 10, &params)?;
            let folds: Vec<String> = cv
                .fold_accuracies
                .iter()
                .map(|a| format!("{a:.3}"))
                .collect();
            println!(
                "{name:<10} balance={balance:<5} mean={:.4}  [{}]",
                cv.mean,
                folds.join(" ")
            );
        }
    }

    let means: Vec<f64> = (0..100)
        .map(|seed| {
            let params = LearnerParams {
                seed,
                ..Default::default()
            };
            cross_validate(&noisy, 10, &params).map(|cv| cv.mean)
        })
        .collect::<preventgen::Result<_>>()?;
    let min = means.iter().copied().fold(f64::INFINITY, f64::min);
    let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg = means.iter().sum::<f64>() / means.len() as f64;
    println!("25% noise over seeds 0..100: min={min:.4} mean={avg:.4} max={max:.4}");
    Ok(())
}
