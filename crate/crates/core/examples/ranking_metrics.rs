//! Ranking metrics, paired deltas and their confidence interval.

use maskboost::metrics::{paired_delta_ci, pr_auc, relative_delta, roc_auc};
use maskboost::rng::stream_from_seed;
use rand::seq::SliceRandom;
use rand::Rng;

fn main() -> maskboost::Result<()> {
    let scores = [0.9, 0.8, 0.8, 0.4, 0.3, 0.1];
    let labels = [1, 0, 1, 1, 0, 0];
    println!(
        "toy ranking: pr_auc {:.4}, roc_auc {:.4}",
        pr_auc(&scores, &labels)?,
        roc_auc(&scores, &labels)?
    );

    // Random scores: average precision averages the prevalence.
    let mut rng = stream_from_seed(5);
    let mut y: Vec<u8> = (0..1000).map(|i| u8::from(i < 50)).collect();
    let mut total = 0.0;
    for _ in 0..500 {
        y.shuffle(&mut rng);
        let s: Vec<f64> = (0..1000).map(|_| rng.random()).collect();
        total += pr_auc(&s, &y)?;
    }
    println!(
        "random scores at prevalence 0.05: mean pr_auc {:.4}",
        total / 500.0
    );

    let baseline = [0.170, 0.162, 0.181, 0.158, 0.175, 0.166];
    let treated = [0.121, 0.118, 0.140, 0.104, 0.130, 0.119];
    let d: Vec<f64> = treated.iter().zip(&baseline).map(|(t, b)| t - b).collect();
    let ci = paired_delta_ci(&d)?;
    let mean_base = baseline.iter().sum::<f64>() / baseline.len() as f64;
    println!(
        "paired delta {:.4} [{:.4}, {:.4}], relative {:.1}%, excludes zero: {}",
        ci.mean,
        ci.ci_lo,
        ci.ci_hi,
        relative_delta(ci.mean, mean_base)?,
        ci.excludes_zero()
    );
    Ok(())
}
