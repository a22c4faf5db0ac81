//! Train a booster on a small noisy problem, save its dump and reload it.

use maskboost::boost::{train, Ensemble, TrainConfig};
use maskboost::introspect::load_dump;
use maskboost::metrics::{pr_auc, roc_auc};
use maskboost::rng::stream_from_seed;
use maskboost::FeatureMatrix;
use rand::Rng;

fn problem(n: usize, seed: u64) -> (FeatureMatrix, Vec<u8>) {
    let mut rng = stream_from_seed(seed);
    let cols: Vec<Vec<f64>> = (0..5)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let y = (0..n)
        .map(|i| {
            let z = 3.0 * cols[0][i] * cols[1][i] + cols[2][i] + rng.random_range(-0.5..0.5);
            u8::from(z > 0.8)
        })
        .collect();
    (FeatureMatrix::from_columns(cols).unwrap(), y)
}

fn main() -> maskboost::Result<()> {
    let (x, y) = problem(5000, 1);
    let (xv, yv) = problem(2000, 2);
    let (xt, yt) = problem(2000, 3);

    let cfg = TrainConfig {
        max_depth: 4,
        colsample_bynode: 0.6,
        seed: 7,
        ..TrainConfig::default()
    };
    let model = train(&x, &y, &xv, &yv, &cfg)?;
    let scores = model.predict_margin(&xt)?;
    println!(
        "trees kept {} of {}, test pr_auc {:.4} roc_auc {:.4}",
        model.best_iteration,
        model.trees.len(),
        pr_auc(&scores, &yt)?,
        roc_auc(&scores, &yt)?
    );

    let json = model.dump_json()?;
    let reloaded = Ensemble::from_dump(&load_dump(&json)?)?;
    let same = reloaded.predict_margin(&xt)? == scores;
    println!(
        "dump is {} bytes; reloaded model predicts identically: {same}",
        json.len()
    );
    Ok(())
}
