//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

pub mod checks;

use maskboost::boost::{GradPair, TrainConfig, Tree, TreeNode};
use maskboost::FeatureMatrix;
use rand::Rng;

/// Root split picked by exhaustive enumeration: `(feature, threshold)` or
/// `None` when no split has positive gain.
pub fn brute_force_root(
    x: &[Vec<f64>],
    grads: &[GradPair],
    lambda: f64,
    gamma: f64,
    min_child_weight: f64,
) -> Option<(usize, f64)> {
    let g: f64 = grads.iter().map(|p| p.grad).sum();
    let h: f64 = grads.iter().map(|p| p.hess).sum();
    let score = |g: f64, h: f64| {
        if h + lambda > 0.0 {
            g * g / (h + lambda)
        } else {
            0.0
        }
    };

    let mut cands: Vec<(f64, usize, f64)> = Vec::new();
    for (f, col) in x.iter().enumerate() {
        let mut uniq = col.clone();
        uniq.sort_by(f64::total_cmp);
        uniq.dedup();
        for w in uniq.windows(2) {
            let mut t = w[0] + (w[1] - w[0]) / 2.0;
            if t <= w[0] {
                t = w[1];
            }
            let (mut gl, mut hl) = (0.0, 0.0);
            for (r, &v) in col.iter().enumerate() {
                if v < t {
                    gl += grads[r].grad;
                    hl += grads[r].hess;
                }
            }
            let (gr, hr) = (g - gl, h - hl);
            if hl < min_child_weight || hr < min_child_weight {
                continue;
            }
            let gain = 0.5 * (score(gl, hl) + score(gr, hr) - score(g, h)) - gamma;
            if gain > 0.0 {
                cands.push((gain, f, t));
            }
        }
    }
    let best = cands.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    // Treat gains equal up to rounding as ties; the lowest (feature, threshold) wins.
    cands
        .into_iter()
        .filter(|c| c.0 >= best - 1e-9 * best.abs().max(1.0))
        .map(|c| (c.1, c.2))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)))
}

pub fn root_split(tree: &Tree) -> Option<(usize, f64)> {
    match tree.nodes()[0] {
        TreeNode::Split {
            feature, threshold, ..
        } => Some((feature, threshold)),
        TreeNode::Leaf { .. } => None,
    }
}

/// A small random instance: up to 64 rows and 4 columns, some columns on a
/// coarse integer grid so that ties and repeated values occur.
pub struct Instance {
    pub columns: Vec<Vec<f64>>,
    pub grads: Vec<GradPair>,
    pub config: TrainConfig,
}

impl Instance {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.random_range(1..=64);
        let p = rng.random_range(1..=4);
        let columns = (0..p)
            .map(|_| {
                if rng.random_bool(0.5) {
                    let k = rng.random_range(1..=6);
                    (0..n).map(|_| rng.random_range(0..k) as f64).collect()
                } else {
                    (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()
                }
            })
            .collect();
        let grads = (0..n)
            .map(|_| {
                let p: f64 = rng.random_range(0.01..0.99);
                let y = rng.random_bool(0.3);
                GradPair {
                    grad: p - if y { 1.0 } else { 0.0 },
                    hess: p * (1.0 - p),
                }
            })
            .collect();
        let config = TrainConfig {
            max_depth: 1,
            reg_lambda: [0.0, 1.0, 2.5][rng.random_range(0..3)],
            gamma: [0.0, 0.0, 0.05][rng.random_range(0..3)],
            min_child_weight: [0.0, 0.1, 1.0][rng.random_range(0..3)],
            ..TrainConfig::default()
        };
        Self {
            columns,
            grads,
            config,
        }
    }

    pub fn matrix(&self) -> FeatureMatrix {
        FeatureMatrix::from_columns(self.columns.clone()).unwrap()
    }

    pub fn oracle(&self) -> Option<(usize, f64)> {
        brute_force_root(
            &self.columns,
            &self.grads,
            self.config.reg_lambda,
            self.config.gamma,
            self.config.min_child_weight,
        )
    }
}

/// Precision-recall area by walking every distinct threshold from the top.
pub fn brute_pr_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut area = 0.0;
    let mut prev_recall = 0.0;
    for t in thresholds {
        let (mut tp, mut k) = (0.0, 0.0);
        for (s, y) in scores.iter().zip(labels) {
            if *s >= t {
                k += 1.0;
                if *y == 1 {
                    tp += 1.0;
                }
            }
        }
        let recall = tp / pos;
        area += (recall - prev_recall) * (tp / k);
        prev_recall = recall;
    }
    area
}

/// Fraction of (positive, negative) pairs ranked correctly, ties worth half.
pub fn brute_roc_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &yi) in labels.iter().enumerate() {
        for (j, &yj) in labels.iter().enumerate() {
            if yi == 1 && yj == 0 {
                den += 1.0;
                if scores[i] > scores[j] {
                    num += 1.0;
                } else if scores[i] == scores[j] {
                    num += 0.5;
                }
            }
        }
    }
    num / den
}

/// Mean and normal 95% half-width, computed the textbook way.
pub fn brute_ci(d: &[f64]) -> (f64, f64, f64) {
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let half = 1.96 * (var / n).sqrt();
    (mean, mean - half, mean + half)
}

/// A fast experiment: small splits, short boosting, two seeds.
pub fn small_config() -> maskboost::harness::HarnessConfig {
    use maskboost::harness::{ArmId, HarnessConfig};
    use maskboost::synth::{Dgp, FeatureSet, SplitSizes};
    let mut cfg = HarnessConfig::default();
    cfg.sizes = SplitSizes {
        train: 1500,
        valid: 600,
        test: 1000,
        test_prevalence: 0.05,
    };
    cfg.train = TrainConfig {
        num_rounds: 15,
        max_depth: 3,
        ..TrainConfig::default()
    };
    cfg.distractors.p_noise = 10;
    cfg.grid.dgps = vec![Dgp::A, Dgp::B];
    cfg.grid.feature_sets = vec![FeatureSet::F0, FeatureSet::F1];
    cfg.grid.arms = vec![ArmId::C0, ArmId::C1, ArmId::C3];
    cfg.grid.s_values = vec![0.5];
    cfg.grid.seeds = 2;
    cfg.boundary.sigma_u = vec![0.0, 8.0];
    cfg.boundary.seeds = 2;
    cfg
}
