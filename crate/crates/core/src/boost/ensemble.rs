use rand::seq::index;

use super::config::TrainConfig;
use super::objective::{logistic_grad_hess, mean_logistic_loss, sigmoid, GradPair};
use super::tree::{Tree, TreeBuilder, TreeNode};
use crate::data::FeatureMatrix;
use crate::dump::{DumpNode, DumpTree, ModelDump, NodeKind, DUMP_FORMAT};
use crate::error::{Error, Result};
use crate::rng::stream_from_seed;

/// Trained additive model.
///
/// The margin of a row is `base_margin + learning_rate * sum(leaf weights)`;
/// trees store unshrunk weights and the config snapshot carries the rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub trees: Vec<Tree>,
    pub base_margin: f64,
    pub config: TrainConfig,
    /// Number of leading trees used for prediction.
    pub best_iteration: usize,
    pub feature_names: Vec<String>,
}

fn check_labels(labels: &[u8], n_rows: usize, what: &str) -> Result<()> {
    if labels.len() != n_rows {
        return Err(Error::InvalidInput(format!(
            "{what}: {} labels for {n_rows} rows",
            labels.len()
        )));
    }
    if let Some(i) = labels.iter().position(|&y| y > 1) {
        return Err(Error::InvalidInput(format!(
            "{what}: label {} at row {i} is not 0/1",
            labels[i]
        )));
    }
    Ok(())
}

/// Fits a boosted ensemble on `train`, early-stopping on `valid` log-loss.
pub fn train(
    train: &FeatureMatrix,
    train_labels: &[u8],
    valid: &FeatureMatrix,
    valid_labels: &[u8],
    config: &TrainConfig,
) -> Result<Ensemble> {
    config.validate()?;
    if train.n_rows() == 0 || train.n_cols() == 0 {
        return Err(Error::InvalidInput("training matrix is empty".into()));
    }
    if valid.n_rows() == 0 {
        return Err(Error::InvalidInput("validation matrix is empty".into()));
    }
    train.check_same_schema(valid)?;
    check_labels(train_labels, train.n_rows(), "train")?;
    check_labels(valid_labels, valid.n_rows(), "valid")?;

    let positives = train_labels.iter().filter(|&&y| y == 1).count();
    if positives == 0 || positives == train_labels.len() {
        return Err(Error::SingleClass);
    }
    let prevalence = positives as f64 / train_labels.len() as f64;
    let base_margin = (prevalence / (1.0 - prevalence)).ln();

    let n = train.n_rows();
    let eta = config.learning_rate;
    let mut builder = TreeBuilder::new(train, config);
    let mut rng = stream_from_seed(config.seed);

    let mut train_margin = vec![base_margin; n];
    let mut valid_margin = vec![base_margin; valid.n_rows()];
    let mut grads = vec![GradPair::default(); n];
    let mut mask = vec![true; n];

    let mut trees = Vec::new();
    let mut best_loss = f64::INFINITY;
    let mut best_iteration = 0;

    for round in 0..config.num_rounds {
        for (g, (&m, &y)) in grads.iter_mut().zip(train_margin.iter().zip(train_labels)) {
            *g = logistic_grad_hess(m, y);
        }
        let rows = if config.row_subsample < 1.0 {
            let k = ((config.row_subsample * n as f64).round() as usize).clamp(1, n);
            mask.fill(false);
            for i in index::sample(&mut rng, n, k) {
                mask[i] = true;
            }
            Some(mask.as_slice())
        } else {
            None
        };

        let tree = builder.build(&grads, rows, &mut rng);
        for (r, m) in train_margin.iter_mut().enumerate() {
            *m += eta * tree.predict_row(train, r);
        }
        for (r, m) in valid_margin.iter_mut().enumerate() {
            *m += eta * tree.predict_row(valid, r);
        }
        trees.push(tree);

        let loss = mean_logistic_loss(&valid_margin, valid_labels);
        if loss < best_loss {
            best_loss = loss;
            best_iteration = round + 1;
        } else if config.early_stop_patience > 0
            && round + 1 - best_iteration >= config.early_stop_patience
        {
            break;
        }
    }

    trees.truncate(best_iteration);
    Ok(Ensemble {
        trees,
        base_margin,
        config: config.clone(),
        best_iteration,
        feature_names: train.names().to_vec(),
    })
}

impl Ensemble {
    /// Model with no trees, predicting `base_margin` everywhere.
    pub fn empty(base_margin: f64, feature_names: Vec<String>, config: TrainConfig) -> Self {
        Self {
            trees: Vec::new(),
            base_margin,
            config,
            best_iteration: 0,
            feature_names,
        }
    }

    fn check_schema(&self, data: &FeatureMatrix) -> Result<()> {
        if data.names() != self.feature_names.as_slice() {
            return Err(Error::SchemaMismatch(format!(
                "model expects {} columns, data has {} (or names differ)",
                self.feature_names.len(),
                data.n_cols()
            )));
        }
        Ok(())
    }

    fn used_trees(&self) -> &[Tree] {
        &self.trees[..self.best_iteration.min(self.trees.len())]
    }

    pub fn predict_margin(&self, data: &FeatureMatrix) -> Result<Vec<f64>> {
        self.check_schema(data)?;
        let eta = self.config.learning_rate;
        let mut out = vec![self.base_margin; data.n_rows()];
        for tree in self.used_trees() {
            for (r, m) in out.iter_mut().enumerate() {
                *m += eta * tree.predict_row(data, r);
            }
        }
        Ok(out)
    }

    pub fn predict_proba(&self, data: &FeatureMatrix) -> Result<Vec<f64>> {
        Ok(self
            .predict_margin(data)?
            .into_iter()
            .map(sigmoid)
            .collect())
    }

    pub fn to_dump(&self) -> ModelDump {
        let trees = self
            .trees
            .iter()
            .map(|tree| DumpTree {
                nodes: tree
                    .nodes()
                    .iter()
                    .enumerate()
                    .map(|(id, node)| match *node {
                        TreeNode::Leaf { weight, cover } => DumpNode::leaf(id, weight, cover),
                        TreeNode::Split {
                            feature,
                            threshold,
                            left,
                            right,
                            cover,
                            gain,
                        } => DumpNode {
                            feature_name: Some(self.feature_names[feature].clone()),
                            gain: Some(gain),
                            ..DumpNode::split(id, feature, threshold, cover, left, right)
                        },
                    })
                    .collect(),
            })
            .collect();
        ModelDump {
            format: DUMP_FORMAT.to_string(),
            base_margin: self.base_margin,
            best_iteration: self.best_iteration,
            config: self.config.clone(),
            feature_names: self.feature_names.clone(),
            trees,
        }
    }

    pub fn dump_json(&self) -> Result<String> {
        self.to_dump().to_json()
    }

    /// Rebuilds a predictor from a validated dump.
    pub fn from_dump(dump: &ModelDump) -> Result<Self> {
        dump.validate()?;
        let trees = dump
            .trees
            .iter()
            .map(|t| {
                Tree::from_nodes(
                    t.nodes
                        .iter()
                        .map(|n| match n.kind {
                            NodeKind::Leaf => TreeNode::Leaf {
                                weight: n.leaf_weight.unwrap_or_default(),
                                cover: n.cover,
                            },
                            NodeKind::Split => TreeNode::Split {
                                feature: n.feature_index.unwrap_or_default(),
                                threshold: n.threshold.unwrap_or_default(),
                                left: n.left.unwrap_or_default(),
                                right: n.right.unwrap_or_default(),
                                cover: n.cover,
                                gain: n.gain.unwrap_or(f64::NAN),
                            },
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(Self {
            trees,
            base_margin: dump.base_margin,
            config: dump.config.clone(),
            best_iteration: dump.best_iteration,
            feature_names: dump.feature_names.clone(),
        })
    }
}
