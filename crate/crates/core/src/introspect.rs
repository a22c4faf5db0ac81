//! Structural analysis of model dumps: path co-usage of two features and
//! closed-form feature availability under column masking.

use std::io::Write;

use crate::boost::sample_size;
use crate::dump::{ModelDump, NodeKind};
use crate::error::{Error, Result};

/// Parses and validates a dump document.
pub fn load_dump(text: &str) -> Result<ModelDump> {
    let dump: ModelDump = serde_json::from_str(text)?;
    dump.validate()?;
    Ok(dump)
}

pub fn write_dump(dump: &ModelDump) -> Result<String> {
    dump.to_json()
}

/// How leaf indicators are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoocWeighting {
    /// Cover-weighted within each tree, then an unweighted mean over trees.
    PerTree,
    /// One cover-weighted average over all leaves of all trees.
    Pooled,
}

/// Per-leaf `(cover, both features on the path)` for one tree.
fn leaf_indicators(dump: &ModelDump, t: usize, fi: usize, fj: usize) -> Vec<(f64, bool)> {
    let nodes = &dump.trees[t].nodes;
    let mut out = Vec::new();
    let mut stack = vec![(0usize, false, false)];
    while let Some((id, has_i, has_j)) = stack.pop() {
        let node = &nodes[id];
        match node.kind {
            NodeKind::Leaf => out.push((node.cover, has_i && has_j)),
            NodeKind::Split => {
                let f = node.feature_index.unwrap_or(usize::MAX);
                let (hi, hj) = (has_i || f == fi, has_j || f == fj);
                for child in [node.right, node.left].into_iter().flatten() {
                    stack.push((child, hi, hj));
                }
            }
        }
    }
    out
}

/// Cover-weighted frequency with which both features appear on a
/// root-to-leaf path. Single-leaf trees contribute zero.
pub fn cooc_path_mean(dump: &ModelDump, feat_i: usize, feat_j: usize) -> Result<f64> {
    cooc_path_mean_with(dump, feat_i, feat_j, CoocWeighting::PerTree)
}

pub fn cooc_path_mean_with(
    dump: &ModelDump,
    feat_i: usize,
    feat_j: usize,
    weighting: CoocWeighting,
) -> Result<f64> {
    if dump.trees.is_empty() {
        return Err(Error::InvalidInput("dump has no trees".into()));
    }
    dump.validate()?;
    for f in [feat_i, feat_j] {
        if f >= dump.feature_names.len() {
            return Err(Error::InvalidInput(format!(
                "feature index {f} out of range"
            )));
        }
    }
    let (mut tree_sum, mut pooled_hit, mut pooled_cover) = (0.0, 0.0, 0.0);
    for t in 0..dump.trees.len() {
        let leaves = leaf_indicators(dump, t, feat_i, feat_j);
        let cover: f64 = leaves.iter().map(|l| l.0).sum();
        let hit: f64 = leaves.iter().filter(|l| l.1).map(|l| l.0).sum();
        pooled_cover += cover;
        pooled_hit += hit;
        if leaves.len() > 1 {
            tree_sum += hit / cover;
        }
    }
    Ok(match weighting {
        CoocWeighting::PerTree => tree_sum / dump.trees.len() as f64,
        CoocWeighting::Pooled => pooled_hit / pooled_cover,
    })
}

/// Probability that a feature is offered at least once along `levels` nodes,
/// each sampling it independently with probability `s`.
pub fn path_availability(s: f64, levels: u32) -> f64 {
    1.0 - (1.0 - s).powi(levels as i32)
}

/// Exact probability that a node-level sample of `max(1, round(s * p))`
/// features out of `p` contains both of two designated features.
pub fn node_pair_availability(s: f64, p: usize) -> f64 {
    let k = sample_size(p, s) as f64;
    let p = p as f64;
    k * (k - 1.0) / (p * (p - 1.0))
}

/// One-row structural summary emitted by the `introspect` command.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpSummary {
    pub cooc_path_mean: f64,
    pub cooc_pooled: f64,
    pub n_trees: usize,
    pub mean_depth: f64,
}

fn tree_depth(dump: &ModelDump, t: usize) -> usize {
    let nodes = &dump.trees[t].nodes;
    let mut max = 0;
    let mut stack = vec![(0usize, 0usize)];
    while let Some((id, d)) = stack.pop() {
        let node = &nodes[id];
        max = max.max(d);
        if node.kind == NodeKind::Split {
            stack.extend(
                [node.left, node.right]
                    .into_iter()
                    .flatten()
                    .map(|c| (c, d + 1)),
            );
        }
    }
    max
}

pub fn summarize(dump: &ModelDump, feat_i: usize, feat_j: usize) -> Result<DumpSummary> {
    let n = dump.trees.len();
    Ok(DumpSummary {
        cooc_path_mean: cooc_path_mean_with(dump, feat_i, feat_j, CoocWeighting::PerTree)?,
        cooc_pooled: cooc_path_mean_with(dump, feat_i, feat_j, CoocWeighting::Pooled)?,
        n_trees: n,
        mean_depth: (0..n).map(|t| tree_depth(dump, t) as f64).sum::<f64>() / n as f64,
    })
}

impl DumpSummary {
    pub const HEADER: [&'static str; 4] = [
        "cooc_path_mean",
        "cooc_path_mean_pooled",
        "n_trees",
        "mean_depth",
    ];

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::HEADER)?;
        w.write_record([
            format!("{:.6}", self.cooc_path_mean),
            format!("{:.6}", self.cooc_pooled),
            self.n_trees.to_string(),
            format!("{:.4}", self.mean_depth),
        ])?;
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}
