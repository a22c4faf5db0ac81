//! Depth-wise exact greedy tree construction with nested column sampling.
//!
//! Each level visits every sampled column once in globally sorted order and
//! routes rows to their current node through a position table, the classic
//! exact scan. Candidate thresholds are midpoints between adjacent distinct
//! values within a node; ties in gain go to the lowest column index, then the
//! lowest threshold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::objective::{leaf_weight, split_gain, GradPair};
use super::sampling::sample_columns;
use crate::data::FeatureMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        cover: f64,
        gain: f64,
    },
    Leaf {
        weight: f64,
        cover: f64,
    },
}

impl TreeNode {
    pub fn cover(&self) -> f64 {
        match *self {
            TreeNode::Split { cover, .. } | TreeNode::Leaf { cover, .. } => cover,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }
}

/// A regression tree over margins. Node 0 is the root; rows with
/// `x[feature] < threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    /// Caller guarantees the nodes form a well-formed tree rooted at 0.
    pub(crate) fn from_nodes(nodes: Vec<TreeNode>) -> Self {
        Self { nodes }
    }

    pub fn single_leaf(weight: f64, cover: f64) -> Self {
        Self {
            nodes: vec![TreeNode::Leaf { weight, cover }],
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Index of the leaf reached by a row whose features are read through `value`.
    pub fn leaf_index(&self, value: impl Fn(usize) -> f64) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { .. } => return i,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    i = if value(feature) < threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    pub fn predict_row(&self, data: &FeatureMatrix, row: usize) -> f64 {
        match self.nodes[self.leaf_index(|f| data.value(row, f))] {
            TreeNode::Leaf { weight, .. } => weight,
            TreeNode::Split { .. } => unreachable!("leaf_index returns a leaf"),
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }
}

/// Per-column row order, computed once per training matrix. Each entry
/// carries the rank of its value among the column's distinct values.
pub struct SortedColumns {
    entries: Vec<Vec<Entry>>,
    distinct: Vec<Vec<f64>>,
}

#[derive(Clone, Copy)]
struct Entry {
    row: u32,
    rank: u32,
}

impl SortedColumns {
    pub fn new(data: &FeatureMatrix) -> Self {
        let mut entries = Vec::with_capacity(data.n_cols());
        let mut distinct = Vec::with_capacity(data.n_cols());
        let mut order: Vec<(i64, u32)> = Vec::with_capacity(data.n_rows());
        for col in data.columns() {
            order.clear();
            order.extend(
                col.iter()
                    .enumerate()
                    .map(|(row, &v)| (total_order_key(v), row as u32)),
            );
            order.sort_unstable();
            let mut uniq: Vec<f64> = Vec::new();
            let e = order
                .iter()
                .map(|&(_, row)| {
                    let v = col[row as usize];
                    if uniq.last() != Some(&v) {
                        uniq.push(v);
                    }
                    Entry {
                        row,
                        rank: (uniq.len() - 1) as u32,
                    }
                })
                .collect();
            entries.push(e);
            distinct.push(uniq);
        }
        Self { entries, distinct }
    }
}

/// Integer key whose ordering matches `f64::total_cmp`.
fn total_order_key(v: f64) -> i64 {
    let bits = v.to_bits() as i64;
    bits ^ ((((bits >> 63) as u64) >> 1) as i64)
}

const NO_SLOT: u32 = u32::MAX;

/// Relative score difference below which two candidates count as tied.
const TIE_RTOL: f64 = 1e-12;

#[derive(Clone, Copy)]
struct ScanState {
    grad: f64,
    hess: f64,
    /// Rank of the last value seen, `NONE` before the first row.
    last: u32,
}

impl ScanState {
    const NONE: u32 = u32::MAX;
    const EMPTY: Self = Self {
        grad: 0.0,
        hess: 0.0,
        last: Self::NONE,
    };
}

#[derive(Clone, Copy)]
struct Candidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

struct Open {
    node: usize,
    grad: f64,
    hess: f64,
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid > lo {
        mid
    } else {
        hi
    }
}

/// Grows trees against a fixed training matrix.
pub struct TreeBuilder<'a> {
    data: &'a FeatureMatrix,
    sorted: SortedColumns,
    config: &'a TrainConfig,
}

impl<'a> TreeBuilder<'a> {
    pub fn new(data: &'a FeatureMatrix, config: &'a TrainConfig) -> Self {
        Self {
            data,
            sorted: SortedColumns::new(data),
            config,
        }
    }

    /// Grows one tree. `rows` restricts fitting to a subset (row subsampling);
    /// `None` uses every row.
    pub fn build<R: Rng + ?Sized>(
        &mut self,
        grads: &[GradPair],
        rows: Option<&[bool]>,
        rng: &mut R,
    ) -> Tree {
        let cfg = self.config;
        let n = self.data.n_rows();
        let p = self.data.n_cols();
        assert_eq!(grads.len(), n, "one gradient pair per row");

        let all_cols: Vec<usize> = (0..p).collect();
        let tree_cols = sample_columns(&all_cols, cfg.colsample_bytree, rng);

        let mut pos = vec![NO_SLOT; n];
        let (mut g0, mut h0) = (0.0, 0.0);
        for r in 0..n {
            if rows.is_none_or(|m| m[r]) {
                pos[r] = 0;
                g0 += grads[r].grad;
                h0 += grads[r].hess;
            }
        }

        let mut nodes = vec![TreeNode::Leaf {
            weight: leaf_weight(g0, h0, cfg.reg_lambda),
            cover: h0,
        }];
        let mut open = vec![Open {
            node: 0,
            grad: g0,
            hess: h0,
        }];

        for _depth in 0..cfg.max_depth {
            if open.is_empty() {
                break;
            }
            let slots = open.len();
            let level_cols = sample_columns(&tree_cols, cfg.colsample_bylevel, rng);

            // allowed[c * slots + s]: column c may split slot s
            let mut allowed = vec![false; slots * p];
            let mut scan_col = vec![false; p];
            for s in 0..slots {
                for c in sample_columns(&level_cols, cfg.colsample_bynode, rng) {
                    allowed[c * slots + s] = true;
                    scan_col[c] = true;
                }
            }

            let best = self.scan_level(grads, &pos, &open, &allowed, &scan_col);

            // Materialize splits and route rows to the children.
            let mut child_slot = vec![NO_SLOT; slots];
            let mut next: Vec<Open> = Vec::new();
            for (s, cand) in best.iter().enumerate() {
                if cand.is_some() {
                    child_slot[s] = next.len() as u32;
                    let left = nodes.len();
                    nodes.push(TreeNode::Leaf {
                        weight: 0.0,
                        cover: 0.0,
                    });
                    nodes.push(TreeNode::Leaf {
                        weight: 0.0,
                        cover: 0.0,
                    });
                    next.push(Open {
                        node: left,
                        grad: 0.0,
                        hess: 0.0,
                    });
                    next.push(Open {
                        node: left + 1,
                        grad: 0.0,
                        hess: 0.0,
                    });
                }
            }
            if next.is_empty() {
                break;
            }
            for r in 0..n {
                let s = pos[r];
                if s == NO_SLOT {
                    continue;
                }
                let s = s as usize;
                match best[s] {
                    None => pos[r] = NO_SLOT,
                    Some(c) => {
                        let base = child_slot[s];
                        let slot = if self.data.value(r, c.feature) < c.threshold {
                            base
                        } else {
                            base + 1
                        };
                        pos[r] = slot;
                        let o = &mut next[slot as usize];
                        o.grad += grads[r].grad;
                        o.hess += grads[r].hess;
                    }
                }
            }
            for (s, cand) in best.iter().enumerate() {
                if let Some(c) = cand {
                    let left = next[child_slot[s] as usize].node;
                    nodes[open[s].node] = TreeNode::Split {
                        feature: c.feature,
                        threshold: c.threshold,
                        left,
                        right: left + 1,
                        cover: open[s].hess,
                        gain: c.gain,
                    };
                }
            }
            for o in &next {
                nodes[o.node] = TreeNode::Leaf {
                    weight: leaf_weight(o.grad, o.hess, cfg.reg_lambda),
                    cover: o.hess,
                };
            }
            open = next;
        }

        Tree { nodes }
    }

    fn scan_level(
        &self,
        grads: &[GradPair],
        pos: &[u32],
        open: &[Open],
        allowed: &[bool],
        scan_col: &[bool],
    ) -> Vec<Option<Candidate>> {
        let cfg = self.config;
        let lambda = cfg.reg_lambda;
        let mcw = cfg.min_child_weight;
        let p = self.data.n_cols();
        let slots = open.len();
        let mut best: Vec<Option<Candidate>> = vec![None; slots];
        // A split must beat the parent's score by 2 * gamma; track the best
        // children score per slot and recompute the exact gain when it improves.
        let mut best_score: Vec<f64> = open
            .iter()
            .map(|o| structure_score(o.grad, o.hess, lambda) + 2.0 * cfg.gamma)
            .collect();
        let mut state = vec![ScanState::EMPTY; slots];

        for c in (0..p).filter(|&c| scan_col[c]) {
            state.fill(ScanState::EMPTY);
            let allowed_c = &allowed[c * slots..(c + 1) * slots];
            let distinct = &self.sorted.distinct[c];
            for &Entry { row, rank } in &self.sorted.entries[c] {
                let s = pos[row as usize];
                if s == NO_SLOT || !allowed_c[s as usize] {
                    continue;
                }
                let s = s as usize;
                let st = &mut state[s];
                if rank != st.last && st.last != ScanState::NONE {
                    let o = &open[s];
                    let h_right = o.hess - st.hess;
                    if st.hess >= mcw && h_right >= mcw {
                        let g_right = o.grad - st.grad;
                        // score = gl^2/dl + gr^2/dr, compared as a fraction to avoid dividing per row
                        let (dl, dr) = (st.hess + lambda, h_right + lambda);
                        let num = st.grad * st.grad * dr + g_right * g_right * dl;
                        let promising = !(dl > 0.0 && dr > 0.0) || num > best_score[s] * (dl * dr);
                        if promising {
                            let score = structure_score(st.grad, st.hess, lambda)
                                + structure_score(g_right, h_right, lambda);
                            let gain =
                                split_gain(st.grad, st.hess, g_right, h_right, lambda, cfg.gamma);
                            // Mirror-image partitions can differ in the last bits; keep the
                            // earlier (lower column, lower threshold) candidate on such ties.
                            let bar = if best[s].is_some() {
                                best_score[s] * (1.0 + TIE_RTOL)
                            } else {
                                best_score[s]
                            };
                            if gain > 0.0 && score > bar {
                                best_score[s] = score;
                                best[s] = Some(Candidate {
                                    gain,
                                    feature: c,
                                    threshold: midpoint(
                                        distinct[st.last as usize],
                                        distinct[rank as usize],
                                    ),
                                });
                            }
                        }
                    }
                }
                let g = grads[row as usize];
                st.grad += g.grad;
                st.hess += g.hess;
                st.last = rank;
            }
        }
        best
    }
}

#[inline]
fn structure_score(g: f64, h: f64, lambda: f64) -> f64 {
    let d = h + lambda;
    if d > 0.0 {
        g * g / d
    } else {
        0.0
    }
}

/// Grows a single tree on `data` from scratch.
pub fn build_tree<R: Rng + ?Sized>(
    grads: &[GradPair],
    data: &FeatureMatrix,
    config: &TrainConfig,
    rng: &mut R,
) -> Tree {
    TreeBuilder::new(data, config).build(grads, None, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_from_seed;

    fn cfg(depth: usize) -> TrainConfig {
        TrainConfig {
            max_depth: depth,
            min_child_weight: 0.0,
            ..Default::default()
        }
    }

    fn gp(grad: f64, hess: f64) -> GradPair {
        GradPair { grad, hess }
    }

    #[test]
    fn order_key_matches_total_cmp() {
        let vals = [
            -f64::MAX,
            -3.5,
            -1e-300,
            -0.0,
            0.0,
            1e-300,
            2.0,
            2.0000000000000004,
            f64::MAX,
        ];
        for a in vals {
            for b in vals {
                assert_eq!(
                    total_order_key(a).cmp(&total_order_key(b)),
                    a.total_cmp(&b),
                    "{a} {b}"
                );
            }
        }
    }

    #[test]
    fn single_row_is_leaf() {
        let data = FeatureMatrix::from_rows(&[vec![3.0, 1.0]]).unwrap();
        let tree = build_tree(&[gp(0.6, 0.24)], &data, &cfg(6), &mut stream_from_seed(0));
        assert_eq!(tree.nodes().len(), 1);
        match tree.nodes()[0] {
            TreeNode::Leaf { weight, cover } => {
                assert!((weight - (-0.6 / 1.24)).abs() < 1e-15);
                assert_eq!(cover, 0.24);
            }
            _ => panic!("expected a leaf"),
        }
    }

    #[test]
    fn step_data_splits_at_midpoint() {
        let data = FeatureMatrix::from_rows(&[vec![1.0], vec![2.0], vec![5.0], vec![6.0]]).unwrap();
        let grads = [gp(-1.0, 0.25), gp(-1.0, 0.25), gp(1.0, 0.25), gp(1.0, 0.25)];
        let tree = build_tree(&grads, &data, &cfg(1), &mut stream_from_seed(0));
        match tree.nodes()[0] {
            TreeNode::Split {
                feature, threshold, ..
            } => {
                assert_eq!(feature, 0);
                assert_eq!(threshold, 3.5);
            }
            _ => panic!("expected a split"),
        }
        assert_eq!(tree.depth(), 1);
    }

    #[test]
    fn constant_columns_give_leaf() {
        let data =
            FeatureMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        let grads = [gp(-1.0, 0.25), gp(1.0, 0.25), gp(0.5, 0.25)];
        let tree = build_tree(&grads, &data, &cfg(3), &mut stream_from_seed(0));
        assert_eq!(tree.nodes().len(), 1);
    }

    #[test]
    fn min_child_weight_blocks_split() {
        let data = FeatureMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        let grads = [gp(-1.0, 0.25), gp(1.0, 0.25)];
        let config = TrainConfig {
            max_depth: 2,
            min_child_weight: 0.3,
            ..Default::default()
        };
        assert_eq!(
            build_tree(&grads, &data, &config, &mut stream_from_seed(0))
                .nodes()
                .len(),
            1
        );
    }

    #[test]
    fn identical_columns_tie_to_lowest_index() {
        let x = vec![0.1, 0.4, 0.2, 0.9, 0.7];
        let data =
            FeatureMatrix::from_columns(vec![vec![0.0; 5], x.clone(), x.clone(), x]).unwrap();
        let grads = [
            gp(-1.0, 0.2),
            gp(0.5, 0.2),
            gp(-0.3, 0.2),
            gp(1.0, 0.2),
            gp(0.8, 0.2),
        ];
        let tree = build_tree(&grads, &data, &cfg(1), &mut stream_from_seed(0));
        assert!(matches!(
            tree.nodes()[0],
            TreeNode::Split { feature: 1, .. }
        ));
    }

    #[test]
    fn adjacent_float_midpoint_separates() {
        let lo = 1.0f64;
        let hi = f64::from_bits(lo.to_bits() + 1);
        let t = midpoint(lo, hi);
        assert!(lo < t || t == hi);
        assert!(!(hi < t));
        assert!(!(lo >= t));
    }

    #[test]
    fn row_mask_excludes_rows() {
        let data = FeatureMatrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let grads = [gp(-1.0, 0.25), gp(1.0, 0.25), gp(1.0, 0.25)];
        let config = cfg(2);
        let mut builder = TreeBuilder::new(&data, &config);
        let tree = builder.build(
            &grads,
            Some(&[true, false, false]),
            &mut stream_from_seed(0),
        );
        assert_eq!(tree.nodes().len(), 1);
        assert_eq!(tree.nodes()[0].cover(), 0.25);
    }
}
