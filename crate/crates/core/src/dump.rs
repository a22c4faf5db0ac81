//! JSON model dump shared by the booster (writer) and the introspection
//! tools (reader).

use serde::{Deserialize, Serialize};

use crate::boost::TrainConfig;
use crate::error::{Error, Result};

pub const DUMP_FORMAT: &str = "maskboost-dump/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Split,
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpNode {
    pub id: usize,
    pub kind: NodeKind,
    pub feature_index: Option<usize>,
    pub feature_name: Option<String>,
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<f64>,
    pub cover: f64,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub leaf_weight: Option<f64>,
}

impl DumpNode {
    pub fn leaf(id: usize, weight: f64, cover: f64) -> Self {
        Self {
            id,
            kind: NodeKind::Leaf,
            feature_index: None,
            feature_name: None,
            threshold: None,
            gain: None,
            cover,
            left: None,
            right: None,
            leaf_weight: Some(weight),
        }
    }

    pub fn split(
        id: usize,
        feature: usize,
        threshold: f64,
        cover: f64,
        left: usize,
        right: usize,
    ) -> Self {
        Self {
            id,
            kind: NodeKind::Split,
            feature_index: Some(feature),
            feature_name: None,
            threshold: Some(threshold),
            gain: None,
            cover,
            left: Some(left),
            right: Some(right),
            leaf_weight: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpTree {
    pub nodes: Vec<DumpNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDump {
    pub format: String,
    pub base_margin: f64,
    pub best_iteration: usize,
    pub config: TrainConfig,
    pub feature_names: Vec<String>,
    pub trees: Vec<DumpTree>,
}

impl ModelDump {
    /// Dump with default config and generated feature names, mostly for fixtures.
    pub fn from_trees(n_features: usize, trees: Vec<DumpTree>) -> Self {
        Self {
            format: DUMP_FORMAT.to_string(),
            base_margin: 0.0,
            best_iteration: trees.len(),
            config: TrainConfig::default(),
            feature_names: (0..n_features).map(|i| format!("x{i}")).collect(),
            trees,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    /// Checks that every tree is a well-formed binary tree rooted at node 0.
    pub fn validate(&self) -> Result<()> {
        if self.format != DUMP_FORMAT {
            return Err(malformed(
                "header".into(),
                format!("unsupported format {:?}", self.format),
            ));
        }
        if !self.base_margin.is_finite() {
            return Err(malformed(
                "header".into(),
                "base_margin is not finite".into(),
            ));
        }
        for (t, tree) in self.trees.iter().enumerate() {
            validate_tree(t, tree, &self.feature_names)?;
        }
        Ok(())
    }
}

fn malformed(location: String, reason: String) -> Error {
    Error::MalformedDump { location, reason }
}

/// Root-to-node path such as `root/L/R`, if the node is reachable.
fn node_path(parent: &[Option<(usize, char)>], mut id: usize) -> String {
    let mut steps = Vec::new();
    while let Some((p, side)) = parent[id] {
        steps.push(side);
        id = p;
        if steps.len() > parent.len() {
            break;
        }
    }
    let mut path = String::from("root");
    for side in steps.iter().rev() {
        path.push('/');
        path.push(*side);
    }
    path
}

fn validate_tree(t: usize, tree: &DumpTree, feature_names: &[String]) -> Result<()> {
    let n = tree.nodes.len();
    if n == 0 {
        return Err(malformed(format!("tree {t}"), "tree has no nodes".into()));
    }
    let mut parent: Vec<Option<(usize, char)>> = vec![None; n];
    let mut has_parent = vec![false; n];

    for (i, node) in tree.nodes.iter().enumerate() {
        if node.id != i {
            return Err(malformed(
                format!("tree {t} node at position {i}"),
                format!("id {} does not match its position", node.id),
            ));
        }
    }

    // First pass: links, so later errors can name a path.
    for node in &tree.nodes {
        if node.kind != NodeKind::Split {
            continue;
        }
        for (side, child) in [('L', node.left), ('R', node.right)] {
            let where_ = || format!("tree {t} node {}", node.id);
            let c = child.ok_or_else(|| {
                malformed(
                    where_(),
                    format!(
                        "split node is missing its {} child id",
                        if side == 'L' { "left" } else { "right" }
                    ),
                )
            })?;
            if c >= n {
                return Err(malformed(where_(), format!("child id {c} does not exist")));
            }
            if c == 0 {
                return Err(malformed(where_(), "root listed as a child".into()));
            }
            if has_parent[c] {
                return Err(malformed(
                    where_(),
                    format!("node {c} has more than one parent"),
                ));
            }
            has_parent[c] = true;
            parent[c] = Some((node.id, side));
        }
    }

    for node in &tree.nodes {
        let loc = || {
            format!(
                "tree {t} node {} ({})",
                node.id,
                node_path(&parent, node.id)
            )
        };
        if node.id != 0 && !has_parent[node.id] {
            return Err(malformed(loc(), "node is unreachable from the root".into()));
        }
        if !(node.cover.is_finite() && node.cover > 0.0) {
            return Err(malformed(
                loc(),
                format!("cover must be positive, got {}", node.cover),
            ));
        }
        match node.kind {
            NodeKind::Split => {
                let f = node
                    .feature_index
                    .ok_or_else(|| malformed(loc(), "split node has no feature_index".into()))?;
                if f >= feature_names.len() {
                    return Err(malformed(loc(), format!("feature_index {f} out of range")));
                }
                if let Some(name) = &node.feature_name {
                    if name != &feature_names[f] {
                        return Err(malformed(
                            loc(),
                            format!(
                                "feature_name {name:?} does not match index {f} ({:?})",
                                feature_names[f]
                            ),
                        ));
                    }
                }
                match node.threshold {
                    Some(th) if th.is_finite() => {}
                    _ => {
                        return Err(malformed(
                            loc(),
                            "split node needs a finite threshold".into(),
                        ))
                    }
                }
                if node.leaf_weight.is_some() {
                    return Err(malformed(loc(), "split node carries a leaf_weight".into()));
                }
            }
            NodeKind::Leaf => {
                match node.leaf_weight {
                    Some(w) if w.is_finite() => {}
                    _ => return Err(malformed(loc(), "leaf needs a finite leaf_weight".into())),
                }
                if node.left.is_some() || node.right.is_some() {
                    return Err(malformed(loc(), "leaf has child ids".into()));
                }
            }
        }
    }

    // Unique parents plus root-reachability rule out cycles, but a cycle not
    // touching the root would still give every node a parent.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        seen[i] = true;
        let node = &tree.nodes[i];
        if node.kind == NodeKind::Split {
            stack.extend(node.left.into_iter().chain(node.right));
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(malformed(
            format!("tree {t} node {i}"),
            "node is unreachable from the root".into(),
        ));
    }
    Ok(())
}
