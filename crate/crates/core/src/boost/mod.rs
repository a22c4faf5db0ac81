//! Second-order gradient boosting for binary logistic loss.

mod config;
mod ensemble;
pub mod objective;
mod sampling;
mod tree;

pub use config::TrainConfig;
pub use ensemble::{train, Ensemble};
pub use objective::{leaf_weight, logistic_grad_hess, sigmoid, split_gain, GradPair};
pub use sampling::{sample_columns, sample_size};
pub use tree::{build_tree, SortedColumns, Tree, TreeBuilder, TreeNode};
