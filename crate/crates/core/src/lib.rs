//! Exact-greedy gradient boosted trees with intra-tree column subsampling,
//! cancellation-style synthetic benchmarks, ranking metrics, tree
//! introspection and a paired experiment harness.

pub mod boost;
pub mod data;
pub mod dump;
pub mod error;
pub mod harness;
pub mod introspect;
pub mod metrics;
pub mod rng;
pub mod synth;

pub use data::{ColumnRole, FeatureMatrix};
pub use error::{Error, Result};
