use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Booster hyperparameters. Defaults are the fixed experiment settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub num_rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub reg_lambda: f64,
    pub gamma: f64,
    pub min_child_weight: f64,
    pub colsample_bytree: f64,
    pub colsample_bylevel: f64,
    pub colsample_bynode: f64,
    pub row_subsample: f64,
    /// Rounds without validation improvement before stopping; 0 disables.
    pub early_stop_patience: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            num_rounds: 400,
            learning_rate: 0.1,
            max_depth: 6,
            reg_lambda: 1.0,
            gamma: 0.0,
            min_child_weight: 1.0,
            colsample_bytree: 1.0,
            colsample_bylevel: 1.0,
            colsample_bynode: 1.0,
            row_subsample: 1.0,
            early_stop_patience: 25,
            seed: 0,
        }
    }
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be in (0, 1], got {v}"
        )))
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_rounds == 0 {
            return Err(Error::InvalidInput("num_rounds must be >= 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidInput("max_depth must be >= 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        for (name, v) in [
            ("reg_lambda", self.reg_lambda),
            ("gamma", self.gamma),
            ("min_child_weight", self.min_child_weight),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be >= 0, got {v}")));
            }
        }
        unit_interval("colsample_bytree", self.colsample_bytree)?;
        unit_interval("colsample_bylevel", self.colsample_bylevel)?;
        unit_interval("colsample_bynode", self.colsample_bynode)?;
        unit_interval("row_subsample", self.row_subsample)
    }
}
