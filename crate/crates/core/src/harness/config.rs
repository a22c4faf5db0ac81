//! Experiment configuration, read from a TOML file.
//!
//! ```toml
//! master_seed = 20240607
//! out_dir = "results"
//!
//! [grid]
//! dgps = ["A", "B"]
//! feature_sets = ["F0", "F1"]
//! arms = ["C0", "C1", "C2", "C3"]
//! s_values = [0.4, 0.6, 0.8, 0.9]
//! seeds = 12
//!
//! [sizes]      # train / valid / test / test_prevalence
//! [train]      # booster settings; `seed` is replaced per cell
//! [dgp_a]      # sigma_u, sigma_v, sigma_eps, beta, intercept (optional)
//! [dgp_b]      # mu_e, sigma_e, sigma_v, phi, s0, beta, intercept (optional)
//! [distractors]
//! [boundary]   # sigma_u grid for the nuisance-strength sweep under C3
//! ```
//!
//! Every random stream is derived from `master_seed` through
//! [`crate::rng::derive_seed`] with these labels:
//!
//! | stream | labels |
//! |---|---|
//! | intercept calibration | `["calibrate", dgp]` |
//! | dataset of replicate `k` | `["data", dgp, k]`, then `train`/`valid`/`test` |
//! | boundary dataset of replicate `k` | `["boundary", k]`, then `train`/`valid`/`test`; shared across `sigma_u` |
//! | booster of replicate `k` | `["booster", dgp, feature_set, k]` |
//!
//! The booster stream does not depend on the arm, so arms of one replicate
//! share data and booster seed (common random numbers).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::grid::{ArmId, Grid};
use crate::boost::TrainConfig;
use crate::error::{Error, Result};
use crate::synth::{
    Dgp, DgpAParams, DgpBParams, DgpParams, DistractorParams, FeatureSet, SplitSizes,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub dgps: Vec<Dgp>,
    pub feature_sets: Vec<FeatureSet>,
    pub arms: Vec<ArmId>,
    pub s_values: Vec<f64>,
    pub seeds: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            dgps: vec![Dgp::A, Dgp::B],
            feature_sets: vec![FeatureSet::F0, FeatureSet::F1],
            arms: vec![ArmId::C0, ArmId::C1, ArmId::C2, ArmId::C3],
            s_values: vec![0.4, 0.6, 0.8, 0.9],
            seeds: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundaryConfig {
    pub sigma_u: Vec<f64>,
    pub s: f64,
    pub feature_sets: Vec<FeatureSet>,
    pub seeds: usize,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            sigma_u: vec![2.0, 4.0, 8.0, 16.0],
            s: 0.4,
            feature_sets: vec![FeatureSet::F0, FeatureSet::F1],
            seeds: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub master_seed: u64,
    pub out_dir: PathBuf,
    pub grid: GridConfig,
    pub sizes: SplitSizes,
    pub train: TrainConfig,
    pub dgp_a: DgpAParams,
    pub dgp_b: DgpBParams,
    pub distractors: DistractorParams,
    pub boundary: BoundaryConfig,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            master_seed: 20240607,
            out_dir: PathBuf::from("results"),
            grid: GridConfig::default(),
            sizes: SplitSizes::default(),
            train: TrainConfig::default(),
            dgp_a: DgpAParams::default(),
            dgp_b: DgpBParams::default(),
            distractors: DistractorParams::default(),
            boundary: BoundaryConfig::default(),
        }
    }
}

impl HarnessConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.sizes.validate()?;
        self.dgp_a.validate()?;
        self.dgp_b.validate()?;
        self.distractors.validate()?;
        self.grid().validate()?;
        if self
            .boundary
            .sigma_u
            .iter()
            .any(|&s| !(s.is_finite() && s >= 0.0))
        {
            return Err(Error::Config(
                "boundary sigma_u values must be finite and >= 0".into(),
            ));
        }
        if !(self.boundary.s > 0.0 && self.boundary.s <= 1.0) {
            return Err(Error::Config(format!(
                "boundary s must be in (0, 1], got {}",
                self.boundary.s
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        Grid {
            dgps: self.grid.dgps.clone(),
            feature_sets: self.grid.feature_sets.clone(),
            arms: self.grid.arms.clone(),
            s_values: self.grid.s_values.clone(),
            seeds: self.grid.seeds,
        }
    }

    pub fn dgp_params(&self, dgp: Dgp) -> DgpParams {
        match dgp {
            Dgp::A => DgpParams::A(self.dgp_a.clone()),
            Dgp::B => DgpParams::B(self.dgp_b.clone()),
        }
    }
}
