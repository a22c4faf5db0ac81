use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boost::TrainConfig;
use crate::error::{Error, Result};
use crate::synth::{Dgp, FeatureSet};

/// Column subsampling arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArmId {
    /// No intra-tree subsampling.
    C0,
    /// Per-level only.
    C1,
    /// Per-node only.
    C2,
    /// Per-level and per-node.
    C3,
}

impl ArmId {
    pub const ALL: [ArmId; 4] = [ArmId::C0, ArmId::C1, ArmId::C2, ArmId::C3];
}

impl fmt::Display for ArmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ArmId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C0" => Ok(ArmId::C0),
            "C1" => Ok(ArmId::C1),
            "C2" => Ok(ArmId::C2),
            "C3" => Ok(ArmId::C3),
            _ => Err(Error::InvalidInput(format!("unknown arm {s:?}"))),
        }
    }
}

/// An arm at a sampling rate. The baseline always carries `s = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arm {
    pub id: ArmId,
    pub s: f64,
}

impl Arm {
    pub fn new(id: ArmId, s: f64) -> Self {
        Self {
            id,
            s: if id == ArmId::C0 { 1.0 } else { s },
        }
    }

    pub fn baseline() -> Self {
        Self::new(ArmId::C0, 1.0)
    }

    /// `(colsample_bylevel, colsample_bynode)`.
    pub fn rates(&self) -> (f64, f64) {
        match self.id {
            ArmId::C0 => (1.0, 1.0),
            ArmId::C1 => (self.s, 1.0),
            ArmId::C2 => (1.0, self.s),
            ArmId::C3 => (self.s, self.s),
        }
    }

    /// `base` with this arm's intra-tree rates; per-tree sampling is off.
    pub fn apply(&self, base: &TrainConfig) -> TrainConfig {
        let (bylevel, bynode) = self.rates();
        TrainConfig {
            colsample_bytree: 1.0,
            colsample_bylevel: bylevel,
            colsample_bynode: bynode,
            ..base.clone()
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            ArmId::C0 => write!(f, "C0"),
            id => write!(f, "{id} s={}", self.s),
        }
    }
}

/// Identifies one training run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub dgp: Dgp,
    pub feature_set: FeatureSet,
    pub arm: ArmId,
    pub s: f64,
    pub seed: usize,
}

impl CellKey {
    pub fn new(dgp: Dgp, feature_set: FeatureSet, arm: Arm, seed: usize) -> Self {
        Self {
            dgp,
            feature_set,
            arm: arm.id,
            s: arm.s,
            seed,
        }
    }

    pub fn arm(&self) -> Arm {
        Arm::new(self.arm, self.s)
    }

    /// The matched C0 cell on the same data.
    pub fn baseline(&self) -> Self {
        Self {
            arm: ArmId::C0,
            s: 1.0,
            ..*self
        }
    }

    fn sort_key(&self) -> (Dgp, FeatureSet, ArmId, u64, usize) {
        (
            self.dgp,
            self.feature_set,
            self.arm,
            self.s.to_bits(),
            self.seed,
        )
    }
}

impl Eq for CellKey {}

impl PartialOrd for CellKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CellKey {
    // s is a positive finite rate, so its bit pattern orders like the value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dgp={} fs={} arm={} s={} seed={}",
            self.dgp, self.feature_set, self.arm, self.s, self.seed
        )
    }
}

/// Experiment axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dgps: Vec<Dgp>,
    pub feature_sets: Vec<FeatureSet>,
    pub arms: Vec<ArmId>,
    pub s_values: Vec<f64>,
    pub seeds: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.dgps.is_empty()
            || self.feature_sets.is_empty()
            || self.arms.is_empty()
            || self.seeds == 0
        {
            return Err(Error::Config("every grid axis must be nonempty".into()));
        }
        if self.arms.iter().any(|&a| a != ArmId::C0) && self.s_values.is_empty() {
            return Err(Error::Config(
                "s_values must be nonempty when non-baseline arms are present".into(),
            ));
        }
        if let Some(s) = self.s_values.iter().find(|&&s| !(s > 0.0 && s <= 1.0)) {
            return Err(Error::Config(format!(
                "s values must be in (0, 1], got {s}"
            )));
        }
        Ok(())
    }

    /// Arms to train per (dgp, feature set, seed): the baseline once, plus
    /// every non-baseline arm at every rate. C0 is always included.
    pub fn arm_settings(&self) -> Vec<Arm> {
        let mut out = vec![Arm::baseline()];
        for &id in &self.arms {
            if id == ArmId::C0 {
                continue;
            }
            out.extend(self.s_values.iter().map(|&s| Arm::new(id, s)));
        }
        out
    }

    pub fn cells(&self) -> Vec<CellKey> {
        let arms = self.arm_settings();
        let mut cells = Vec::new();
        for &dgp in &self.dgps {
            for &fs in &self.feature_sets {
                for &arm in &arms {
                    for seed in 0..self.seeds {
                        cells.push(CellKey::new(dgp, fs, arm, seed));
                    }
                }
            }
        }
        cells.sort();
        cells
    }
}
