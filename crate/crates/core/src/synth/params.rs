use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Continuous log-ratio process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DgpAParams {
    /// Scale of the shared nuisance `U`.
    pub sigma_u: f64,
    /// Scale of the differential latent `V`.
    pub sigma_v: f64,
    pub sigma_eps: f64,
    pub beta: f64,
    /// Label intercept; calibrated to the target prevalence when absent.
    pub intercept: Option<f64>,
}

impl Default for DgpAParams {
    fn default() -> Self {
        Self {
            sigma_u: 8.0,
            sigma_v: 0.5,
            sigma_eps: 0.1,
            beta: 3.0,
            intercept: None,
        }
    }
}

/// Count-plus-exposure process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DgpBParams {
    pub mu_e: f64,
    pub sigma_e: f64,
    pub sigma_v: f64,
    /// Negative binomial dispersion; variance is `mean + mean^2 / phi`.
    pub phi: f64,
    /// Smoothing added to both counts before taking logs.
    pub s0: f64,
    pub beta: f64,
    pub intercept: Option<f64>,
}

impl Default for DgpBParams {
    fn default() -> Self {
        Self {
            mu_e: 3.0,
            sigma_e: 2.0,
            sigma_v: 0.5,
            phi: 5.0,
            s0: 0.5,
            beta: 4.0,
            intercept: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistractorParams {
    pub p_noise: usize,
    /// Correlation of every distractor with the nuisance latent.
    pub rho: f64,
}

impl Default for DistractorParams {
    fn default() -> Self {
        Self {
            p_noise: 120,
            rho: 0.5,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be finite and >= 0, got {v}"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

impl DgpAParams {
    pub fn validate(&self) -> Result<()> {
        non_negative("sigma_u", self.sigma_u)?;
        positive("sigma_v", self.sigma_v)?;
        non_negative("sigma_eps", self.sigma_eps)?;
        finite("beta", self.beta)?;
        self.intercept.map_or(Ok(()), |c| finite("intercept", c))
    }
}

impl DgpBParams {
    pub fn validate(&self) -> Result<()> {
        finite("mu_e", self.mu_e)?;
        positive("sigma_e", self.sigma_e)?;
        positive("sigma_v", self.sigma_v)?;
        positive("phi", self.phi)?;
        positive("s0", self.s0)?;
        finite("beta", self.beta)?;
        self.intercept.map_or(Ok(()), |c| finite("intercept", c))
    }
}

impl DistractorParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidInput(format!(
                "rho must be in [0, 1), got {}",
                self.rho
            )));
        }
        Ok(())
    }
}

/// Which generating process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dgp {
    A,
    B,
}

/// Primitives only (`F0`) or primitives plus the engineered ratio (`F1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureSet {
    F0,
    F1,
}

impl fmt::Display for Dgp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dgp::A => "A",
            Dgp::B => "B",
        })
    }
}

impl FromStr for Dgp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Dgp::A),
            "B" | "b" => Ok(Dgp::B),
            _ => Err(Error::InvalidInput(format!("unknown dgp {s:?}"))),
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureSet::F0 => "F0",
            FeatureSet::F1 => "F1",
        })
    }
}

impl FromStr for FeatureSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F0" | "f0" => Ok(FeatureSet::F0),
            "F1" | "f1" => Ok(FeatureSet::F1),
            _ => Err(Error::InvalidInput(format!("unknown feature set {s:?}"))),
        }
    }
}

/// Parameters of either process.
#[derive(Debug, Clone, PartialEq)]
pub enum DgpParams {
    A(DgpAParams),
    B(DgpBParams),
}

impl DgpParams {
    pub fn kind(&self) -> Dgp {
        match self {
            DgpParams::A(_) => Dgp::A,
            DgpParams::B(_) => Dgp::B,
        }
    }

    pub fn sigma_v(&self) -> f64 {
        match self {
            DgpParams::A(p) => p.sigma_v,
            DgpParams::B(p) => p.sigma_v,
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            DgpParams::A(p) => p.beta,
            DgpParams::B(p) => p.beta,
        }
    }

    pub fn intercept(&self) -> Option<f64> {
        match self {
            DgpParams::A(p) => p.intercept,
            DgpParams::B(p) => p.intercept,
        }
    }

    pub fn with_intercept(&self, c: f64) -> Self {
        match self {
            DgpParams::A(p) => DgpParams::A(DgpAParams {
                intercept: Some(c),
                ..p.clone()
            }),
            DgpParams::B(p) => DgpParams::B(DgpBParams {
                intercept: Some(c),
                ..p.clone()
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DgpParams::A(p) => p.validate(),
            DgpParams::B(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSizes {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
    /// Test positives are exactly `round(test_prevalence * test)`; also the
    /// calibration target for the label intercept.
    pub test_prevalence: f64,
}

impl Default for SplitSizes {
    fn default() -> Self {
        Self {
            train: 25_000,
            valid: 10_000,
            test: 10_000,
            test_prevalence: 0.05,
        }
    }
}

impl SplitSizes {
    pub fn validate(&self) -> Result<()> {
        if self.train == 0 || self.valid == 0 || self.test == 0 {
            return Err(Error::InvalidInput("split sizes must be positive".into()));
        }
        if !(self.test_prevalence > 0.0 && self.test_prevalence < 1.0) {
            return Err(Error::InvalidInput(format!(
                "test_prevalence must be in (0, 1), got {}",
                self.test_prevalence
            )));
        }
        let pos = self.test_positives();
        if pos == 0 || pos == self.test {
            return Err(Error::InvalidInput(
                "test split would contain a single class".into(),
            ));
        }
        Ok(())
    }

    pub fn test_positives(&self) -> usize {
        (self.test_prevalence * self.test as f64).round() as usize
    }
}
