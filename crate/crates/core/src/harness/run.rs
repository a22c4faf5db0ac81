use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::config::HarnessConfig;
use super::grid::{Arm, ArmId, CellKey};
use crate::boost::{train, Ensemble};
use crate::data::ColumnRole;
use crate::error::{Error, Result};
use crate::introspect::{cooc_path_mean_with, CoocWeighting};
use crate::metrics::RankingMetrics;
use crate::rng::derive_seed;
use crate::synth::{calibrated, draw_splits, Dgp, DgpParams, FeatureSet, SplitDraws, Splits};

/// Metrics of one trained cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub key: CellKey,
    pub metrics: RankingMetrics,
    pub cooc_path_mean: f64,
    pub cooc_pooled: f64,
    pub best_iteration: usize,
    /// Seconds spent training and evaluating; not part of `results.csv`.
    pub wall_time: f64,
}

/// Records of a grid run plus the cells that failed.
#[derive(Debug, Default)]
pub struct GridOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<(CellKey, String)>,
}

impl GridOutcome {
    pub fn into_result(self) -> Result<Vec<RunRecord>> {
        match self.failures.first() {
            None => Ok(self.records),
            Some((key, msg)) => Err(Error::CellsFailed {
                count: self.failures.len(),
                first: format!("{key}: {msg}"),
            }),
        }
    }
}

/// Boundary-sweep record: a DGP-A run at a given nuisance scale.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRecord {
    pub sigma_u: f64,
    pub record: RunRecord,
}

/// A configured experiment with calibrated label intercepts.
pub struct Experiment {
    config: HarnessConfig,
    params: BTreeMap<Dgp, DgpParams>,
}

impl Experiment {
    pub fn new(config: HarnessConfig) -> Result<Self> {
        config.validate()?;
        let mut params = BTreeMap::new();
        for dgp in [Dgp::A, Dgp::B] {
            let seed = derive_seed(
                config.master_seed,
                &["calibrate".to_string(), dgp.to_string()],
            );
            params.insert(
                dgp,
                calibrated(&config.dgp_params(dgp), config.sizes.test_prevalence, seed)?,
            );
        }
        Ok(Self { config, params })
    }

    pub fn config(&self) -> &HarnessConfig {
        &self.config
    }

    /// Calibrated parameters of a process.
    pub fn params(&self, dgp: Dgp) -> &DgpParams {
        &self.params[&dgp]
    }

    pub fn data_seed(&self, dgp: Dgp, replicate: usize) -> u64 {
        derive_seed(
            self.config.master_seed,
            &["data".to_string(), dgp.to_string(), replicate.to_string()],
        )
    }

    pub fn booster_seed(&self, dgp: Dgp, fs: FeatureSet, replicate: usize) -> u64 {
        derive_seed(
            self.config.master_seed,
            &[
                "booster".to_string(),
                dgp.to_string(),
                fs.to_string(),
                replicate.to_string(),
            ],
        )
    }

    /// Raw splits of one replicate; shared by every arm and feature set.
    pub fn draw(&self, dgp: Dgp, replicate: usize) -> Result<SplitDraws> {
        draw_splits(
            self.params(dgp),
            &self.config.distractors,
            &self.config.sizes,
            self.data_seed(dgp, replicate),
        )
    }

    /// Generates the cell's data and runs it.
    pub fn run_cell(&self, key: &CellKey) -> Result<RunRecord> {
        let splits = self.draw(key.dgp, key.seed)?.assemble(key.feature_set)?;
        self.run_on(
            key,
            &splits,
            self.booster_seed(key.dgp, key.feature_set, key.seed),
        )
    }

    /// Like [`Experiment::run_cell`], also returning the trained model.
    pub fn fit_cell(&self, key: &CellKey) -> Result<(Ensemble, RunRecord)> {
        let splits = self.draw(key.dgp, key.seed)?.assemble(key.feature_set)?;
        self.fit_on(
            key,
            &splits,
            self.booster_seed(key.dgp, key.feature_set, key.seed),
        )
    }

    /// Trains the cell's arm on prepared splits and evaluates on the test split.
    pub fn run_on(&self, key: &CellKey, splits: &Splits, booster_seed: u64) -> Result<RunRecord> {
        self.fit_on(key, splits, booster_seed).map(|(_, r)| r)
    }

    fn fit_on(
        &self,
        key: &CellKey,
        splits: &Splits,
        booster_seed: u64,
    ) -> Result<(Ensemble, RunRecord)> {
        let start = Instant::now();
        let mut cfg = key.arm().apply(&self.config.train);
        cfg.seed = booster_seed;
        let (tr, va, te) = (&splits.train, &splits.valid, &splits.test);
        let model = train(&tr.features, &tr.labels, &va.features, &va.labels, &cfg)?;
        let scores = model.predict_margin(&te.features)?;
        let metrics = RankingMetrics::evaluate(&scores, &te.labels, &te.latent_v)?;

        let roles = tr.features.roles();
        let fa = roles.iter().position(|&r| r == ColumnRole::PrimitiveA);
        let fb = roles.iter().position(|&r| r == ColumnRole::PrimitiveB);
        let (Some(fa), Some(fb)) = (fa, fb) else {
            return Err(Error::InvalidInput(
                "dataset lacks primitive columns".into(),
            ));
        };
        let dump = model.to_dump();
        let (cooc, pooled) = if dump.trees.is_empty() {
            (0.0, 0.0)
        } else {
            (
                cooc_path_mean_with(&dump, fa, fb, CoocWeighting::PerTree)?,
                cooc_path_mean_with(&dump, fa, fb, CoocWeighting::Pooled)?,
            )
        };
        let record = RunRecord {
            key: *key,
            metrics,
            cooc_path_mean: cooc,
            cooc_pooled: pooled,
            best_iteration: model.best_iteration,
            wall_time: start.elapsed().as_secs_f64(),
        };
        Ok((model, record))
    }

    /// Runs every grid cell. Work is split into (dgp, replicate) jobs that
    /// draw data once and train all feature sets and arms on it; jobs run
    /// in parallel and records come back sorted by key.
    pub fn run_grid(
        &self,
        progress: &(dyn Fn(&CellKey, &Result<RunRecord>) + Sync),
    ) -> GridOutcome {
        let grid = self.config.grid();
        let arms = grid.arm_settings();
        let jobs: Vec<(Dgp, usize)> = grid
            .dgps
            .iter()
            .flat_map(|&d| (0..grid.seeds).map(move |k| (d, k)))
            .collect();

        let results: Vec<Vec<(CellKey, Result<RunRecord>)>> = jobs
            .par_iter()
            .map(|&(dgp, k)| {
                let cells = || {
                    grid.feature_sets
                        .iter()
                        .flat_map(|&fs| arms.iter().map(move |&a| CellKey::new(dgp, fs, a, k)))
                };
                let draws = match self.draw(dgp, k) {
                    Ok(d) => d,
                    Err(e) => {
                        let msg = e.to_string();
                        return cells()
                            .map(|key| {
                                (
                                    key,
                                    Err(Error::InvalidInput(format!(
                                        "data generation failed: {msg}"
                                    ))),
                                )
                            })
                            .collect();
                    }
                };
                let mut out = Vec::new();
                for &fs in &grid.feature_sets {
                    let splits = draws.assemble(fs);
                    for &arm in &arms {
                        let key = CellKey::new(dgp, fs, arm, k);
                        let res = match &splits {
                            Ok(s) => self.run_on(&key, s, self.booster_seed(dgp, fs, k)),
                            Err(e) => Err(Error::InvalidInput(e.to_string())),
                        };
                        progress(&key, &res);
                        out.push((key, res));
                    }
                }
                out
            })
            .collect();

        let mut outcome = GridOutcome::default();
        for (key, res) in results.into_iter().flatten() {
            match res {
                Ok(r) => outcome.records.push(r),
                Err(e) => outcome.failures.push((key, e.to_string())),
            }
        }
        outcome.records.sort_by(|a, b| a.key.cmp(&b.key));
        outcome.failures.sort_by(|a, b| a.0.cmp(&b.0));
        outcome
    }

    /// DGP-A under C0 and C3 at `boundary.s` for every nuisance scale in
    /// `boundary.sigma_u`. Replicate `k` uses the same stream at every grid
    /// point, so the points differ only through `sigma_u`.
    pub fn run_boundary(
        &self,
        progress: &(dyn Fn(&CellKey, &Result<RunRecord>) + Sync),
    ) -> Result<Vec<BoundaryRecord>> {
        let b = &self.config.boundary;
        let base = match self.params(Dgp::A) {
            DgpParams::A(p) => p.clone(),
            DgpParams::B(_) => unreachable!("params keyed by A hold DGP-A parameters"),
        };
        let arms = [Arm::baseline(), Arm::new(ArmId::C3, b.s)];
        let jobs: Vec<(f64, usize)> = b
            .sigma_u
            .iter()
            .flat_map(|&su| (0..b.seeds).map(move |k| (su, k)))
            .collect();

        let results: Vec<Result<Vec<BoundaryRecord>>> = jobs
            .par_iter()
            .map(|&(sigma_u, k)| {
                let mut params = base.clone();
                params.sigma_u = sigma_u;
                let seed = derive_seed(
                    self.config.master_seed,
                    &["boundary".to_string(), k.to_string()],
                );
                let draws = draw_splits(
                    &DgpParams::A(params),
                    &self.config.distractors,
                    &self.config.sizes,
                    seed,
                )?;
                let mut out = Vec::new();
                for &fs in &b.feature_sets {
                    let splits = draws.assemble(fs)?;
                    for &arm in &arms {
                        let key = CellKey::new(Dgp::A, fs, arm, k);
                        let res = self.run_on(&key, &splits, self.booster_seed(Dgp::A, fs, k));
                        progress(&key, &res);
                        out.push(BoundaryRecord {
                            sigma_u,
                            record: res?,
                        });
                    }
                }
                Ok(out)
            })
            .collect();

        let mut records = Vec::new();
        for r in results {
            records.extend(r?);
        }
        records.sort_by(|a, b| {
            a.sigma_u
                .total_cmp(&b.sigma_u)
                .then(a.record.key.cmp(&b.record.key))
        });
        Ok(records)
    }
}

/// Progress callback that prints nothing.
pub fn quiet(_: &CellKey, _: &Result<RunRecord>) {}
