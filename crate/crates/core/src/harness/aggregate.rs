use std::collections::BTreeMap;

use super::grid::{ArmId, CellKey};
use super::run::{BoundaryRecord, RunRecord};
use crate::error::{Error, Result};
use crate::metrics::{paired_delta_ci, relative_delta, PairedDeltaSet};
use crate::synth::{Dgp, FeatureSet};

/// Paired deltas of one (dgp, feature set, arm, s) cell against C0.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub dgp: Dgp,
    pub feature_set: FeatureSet,
    pub arm: ArmId,
    pub s: f64,
    pub n: usize,
    pub pr: PairedDeltaSet,
    /// Percent, `100 * mean(d) / mean(baseline)`.
    pub rel_pr: f64,
    pub roc: PairedDeltaSet,
    pub rel_roc: f64,
    pub d_cooc: f64,
    pub d_cooc_pooled: f64,
    pub d_latent_corr: f64,
}

/// Raw C0 means of one (dgp, feature set).
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRow {
    pub dgp: Dgp,
    pub feature_set: FeatureSet,
    pub n: usize,
    pub pr_auc: f64,
    pub roc_auc: f64,
    pub latent_corr: f64,
    pub cooc_path_mean: f64,
    pub cooc_pooled: f64,
    pub best_iteration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub rows: Vec<ReportRow>,
    pub baselines: Vec<BaselineRow>,
}

impl Aggregate {
    pub fn row(&self, dgp: Dgp, fs: FeatureSet, arm: ArmId, s: f64) -> Option<&ReportRow> {
        self.rows.iter().find(|r| {
            r.dgp == dgp && r.feature_set == fs && r.arm == arm && (arm == ArmId::C0 || r.s == s)
        })
    }

    pub fn baseline(&self, dgp: Dgp, fs: FeatureSet) -> Option<&BaselineRow> {
        self.baselines
            .iter()
            .find(|b| b.dgp == dgp && b.feature_set == fs)
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

/// Pairs every record with the C0 record of the same (dgp, feature set,
/// seed) and summarizes the deltas per cell. The result does not depend on
/// the order of `records`.
pub fn aggregate(records: &[RunRecord]) -> Result<Aggregate> {
    let mut by_key: BTreeMap<CellKey, &RunRecord> = BTreeMap::new();
    for r in records {
        if by_key.insert(r.key, r).is_some() {
            return Err(Error::DuplicateRecord(r.key.to_string()));
        }
    }

    // (dgp, fs, arm, s bits) -> pairs ordered by seed
    let mut cells: BTreeMap<(Dgp, FeatureSet, ArmId, u64), Vec<(&RunRecord, &RunRecord)>> =
        BTreeMap::new();
    for (key, rec) in &by_key {
        let base = by_key
            .get(&key.baseline())
            .ok_or_else(|| Error::MissingBaseline(key.to_string()))?;
        cells
            .entry((key.dgp, key.feature_set, key.arm, key.s.to_bits()))
            .or_default()
            .push((rec, base));
    }

    let mut rows = Vec::with_capacity(cells.len());
    let mut baselines = Vec::new();
    for ((dgp, feature_set, arm, s_bits), pairs) in cells {
        let delta =
            |f: fn(&RunRecord) -> f64| pairs.iter().map(|(r, b)| f(r) - f(b)).collect::<Vec<_>>();
        let base_mean = |f: fn(&RunRecord) -> f64| mean(pairs.iter().map(|(_, b)| f(b)));

        let pr = paired_delta_ci(&delta(|r| r.metrics.pr_auc))?;
        let roc = paired_delta_ci(&delta(|r| r.metrics.roc_auc))?;
        let rel_pr = relative_delta(pr.mean, base_mean(|r| r.metrics.pr_auc))?;
        let rel_roc = relative_delta(roc.mean, base_mean(|r| r.metrics.roc_auc))?;
        rows.push(ReportRow {
            dgp,
            feature_set,
            arm,
            s: f64::from_bits(s_bits),
            n: pairs.len(),
            pr,
            rel_pr,
            roc,
            rel_roc,
            d_cooc: mean(delta(|r| r.cooc_path_mean).into_iter()),
            d_cooc_pooled: mean(delta(|r| r.cooc_pooled).into_iter()),
            d_latent_corr: mean(delta(|r| r.metrics.latent_corr).into_iter()),
        });

        if arm == ArmId::C0 {
            baselines.push(BaselineRow {
                dgp,
                feature_set,
                n: pairs.len(),
                pr_auc: base_mean(|r| r.metrics.pr_auc),
                roc_auc: base_mean(|r| r.metrics.roc_auc),
                latent_corr: base_mean(|r| r.metrics.latent_corr),
                cooc_path_mean: base_mean(|r| r.cooc_path_mean),
                cooc_pooled: base_mean(|r| r.cooc_pooled),
                best_iteration: base_mean(|r| r.best_iteration as f64),
            });
        }
    }
    Ok(Aggregate { rows, baselines })
}

/// One point of the nuisance-strength sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRow {
    pub sigma_u: f64,
    pub feature_set: FeatureSet,
    pub s: f64,
    pub n: usize,
    pub baseline_pr: f64,
    pub pr: PairedDeltaSet,
    pub rel_pr: f64,
    pub d_cooc: f64,
}

/// Aggregates boundary records per nuisance scale; one row per
/// (sigma_u, feature set) for the subsampled arm.
pub fn aggregate_boundary(records: &[BoundaryRecord]) -> Result<Vec<BoundaryRow>> {
    let mut groups: BTreeMap<u64, Vec<RunRecord>> = BTreeMap::new();
    for r in records {
        if !(r.sigma_u >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "invalid sigma_u {}",
                r.sigma_u
            )));
        }
        // +0.0 and larger: bit order equals numeric order
        groups
            .entry((r.sigma_u + 0.0).to_bits())
            .or_default()
            .push(r.record.clone());
    }
    let mut out = Vec::new();
    for (bits, recs) in groups {
        let agg = aggregate(&recs)?;
        for row in agg.rows.into_iter().filter(|r| r.arm != ArmId::C0) {
            let baseline_pr = agg
                .baselines
                .iter()
                .find(|b| b.feature_set == row.feature_set && b.dgp == row.dgp)
                .map(|b| b.pr_auc)
                .unwrap_or(f64::NAN);
            out.push(BoundaryRow {
                sigma_u: f64::from_bits(bits),
                feature_set: row.feature_set,
                s: row.s,
                n: row.n,
                baseline_pr,
                pr: row.pr,
                rel_pr: row.rel_pr,
                d_cooc: row.d_cooc,
            });
        }
    }
    Ok(out)
}
