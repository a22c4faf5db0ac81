use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::aggregate::{aggregate, Aggregate, BoundaryRow};
use super::grid::{ArmId, CellKey};
use super::run::RunRecord;
use super::svg::{Axis, Chart, Series, PALETTE};
use crate::error::{Error, Result};
use crate::metrics::RankingMetrics;
use crate::synth::{Dgp, FeatureSet};

pub const RESULTS_FILE: &str = "results.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const BASELINE_CSV: &str = "baseline.csv";
pub const SUMMARY_MD: &str = "summary.md";
pub const BOUNDARY_CSV: &str = "boundary.csv";
pub const RUN_INFO_FILE: &str = "run_info.csv";

/// Wall-clock facts about one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub cells: usize,
    pub threads: usize,
    pub elapsed_seconds: f64,
}

pub fn write_run_info(info: &RunInfo, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.serialize(info)?;
    finish(w, path)
}

pub fn read_run_info(path: &Path) -> Result<RunInfo> {
    let mut r = csv::Reader::from_path(path)?;
    match r.deserialize().next() {
        Some(row) => Ok(row?),
        None => Err(Error::Config(format!("{}: no rows", path.display()))),
    }
}

/// One line of `results.csv`. Column order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ResultLine {
    dgp: Dgp,
    feature_set: FeatureSet,
    arm: ArmId,
    s: f64,
    seed: usize,
    pr_auc: f64,
    roc_auc: f64,
    latent_corr: f64,
    cooc_path_mean: f64,
    cooc_path_mean_pooled: f64,
    best_iteration: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct TimingLine {
    dgp: Dgp,
    feature_set: FeatureSet,
    arm: ArmId,
    s: f64,
    seed: usize,
    wall_time: f64,
}

fn create(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn sorted(records: &[RunRecord]) -> Vec<&RunRecord> {
    let mut v: Vec<&RunRecord> = records.iter().collect();
    v.sort_by(|a, b| a.key.cmp(&b.key));
    v
}

/// Writes one row per record, sorted by cell key. Timing goes to a separate
/// file so that `results.csv` is reproducible byte for byte.
pub fn write_results(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for r in sorted(records) {
        w.serialize(ResultLine {
            dgp: r.key.dgp,
            feature_set: r.key.feature_set,
            arm: r.key.arm,
            s: r.key.s,
            seed: r.key.seed,
            pr_auc: r.metrics.pr_auc,
            roc_auc: r.metrics.roc_auc,
            latent_corr: r.metrics.latent_corr,
            cooc_path_mean: r.cooc_path_mean,
            cooc_path_mean_pooled: r.cooc_pooled,
            best_iteration: r.best_iteration,
        })?;
    }
    finish(w, path)
}

pub fn write_timings(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for r in sorted(records) {
        w.serialize(TimingLine {
            dgp: r.key.dgp,
            feature_set: r.key.feature_set,
            arm: r.key.arm,
            s: r.key.s,
            seed: r.key.seed,
            wall_time: r.wall_time,
        })?;
    }
    finish(w, path)
}

/// Reads `results.csv`; `wall_time` is taken from a sibling `timings.csv`
/// when present and is 0 otherwise.
pub fn read_results(path: &Path) -> Result<Vec<RunRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for line in csv::Reader::from_reader(file).deserialize() {
        let l: ResultLine = line?;
        let key = CellKey {
            dgp: l.dgp,
            feature_set: l.feature_set,
            arm: l.arm,
            s: if l.arm == ArmId::C0 { 1.0 } else { l.s },
            seed: l.seed,
        };
        out.push(RunRecord {
            key,
            metrics: RankingMetrics {
                pr_auc: l.pr_auc,
                roc_auc: l.roc_auc,
                latent_corr: l.latent_corr,
            },
            cooc_path_mean: l.cooc_path_mean,
            cooc_pooled: l.cooc_path_mean_pooled,
            best_iteration: l.best_iteration,
            wall_time: 0.0,
        });
    }

    let timings = path.with_file_name(TIMINGS_FILE);
    if timings.exists() {
        let file = fs::File::open(&timings).map_err(|e| Error::io(&timings, e))?;
        let mut times = BTreeMap::new();
        for line in csv::Reader::from_reader(file).deserialize() {
            let t: TimingLine = line?;
            let s = if t.arm == ArmId::C0 { 1.0 } else { t.s };
            times.insert(
                CellKey {
                    dgp: t.dgp,
                    feature_set: t.feature_set,
                    arm: t.arm,
                    s,
                    seed: t.seed,
                },
                t.wall_time,
            );
        }
        for r in &mut out {
            r.wall_time = times.get(&r.key).copied().unwrap_or(0.0);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SummaryLine {
    dgp: Dgp,
    feature_set: FeatureSet,
    arm: ArmId,
    s: f64,
    n: usize,
    d_pr_auc: f64,
    d_pr_auc_ci_lo: f64,
    d_pr_auc_ci_hi: f64,
    rel_d_pr_auc_pct: f64,
    d_roc_auc: f64,
    d_roc_auc_ci_lo: f64,
    d_roc_auc_ci_hi: f64,
    rel_d_roc_auc_pct: f64,
    d_cooc_path_mean: f64,
    d_cooc_path_mean_pooled: f64,
    d_latent_corr: f64,
}

#[derive(Serialize)]
struct BaselineLine {
    dgp: Dgp,
    feature_set: FeatureSet,
    n: usize,
    pr_auc: f64,
    roc_auc: f64,
    latent_corr: f64,
    cooc_path_mean: f64,
    cooc_path_mean_pooled: f64,
    best_iteration: f64,
}

pub fn write_summary_csv(agg: &Aggregate, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for r in &agg.rows {
        w.serialize(SummaryLine {
            dgp: r.dgp,
            feature_set: r.feature_set,
            arm: r.arm,
            s: r.s,
            n: r.n,
            d_pr_auc: r.pr.mean,
            d_pr_auc_ci_lo: r.pr.ci_lo,
            d_pr_auc_ci_hi: r.pr.ci_hi,
            rel_d_pr_auc_pct: r.rel_pr,
            d_roc_auc: r.roc.mean,
            d_roc_auc_ci_lo: r.roc.ci_lo,
            d_roc_auc_ci_hi: r.roc.ci_hi,
            rel_d_roc_auc_pct: r.rel_roc,
            d_cooc_path_mean: r.d_cooc,
            d_cooc_path_mean_pooled: r.d_cooc_pooled,
            d_latent_corr: r.d_latent_corr,
        })?;
    }
    finish(w, path)
}

pub fn write_baseline_csv(agg: &Aggregate, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for b in &agg.baselines {
        w.serialize(BaselineLine {
            dgp: b.dgp,
            feature_set: b.feature_set,
            n: b.n,
            pr_auc: b.pr_auc,
            roc_auc: b.roc_auc,
            latent_corr: b.latent_corr,
            cooc_path_mean: b.cooc_path_mean,
            cooc_path_mean_pooled: b.cooc_pooled,
            best_iteration: b.best_iteration,
        })?;
    }
    finish(w, path)
}

fn fs_title(fs: FeatureSet) -> &'static str {
    match fs {
        FeatureSet::F0 => "F0 (primitives only)",
        FeatureSet::F1 => "F1 (primitives + engineered ratio)",
    }
}

/// Markdown tables: per process, one delta panel per feature set and a
/// panel of raw baseline values.
pub fn render_markdown(agg: &Aggregate) -> String {
    let mut md = String::from("# Paired deltas versus C0\n");
    let dgps: Vec<Dgp> = {
        let mut d: Vec<Dgp> = agg.rows.iter().map(|r| r.dgp).collect();
        d.dedup();
        d
    };
    for dgp in dgps {
        let _ = writeln!(md, "\n## DGP {dgp}\n");
        let mut panel = b'A';
        for fs in [FeatureSet::F0, FeatureSet::F1] {
            let rows: Vec<_> = agg
                .rows
                .iter()
                .filter(|r| r.dgp == dgp && r.feature_set == fs && r.arm != ArmId::C0)
                .collect();
            if rows.is_empty() {
                continue;
            }
            let _ = writeln!(md, "### Panel {}: {}\n", panel as char, fs_title(fs));
            panel += 1;
            md.push_str(
                "| Arm | s | ΔPR-AUC (95% CI) | relΔPR-AUC (%) | ΔROC-AUC (95% CI) | relΔROC-AUC (%) | Δcooc_path_mean | Δlatent_corr | n |\n",
            );
            md.push_str("|---|---|---|---:|---|---:|---:|---:|---:|\n");
            for r in rows {
                let _ = writeln!(
                    md,
                    "| {} | {} | {:.4} [{:.4}, {:.4}] | {:.1} | {:.4} [{:.4}, {:.4}] | {:.1} | {:.3} | {:.3} | {} |",
                    r.arm,
                    r.s,
                    r.pr.mean,
                    r.pr.ci_lo,
                    r.pr.ci_hi,
                    r.rel_pr,
                    r.roc.mean,
                    r.roc.ci_lo,
                    r.roc.ci_hi,
                    r.rel_roc,
                    r.d_cooc,
                    r.d_latent_corr,
                    r.n
                );
            }
            md.push('\n');
        }
        let _ = writeln!(
            md,
            "### Panel {}: Baseline C0 (raw values, s = 1.0)\n",
            panel as char
        );
        md.push_str("| Feature set | PR-AUC | ROC-AUC | latent_corr | cooc_path_mean | n |\n");
        md.push_str("|---|---:|---:|---:|---:|---:|\n");
        for b in agg.baselines.iter().filter(|b| b.dgp == dgp) {
            let _ = writeln!(
                md,
                "| {} | {:.4} | {:.4} | {:.4} | {:.4} | {} |",
                b.feature_set, b.pr_auc, b.roc_auc, b.latent_corr, b.cooc_path_mean, b.n
            );
        }
    }
    md
}

/// Metrics with a figure per (dgp, feature set).
pub const FIGURE_METRICS: [&str; 2] = ["pr_auc", "roc_auc"];

/// Line charts of relative delta (left axis) and Δcooc (right axis) over
/// `s`, one pair of series per arm. Returns the written paths.
pub fn write_figures(agg: &Aggregate, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut keys: Vec<(Dgp, FeatureSet)> =
        agg.rows.iter().map(|r| (r.dgp, r.feature_set)).collect();
    keys.dedup();
    let mut written = Vec::new();
    for (dgp, fs) in keys {
        for metric in FIGURE_METRICS {
            let mut chart = Chart {
                title: format!("DGP {dgp}, {fs}: relative change in {metric} and Δcooc_path_mean"),
                x_label: "s (column sampling rate)".into(),
                left_label: format!("relΔ {metric} (%)"),
                right_label: "Δcooc_path_mean".into(),
                series: Vec::new(),
            };
            for (i, arm) in [ArmId::C1, ArmId::C2, ArmId::C3].into_iter().enumerate() {
                let rows: Vec<_> = agg
                    .rows
                    .iter()
                    .filter(|r| r.dgp == dgp && r.feature_set == fs && r.arm == arm)
                    .collect();
                if rows.is_empty() {
                    continue;
                }
                let rel = |r: &&super::aggregate::ReportRow| {
                    if metric == "pr_auc" {
                        r.rel_pr
                    } else {
                        r.rel_roc
                    }
                };
                chart.series.push(Series {
                    name: format!("{arm} relΔ"),
                    color: PALETTE[i],
                    dashed: false,
                    axis: Axis::Left,
                    points: rows.iter().map(|r| (r.s, rel(r))).collect(),
                });
                chart.series.push(Series {
                    name: format!("{arm} Δcooc"),
                    color: PALETTE[i],
                    dashed: true,
                    axis: Axis::Right,
                    points: rows.iter().map(|r| (r.s, r.d_cooc)).collect(),
                });
            }
            if chart.series.is_empty() {
                continue;
            }
            let path = dir.join(format!("fig_{dgp}_{fs}_{metric}.svg"));
            write_text(&path, &chart.render())?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Aggregates `records` and writes summary tables and figures into `dir`.
pub fn emit_report(records: &[RunRecord], dir: &Path) -> Result<Aggregate> {
    let agg = aggregate(records)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_summary_csv(&agg, &dir.join(SUMMARY_CSV))?;
    write_baseline_csv(&agg, &dir.join(BASELINE_CSV))?;
    write_text(&dir.join(SUMMARY_MD), &render_markdown(&agg))?;
    write_figures(&agg, dir)?;
    Ok(agg)
}

#[derive(Serialize)]
struct BoundaryLine {
    sigma_u: f64,
    feature_set: FeatureSet,
    s: f64,
    n: usize,
    baseline_pr_auc: f64,
    d_pr_auc: f64,
    d_pr_auc_ci_lo: f64,
    d_pr_auc_ci_hi: f64,
    rel_d_pr_auc_pct: f64,
    d_cooc_path_mean: f64,
}

/// Writes `boundary.csv` and `fig_boundary_A.svg`.
pub fn write_boundary(rows: &[BoundaryRow], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(BOUNDARY_CSV);
    let mut w = create(&path)?;
    for r in rows {
        w.serialize(BoundaryLine {
            sigma_u: r.sigma_u,
            feature_set: r.feature_set,
            s: r.s,
            n: r.n,
            baseline_pr_auc: r.baseline_pr,
            d_pr_auc: r.pr.mean,
            d_pr_auc_ci_lo: r.pr.ci_lo,
            d_pr_auc_ci_hi: r.pr.ci_hi,
            rel_d_pr_auc_pct: r.rel_pr,
            d_cooc_path_mean: r.d_cooc,
        })?;
    }
    finish(w, &path)?;

    let mut chart = Chart {
        title: "DGP A boundary sweep under C3".into(),
        x_label: "sigma_u (nuisance scale)".into(),
        left_label: "relΔ pr_auc (%)".into(),
        right_label: "Δcooc_path_mean".into(),
        series: Vec::new(),
    };
    for (i, fs) in [FeatureSet::F0, FeatureSet::F1].into_iter().enumerate() {
        let pts: Vec<&BoundaryRow> = rows.iter().filter(|r| r.feature_set == fs).collect();
        if pts.is_empty() {
            continue;
        }
        chart.series.push(Series {
            name: format!("{fs} relΔ"),
            color: PALETTE[i],
            dashed: false,
            axis: Axis::Left,
            points: pts.iter().map(|r| (r.sigma_u, r.rel_pr)).collect(),
        });
        chart.series.push(Series {
            name: format!("{fs} Δcooc"),
            color: PALETTE[i],
            dashed: true,
            axis: Axis::Right,
            points: pts.iter().map(|r| (r.sigma_u, r.d_cooc)).collect(),
        });
    }
    write_text(&dir.join("fig_boundary_A.svg"), &chart.render())
}
