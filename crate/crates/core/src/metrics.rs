//! Ranking metrics, latent alignment and paired-delta intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Critical value of the normal-approximation 95% interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankingMetrics {
    pub pr_auc: f64,
    pub roc_auc: f64,
    pub latent_corr: f64,
}

impl RankingMetrics {
    /// PR-AUC and ROC-AUC of `scores` against `labels`, plus the Pearson
    /// correlation of the same scores with the latent signal.
    pub fn evaluate(scores: &[f64], labels: &[u8], latent: &[f64]) -> Result<Self> {
        Ok(Self {
            pr_auc: pr_auc(scores, labels)?,
            roc_auc: roc_auc(scores, labels)?,
            latent_corr: latent_corr(scores, latent)?,
        })
    }
}

fn class_counts(scores: &[f64], labels: &[u8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("NaN score".into()));
    }
    let pos = labels.iter().filter(|&&y| y == 1).count();
    let neg = labels.iter().filter(|&&y| y == 0).count();
    if pos + neg != labels.len() {
        return Err(Error::InvalidInput("labels must be 0 or 1".into()));
    }
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    Ok((pos, neg))
}

/// Indices sorted by descending score, grouped into blocks of equal score.
fn tied_blocks(scores: &[f64]) -> (Vec<usize>, Vec<std::ops::Range<usize>>) {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=order.len() {
        if k == order.len() || scores[order[k]] != scores[order[start]] {
            blocks.push(start..k);
            start = k;
        }
    }
    (order, blocks)
}

/// Average precision. Positives inside a block of tied scores all receive
/// the precision measured at the end of that block.
pub fn pr_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    let (pos, _) = class_counts(scores, labels)?;
    let (order, blocks) = tied_blocks(scores);
    let mut tp = 0usize;
    let mut sum = 0.0;
    for block in blocks {
        let seen = block.end;
        let block_pos = order[block].iter().filter(|&&i| labels[i] == 1).count();
        tp += block_pos;
        sum += block_pos as f64 * tp as f64 / seen as f64;
    }
    Ok(sum / pos as f64)
}

/// Mann-Whitney AUC with half credit for ties.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    let (pos, neg) = class_counts(scores, labels)?;
    let (order, blocks) = tied_blocks(scores);
    // Walk from the highest score down, counting negatives strictly below.
    let mut neg_above = 0usize;
    let mut credit = 0.0;
    for block in blocks {
        let members = &order[block];
        let p = members.iter().filter(|&&i| labels[i] == 1).count();
        let n = members.len() - p;
        let neg_below = neg - neg_above - n;
        credit += p as f64 * (neg_below as f64 + 0.5 * n as f64);
        neg_above += n;
    }
    Ok(credit / (pos as f64 * neg as f64))
}

/// Pearson correlation between model scores and the latent signal.
pub fn latent_corr(scores: &[f64], latent: &[f64]) -> Result<f64> {
    if scores.len() != latent.len() {
        return Err(Error::InvalidInput(format!(
            "{} scores for {} latent values",
            scores.len(),
            latent.len()
        )));
    }
    if scores.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: scores.len(),
        });
    }
    let n = scores.len() as f64;
    let mx = scores.iter().sum::<f64>() / n;
    let my = latent.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in scores.iter().zip(latent) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("scores"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("latent"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Paired per-seed differences summarized with a normal 95% interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedDeltaSet {
    pub deltas: Vec<f64>,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation, ddof = 1.
    pub sd: f64,
    pub se: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl PairedDeltaSet {
    pub fn excludes_zero(&self) -> bool {
        self.ci_hi < 0.0 || self.ci_lo > 0.0
    }
}

pub fn paired_delta_ci(deltas: &[f64]) -> Result<PairedDeltaSet> {
    let n = deltas.len();
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    let mean = deltas.iter().sum::<f64>() / n as f64;
    let ss: f64 = deltas.iter().map(|d| (d - mean) * (d - mean)).sum();
    let sd = (ss / (n - 1) as f64).sqrt();
    let se = sd / (n as f64).sqrt();
    Ok(PairedDeltaSet {
        deltas: deltas.to_vec(),
        n,
        mean,
        sd,
        se,
        ci_lo: mean - Z_95 * se,
        ci_hi: mean + Z_95 * se,
    })
}

/// Percent change of a mean delta relative to the baseline mean.
pub fn relative_delta(delta_mean: f64, baseline_mean: f64) -> Result<f64> {
    if baseline_mean == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(100.0 * delta_mean / baseline_mean)
}
