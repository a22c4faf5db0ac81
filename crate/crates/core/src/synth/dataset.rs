use std::fmt;
use std::io::Write;

use super::dgp::RawDraws;
use super::distractors::make_distractors;
use super::params::{DgpParams, DistractorParams, FeatureSet, SplitSizes};
use crate::data::{ColumnRole, FeatureMatrix};
use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        })
    }
}

/// One split of a benchmark dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedDataset {
    pub features: FeatureMatrix,
    pub labels: Vec<u8>,
    /// Label-carrying latent, held out of the features.
    pub latent_v: Vec<f64>,
    pub split: Split,
}

impl GeneratedDataset {
    pub fn prevalence(&self) -> f64 {
        self.labels.iter().filter(|&&y| y == 1).count() as f64 / self.labels.len() as f64
    }
}

/// Raw draws plus their distractor columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawnSplit {
    pub draws: RawDraws,
    pub distractors: Vec<Vec<f64>>,
}

impl DrawnSplit {
    fn select(&self, rows: &[usize]) -> Self {
        Self {
            draws: self.draws.select(rows),
            distractors: self
                .distractors
                .iter()
                .map(|c| rows.iter().map(|&i| c[i]).collect())
                .collect(),
        }
    }

    fn append(&mut self, other: DrawnSplit) {
        let d = &mut self.draws;
        let o = other.draws;
        d.primitive_a.extend(o.primitive_a);
        d.primitive_b.extend(o.primitive_b);
        d.ratio.extend(o.ratio);
        d.nuisance_std.extend(o.nuisance_std);
        d.latent_v.extend(o.latent_v);
        d.labels.extend(o.labels);
        for (col, extra) in self.distractors.iter_mut().zip(other.distractors) {
            col.extend(extra);
        }
    }

    pub fn assemble(&self, feature_set: FeatureSet, split: Split) -> Result<GeneratedDataset> {
        assemble_dataset(&self.draws, &self.distractors, feature_set, split)
    }
}

/// Feature table for one split: `[primitive_a, primitive_b, distractors...]`,
/// with the engineered ratio appended last under `F1`.
pub fn assemble_dataset(
    draws: &RawDraws,
    distractors: &[Vec<f64>],
    feature_set: FeatureSet,
    split: Split,
) -> Result<GeneratedDataset> {
    let n = draws.len();
    let lens = [
        draws.primitive_a.len(),
        draws.primitive_b.len(),
        draws.ratio.len(),
        draws.latent_v.len(),
    ];
    if lens.iter().any(|&l| l != n) || distractors.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidInput(format!(
            "row-count mismatch while assembling {n}-row dataset"
        )));
    }
    let [name_a, name_b, name_r] = draws.names;
    let mut names = vec![name_a.to_string(), name_b.to_string()];
    let mut roles = vec![ColumnRole::PrimitiveA, ColumnRole::PrimitiveB];
    let mut columns = vec![draws.primitive_a.clone(), draws.primitive_b.clone()];
    for (j, col) in distractors.iter().enumerate() {
        names.push(format!("noise_{j:03}"));
        roles.push(ColumnRole::Distractor);
        columns.push(col.clone());
    }
    if feature_set == FeatureSet::F1 {
        names.push(name_r.to_string());
        roles.push(ColumnRole::EngineeredRatio);
        columns.push(draws.ratio.clone());
    }
    let features = FeatureMatrix::new(names, roles, columns)?;
    features.check_primitive_roles()?;
    Ok(GeneratedDataset {
        features,
        labels: draws.labels.clone(),
        latent_v: draws.latent_v.clone(),
        split,
    })
}

fn draw<R: rand::Rng + ?Sized>(
    params: &DgpParams,
    distractors: &DistractorParams,
    n: usize,
    rng: &mut R,
) -> DrawnSplit {
    let draws = params.sample(n, rng);
    let cols = make_distractors(&draws.nuisance_std, distractors, rng);
    DrawnSplit {
        draws,
        distractors: cols,
    }
}

/// The three raw splits behind a dataset, shared by both feature sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDraws {
    pub train: DrawnSplit,
    pub valid: DrawnSplit,
    pub test: DrawnSplit,
}

/// Draws train, validation and test sets from independent streams derived
/// from `seed`. The test set is filled by stratified rejection: candidate
/// rows are drawn in batches and accepted in order until it holds exactly
/// `round(test_prevalence * test)` positives.
pub fn draw_splits(
    params: &DgpParams,
    distractors: &DistractorParams,
    sizes: &SplitSizes,
    seed: u64,
) -> Result<SplitDraws> {
    params.validate()?;
    distractors.validate()?;
    sizes.validate()?;
    if params.intercept().is_none() {
        return Err(Error::InvalidInput(
            "label intercept must be calibrated before drawing splits".into(),
        ));
    }

    let train = draw(
        params,
        distractors,
        sizes.train,
        &mut stream(seed, &["train"]),
    );
    let valid = draw(
        params,
        distractors,
        sizes.valid,
        &mut stream(seed, &["valid"]),
    );

    let want_pos = sizes.test_positives();
    let want_neg = sizes.test - want_pos;
    let mut rng = stream(seed, &["test"]);
    let mut test: Option<DrawnSplit> = None;
    let (mut pos, mut neg) = (0, 0);
    let mut batches = 0;
    while pos < want_pos || neg < want_neg {
        batches += 1;
        if batches > 10_000 {
            return Err(Error::InvalidInput(
                "stratified test sampling is not making progress".into(),
            ));
        }
        let batch = draw(params, distractors, sizes.test, &mut rng);
        let mut keep = Vec::new();
        for (i, &y) in batch.draws.labels.iter().enumerate() {
            if y == 1 && pos < want_pos {
                pos += 1;
                keep.push(i);
            } else if y == 0 && neg < want_neg {
                neg += 1;
                keep.push(i);
            }
        }
        let chosen = batch.select(&keep);
        match test.as_mut() {
            None => test = Some(chosen),
            Some(t) => t.append(chosen),
        }
    }

    Ok(SplitDraws {
        train,
        valid,
        test: test.expect("at least one batch"),
    })
}

/// Train, validation and test datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct Splits {
    pub train: GeneratedDataset,
    pub valid: GeneratedDataset,
    pub test: GeneratedDataset,
}

impl SplitDraws {
    pub fn assemble(&self, feature_set: FeatureSet) -> Result<Splits> {
        Ok(Splits {
            train: self.train.assemble(feature_set, Split::Train)?,
            valid: self.valid.assemble(feature_set, Split::Valid)?,
            test: self.test.assemble(feature_set, Split::Test)?,
        })
    }
}

pub fn make_splits(
    params: &DgpParams,
    distractors: &DistractorParams,
    sizes: &SplitSizes,
    feature_set: FeatureSet,
    seed: u64,
) -> Result<Splits> {
    draw_splits(params, distractors, sizes, seed)?.assemble(feature_set)
}

/// Columnar CSV: feature columns, then `label`, `latent_v` and `split`.
pub fn write_csv<W: Write>(datasets: &[&GeneratedDataset], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = datasets.first() else {
        return Ok(());
    };
    let mut header: Vec<String> = first.features.names().to_vec();
    header.extend(["label", "latent_v", "split"].map(String::from));
    w.write_record(&header)?;
    for ds in datasets {
        first.features.check_same_schema(&ds.features)?;
        let split = ds.split.to_string();
        for r in 0..ds.features.n_rows() {
            let mut rec: Vec<String> = (0..ds.features.n_cols())
                .map(|c| ds.features.value(r, c).to_string())
                .collect();
            rec.push(ds.labels[r].to_string());
            rec.push(ds.latent_v[r].to_string());
            rec.push(split.clone());
            w.write_record(&rec)?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
