//! Cancellation-style synthetic data: a continuous log-ratio process (A)
//! and a count-plus-exposure process (B), with nuisance-correlated
//! distractors and calibrated label prevalence.

mod calibrate;
mod dataset;
mod dgp;
mod distractors;
mod params;

pub use calibrate::{calibrate_intercept, MIN_CALIBRATION_DRAWS};
pub use dataset::{
    assemble_dataset, draw_splits, make_splits, write_csv, DrawnSplit, GeneratedDataset, Split,
    SplitDraws, Splits,
};
pub use dgp::{sample_dgp_a, sample_dgp_b, sample_negbin, DgpADraws, DgpBDraws, RawDraws};
pub use distractors::make_distractors;
pub use params::{
    Dgp, DgpAParams, DgpBParams, DgpParams, DistractorParams, FeatureSet, SplitSizes,
};

use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::rng::stream;

/// Fills in the label intercept so that the population prevalence matches
/// `target_pi`, unless one is already set. Uses `MIN_CALIBRATION_DRAWS`
/// latent draws from the stream labelled `calibrate` under `seed`.
pub fn calibrated(params: &DgpParams, target_pi: f64, seed: u64) -> Result<DgpParams> {
    if params.intercept().is_some() {
        return Ok(params.clone());
    }
    params.validate()?;
    let sigma_v = params.sigma_v();
    let mut rng = stream(seed, &["calibrate"]);
    let c = calibrate_intercept(
        params.beta(),
        |r| sigma_v * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, r),
        target_pi,
        MIN_CALIBRATION_DRAWS,
        &mut rng,
    )?;
    Ok(params.with_intercept(c))
}
