use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::params::DistractorParams;

/// Noise columns correlated with the nuisance latent.
///
/// Column `j` is `rho * nuisance_std + sqrt(1 - rho^2) * z_j` with fresh
/// standard normals `z_j`, so each column has correlation `rho` with the
/// (already standardized) nuisance and none with the label signal. The
/// stream is consumed column by column.
pub fn make_distractors<R: Rng + ?Sized>(
    nuisance_std: &[f64],
    params: &DistractorParams,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let rho = params.rho;
    let scale = (1.0 - rho * rho).sqrt();
    (0..params.p_noise)
        .map(|_| {
            nuisance_std
                .iter()
                .map(|&x| {
                    let z: f64 = StandardNormal.sample(rng);
                    rho * x + scale * z
                })
                .collect()
        })
        .collect()
}
