use rand::Rng;

use crate::boost::sigmoid;
use crate::error::{Error, Result};

/// Fewest latent draws accepted for calibration.
pub const MIN_CALIBRATION_DRAWS: usize = 1_000_000;
const MAX_STEPS: usize = 200;
const ACCEPT_TOL: f64 = 1e-3;

/// Intercept `c` such that the mean of `sigmoid(beta * v + c)` over the
/// sampled latents hits `target_pi`.
///
/// The latents are drawn once and reused, so the mean is a deterministic,
/// monotone function of `c` and plain bisection applies.
pub fn calibrate_intercept<R, F>(
    beta: f64,
    mut latent: F,
    target_pi: f64,
    n_draws: usize,
    rng: &mut R,
) -> Result<f64>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> f64,
{
    if !(target_pi > 0.0 && target_pi < 1.0) {
        return Err(Error::InvalidInput(format!(
            "target prevalence must be in (0, 1), got {target_pi}"
        )));
    }
    if n_draws < MIN_CALIBRATION_DRAWS {
        return Err(Error::InvalidInput(format!(
            "calibration needs at least {MIN_CALIBRATION_DRAWS} draws, got {n_draws}"
        )));
    }
    let scaled: Vec<f64> = (0..n_draws).map(|_| beta * latent(rng)).collect();
    let prevalence =
        |c: f64| scaled.iter().map(|&x| sigmoid(x + c)).sum::<f64>() / scaled.len() as f64;

    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    let mut mid = 0.0;
    let mut last = f64::NAN;
    for _ in 0..MAX_STEPS {
        mid = 0.5 * (lo + hi);
        last = prevalence(mid);
        if (last - target_pi).abs() < 1e-9 || hi - lo < 1e-12 {
            break;
        }
        if last < target_pi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (last - target_pi).abs() > ACCEPT_TOL {
        return Err(Error::CalibrationFailed {
            steps: MAX_STEPS,
            last,
        });
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_from_seed;

    #[test]
    fn no_latent_dependence_gives_logit() {
        let mut rng = stream_from_seed(0);
        let c = calibrate_intercept(0.0, |_| 0.0, 0.05, MIN_CALIBRATION_DRAWS, &mut rng).unwrap();
        assert!((c - (0.05f64 / 0.95).ln()).abs() < 1e-6);
        assert!((c - -2.9444).abs() < 1e-4);
        let c = calibrate_intercept(0.0, |_| 0.0, 0.5, MIN_CALIBRATION_DRAWS, &mut rng).unwrap();
        assert!(c.abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = stream_from_seed(0);
        assert!(calibrate_intercept(1.0, |_| 0.0, 1.0, MIN_CALIBRATION_DRAWS, &mut rng).is_err());
        assert!(calibrate_intercept(1.0, |_| 0.0, 0.05, 10, &mut rng).is_err());
    }

    #[test]
    fn unreachable_target_fails() {
        // A latent of 1e6 with beta 1 saturates the sigmoid for every bracketed c.
        let mut rng = stream_from_seed(0);
        let err =
            calibrate_intercept(1.0, |_| 1e6, 0.05, MIN_CALIBRATION_DRAWS, &mut rng).unwrap_err();
        assert!(matches!(err, Error::CalibrationFailed { .. }));
    }
}
