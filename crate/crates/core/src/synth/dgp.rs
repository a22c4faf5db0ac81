//! Row-wise samplers for the two cancellation processes.
//!
//! Each row consumes the stream in a fixed order, so a prefix of a larger
//! draw equals a smaller draw from the same stream.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

use super::params::{DgpAParams, DgpBParams, DgpParams};
use crate::boost::sigmoid;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u8 {
    u8::from(rng.random::<f64>() < p)
}

/// Raw draws of the continuous process.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DgpADraws {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub log_a: Vec<f64>,
    pub log_b: Vec<f64>,
    /// `log_a - log_b`.
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<u8>,
}

/// Raw draws of the count process.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DgpBDraws {
    pub count_a: Vec<f64>,
    pub count_b: Vec<f64>,
    /// `ln(A + s0) - ln(B + s0)`.
    pub r: Vec<f64>,
    pub exposure: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<u8>,
}

pub fn sample_dgp_a<R: Rng + ?Sized>(params: &DgpAParams, n: usize, rng: &mut R) -> DgpADraws {
    let c = params.intercept.unwrap_or(0.0);
    let mut d = DgpADraws::default();
    for _ in 0..n {
        let u = params.sigma_u * normal(rng);
        let v = params.sigma_v * normal(rng);
        let log_a = u + v + params.sigma_eps * normal(rng);
        let log_b = u - v + params.sigma_eps * normal(rng);
        let y = bernoulli(sigmoid(params.beta * v + c), rng);
        d.a.push(log_a.exp());
        d.b.push(log_b.exp());
        d.log_a.push(log_a);
        d.log_b.push(log_b);
        d.r.push(log_a - log_b);
        d.u.push(u);
        d.v.push(v);
        d.y.push(y);
    }
    d
}

/// Gamma-Poisson mixture with the given mean and dispersion `phi`:
/// mean `mean`, variance `mean + mean^2 / phi`.
pub fn sample_negbin<R: Rng + ?Sized>(mean: f64, phi: f64, rng: &mut R) -> f64 {
    let rate = Gamma::new(phi, mean / phi)
        .expect("phi and mean are positive and finite")
        .sample(rng);
    if rate <= 0.0 {
        return 0.0;
    }
    Poisson::new(rate)
        .expect("positive finite rate")
        .sample(rng)
}

pub fn sample_dgp_b<R: Rng + ?Sized>(params: &DgpBParams, n: usize, rng: &mut R) -> DgpBDraws {
    let c = params.intercept.unwrap_or(0.0);
    let mut d = DgpBDraws::default();
    for _ in 0..n {
        let exposure = (params.mu_e + params.sigma_e * normal(rng)).exp();
        let v = params.sigma_v * normal(rng);
        let count_a = sample_negbin(exposure * v.exp(), params.phi, rng);
        let count_b = sample_negbin(exposure * (-v).exp(), params.phi, rng);
        let y = bernoulli(sigmoid(params.beta * v + c), rng);
        d.count_a.push(count_a);
        d.count_b.push(count_b);
        d.r.push((count_a + params.s0).ln() - (count_b + params.s0).ln());
        d.exposure.push(exposure);
        d.v.push(v);
        d.y.push(y);
    }
    d
}

/// Process-agnostic view used to assemble feature tables.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDraws {
    pub names: [&'static str; 3],
    pub primitive_a: Vec<f64>,
    pub primitive_b: Vec<f64>,
    pub ratio: Vec<f64>,
    /// Nuisance latent standardized with its population mean and scale.
    pub nuisance_std: Vec<f64>,
    pub latent_v: Vec<f64>,
    pub labels: Vec<u8>,
}

impl RawDraws {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Keeps only the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Self {
        let pick = |v: &[f64]| rows.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self {
            names: self.names,
            primitive_a: pick(&self.primitive_a),
            primitive_b: pick(&self.primitive_b),
            ratio: pick(&self.ratio),
            nuisance_std: pick(&self.nuisance_std),
            latent_v: pick(&self.latent_v),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

impl DgpADraws {
    pub fn into_raw(self, params: &DgpAParams) -> RawDraws {
        RawDraws {
            names: ["a", "b", "r"],
            // Without a shared factor the distractors are pure noise.
            nuisance_std: if params.sigma_u > 0.0 {
                self.u.iter().map(|u| u / params.sigma_u).collect()
            } else {
                vec![0.0; self.u.len()]
            },
            primitive_a: self.a,
            primitive_b: self.b,
            ratio: self.r,
            latent_v: self.v,
            labels: self.y,
        }
    }
}

impl DgpBDraws {
    pub fn into_raw(self, params: &DgpBParams) -> RawDraws {
        RawDraws {
            names: ["A", "B", "r"],
            nuisance_std: self
                .exposure
                .iter()
                .map(|e| (e.ln() - params.mu_e) / params.sigma_e)
                .collect(),
            primitive_a: self.count_a,
            primitive_b: self.count_b,
            ratio: self.r,
            latent_v: self.v,
            labels: self.y,
        }
    }
}

impl DgpParams {
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> RawDraws {
        match self {
            DgpParams::A(p) => sample_dgp_a(p, n, rng).into_raw(p),
            DgpParams::B(p) => sample_dgp_b(p, n, rng).into_raw(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_from_seed;

    #[test]
    fn noiseless_ratio_is_twice_v() {
        let p = DgpAParams {
            sigma_eps: 0.0,
            ..Default::default()
        };
        let d = sample_dgp_a(&p, 1000, &mut stream_from_seed(3));
        for (r, v) in d.r.iter().zip(&d.v) {
            assert!((r - 2.0 * v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn ratio_identity_is_exact() {
        let p = DgpAParams::default();
        let d = sample_dgp_a(&p, 2000, &mut stream_from_seed(4));
        assert!(d
            .r
            .iter()
            .zip(d.log_a.iter().zip(&d.log_b))
            .all(|(r, (a, b))| r - (a - b) == 0.0));
        assert!(d.a.iter().chain(&d.b).all(|&x| x > 0.0));
    }

    #[test]
    fn prefix_consistency() {
        let p = DgpBParams::default();
        let long = sample_dgp_b(&p, 50, &mut stream_from_seed(5));
        let short = sample_dgp_b(&p, 20, &mut stream_from_seed(5));
        assert_eq!(&long.count_a[..20], &short.count_a[..]);
        assert_eq!(&long.y[..20], &short.y[..]);
    }

    #[test]
    fn counts_are_nonnegative_integers() {
        let d = sample_dgp_b(&DgpBParams::default(), 500, &mut stream_from_seed(6));
        assert!(d
            .count_a
            .iter()
            .chain(&d.count_b)
            .all(|&c| c >= 0.0 && c.fract() == 0.0));
        assert!(d.r.iter().all(|r| r.is_finite()));
    }

    #[test]
    fn select_keeps_order() {
        let p = DgpAParams::default();
        let raw = sample_dgp_a(&p, 5, &mut stream_from_seed(7)).into_raw(&p);
        let sub = raw.select(&[3, 0]);
        assert_eq!(
            sub.primitive_a,
            vec![raw.primitive_a[3], raw.primitive_a[0]]
        );
        assert_eq!(sub.len(), 2);
    }
}
