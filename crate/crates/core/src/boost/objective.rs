//! Second-order logistic objective and the structure-score formulas.

/// Gradient and hessian of the logistic loss for one row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GradPair {
    pub grad: f64,
    pub hess: f64,
}

/// Smallest hessian handed to the tree builder; keeps `h > 0` when the
/// sigmoid saturates.
const MIN_HESS: f64 = 1e-16;

pub fn sigmoid(margin: f64) -> f64 {
    if margin >= 0.0 {
        1.0 / (1.0 + (-margin).exp())
    } else {
        let e = margin.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn logistic_grad_hess(margin: f64, label: u8) -> GradPair {
    let p = sigmoid(margin);
    GradPair {
        grad: p - f64::from(label),
        hess: (p * (1.0 - p)).max(MIN_HESS),
    }
}

/// Negative log-likelihood of one row.
pub fn logistic_loss(margin: f64, label: u8) -> f64 {
    if label == 1 {
        softplus(-margin)
    } else {
        softplus(margin)
    }
}

pub fn mean_logistic_loss(margins: &[f64], labels: &[u8]) -> f64 {
    let total: f64 = margins
        .iter()
        .zip(labels)
        .map(|(&m, &y)| logistic_loss(m, y))
        .sum();
    total / margins.len() as f64
}

fn score(g: f64, h: f64, reg_lambda: f64) -> f64 {
    let denom = h + reg_lambda;
    if denom > 0.0 {
        g * g / denom
    } else {
        0.0
    }
}

/// Loss reduction of splitting a node into the given children, minus `gamma`.
pub fn split_gain(
    g_left: f64,
    h_left: f64,
    g_right: f64,
    h_right: f64,
    reg_lambda: f64,
    gamma: f64,
) -> f64 {
    0.5 * (score(g_left, h_left, reg_lambda) + score(g_right, h_right, reg_lambda)
        - score(g_left + g_right, h_left + h_right, reg_lambda))
        - gamma
}

pub fn leaf_weight(g: f64, h: f64, reg_lambda: f64) -> f64 {
    let denom = h + reg_lambda;
    if denom > 0.0 {
        -g / denom
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grad_hess_examples() {
        assert_eq!(
            logistic_grad_hess(0.0, 1),
            GradPair {
                grad: -0.5,
                hess: 0.25
            }
        );
        assert_eq!(
            logistic_grad_hess(0.0, 0),
            GradPair {
                grad: 0.5,
                hess: 0.25
            }
        );
        let gp = logistic_grad_hess(3f64.ln(), 1);
        assert!((gp.grad + 0.25).abs() < 1e-15);
        assert!((gp.hess - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn grad_hess_saturates() {
        for m in [-1e4, -800.0, 800.0, 1e4] {
            let gp = logistic_grad_hess(m, 1);
            assert!(gp.grad.is_finite());
            assert!(gp.hess > 0.0 && gp.hess <= 0.25);
        }
    }

    #[test]
    fn gain_examples() {
        assert_eq!(split_gain(-2.0, 1.0, 2.0, 1.0, 1.0, 0.0), 2.0);
        assert_eq!(split_gain(-2.0, 1.0, 2.0, 1.0, 1.0, 3.0), -1.0);
        assert_eq!(split_gain(1.7, 3.0, 0.0, 0.0, 1.0, 0.0), 0.0);
        // zero hessian and zero lambda on a side contributes nothing
        assert_eq!(split_gain(0.0, 0.0, 0.0, 0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn leaf_weight_examples() {
        assert_eq!(leaf_weight(1.0, 1.0, 1.0), -0.5);
        assert_eq!(leaf_weight(0.0, 2.5, 1.0), 0.0);
        assert_eq!(leaf_weight(-3.0, 2.0, 1.0), 1.0);
        assert_eq!(leaf_weight(4.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn loss_matches_naive_form() {
        for &m in &[-3.0, -0.2, 0.0, 0.7, 4.0] {
            let p = 1.0 / (1.0 + (-m as f64).exp());
            assert!((logistic_loss(m, 1) + p.ln()).abs() < 1e-12);
            assert!((logistic_loss(m, 0) + (1.0 - p).ln()).abs() < 1e-12);
        }
    }
}
