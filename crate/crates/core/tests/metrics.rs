mod common;

use common::checks::{assert_all, metric_oracles};
use common::{brute_pr_auc, brute_roc_auc};
use maskboost::metrics::{paired_delta_ci, pr_auc, relative_delta, roc_auc};
use proptest::prelude::*;

#[test]
fn metrics_match_brute_force() {
    assert_all(&metric_oracles());
}

#[test]
fn relative_delta_examples() {
    assert!((relative_delta(-0.0897, 0.1679).unwrap() + 53.4).abs() < 0.05);
    assert_eq!(relative_delta(0.0, 0.3).unwrap(), 0.0);
    assert!((relative_delta(-0.010, 0.1679).unwrap() + 5.96).abs() < 0.005);
}

#[test]
fn interval_from_two_deltas() {
    let ci = paired_delta_ci(&[0.01, 0.03]).unwrap();
    let half = 1.96 * (0.0002f64).sqrt() / 2f64.sqrt();
    assert!((ci.mean - 0.02).abs() < 1e-15);
    assert!((ci.ci_lo - (0.02 - half)).abs() < 1e-15);
    assert!((ci.ci_hi - (0.02 + half)).abs() < 1e-15);
}

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    (2usize..80).prop_flat_map(|n| {
        (
            prop::collection::vec(
                prop_oneof![(-5i32..5).prop_map(f64::from), -10.0..10.0f64],
                n,
            ),
            prop::collection::vec(0u8..2, n),
        )
            .prop_filter("both classes", |(_, y)| y.contains(&0) && y.contains(&1))
    })
}

proptest! {
    #[test]
    fn invariant_under_increasing_transform((s, y) in instance()) {
        let t: Vec<f64> = s.iter().map(|v| (v / 3.0).exp() * 7.0 - 2.0).collect();
        prop_assert!((pr_auc(&s, &y).unwrap() - pr_auc(&t, &y).unwrap()).abs() < 1e-12);
        prop_assert!((roc_auc(&s, &y).unwrap() - roc_auc(&t, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn roc_of_negated_scores_is_complement((s, y) in instance()) {
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        prop_assert!((roc_auc(&s, &y).unwrap() + roc_auc(&neg, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_reference((s, y) in instance()) {
        prop_assert!((pr_auc(&s, &y).unwrap() - brute_pr_auc(&s, &y)).abs() < 1e-12);
        prop_assert!((roc_auc(&s, &y).unwrap() - brute_roc_auc(&s, &y)).abs() < 1e-12);
    }
}
