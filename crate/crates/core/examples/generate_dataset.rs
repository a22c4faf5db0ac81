//! Draw one replicate of each process and show what the primitives carry.

use maskboost::metrics::roc_auc;
use maskboost::synth::{
    calibrated, draw_splits, Dgp, DgpAParams, DgpBParams, DgpParams, DistractorParams, FeatureSet,
    SplitSizes,
};
use maskboost::ColumnRole;

fn main() -> maskboost::Result<()> {
    let sizes = SplitSizes::default();
    let distractors = DistractorParams::default();
    for (dgp, params) in [
        (Dgp::A, DgpParams::A(DgpAParams::default())),
        (Dgp::B, DgpParams::B(DgpBParams::default())),
    ] {
        let params = calibrated(&params, sizes.test_prevalence, 1)?;
        let splits = draw_splits(&params, &distractors, &sizes, 42)?.assemble(FeatureSet::F1)?;
        let test = &splits.test;
        let x = &test.features;
        let col = |role| x.column(x.role_index(role).unwrap());
        let positives = test.labels.iter().filter(|&&y| y == 1).count();
        println!(
            "{dgp}: {} columns, train prevalence {:.4}, test positives {positives}/{}",
            x.n_cols(),
            splits.train.prevalence(),
            x.n_rows()
        );
        for (name, role) in [
            ("primitive a", ColumnRole::PrimitiveA),
            ("primitive b", ColumnRole::PrimitiveB),
            ("log ratio", ColumnRole::EngineeredRatio),
        ] {
            println!(
                "  test roc_auc of {name:<12} {:.4}",
                roc_auc(col(role), &test.labels)?
            );
        }
        println!(
            "  test roc_auc of latent V     {:.4}",
            roc_auc(&test.latent_v, &test.labels)?
        );
    }
    Ok(())
}
