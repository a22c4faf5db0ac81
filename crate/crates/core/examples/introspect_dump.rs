//! Path co-usage of the two primitives, with and without node masking.

use maskboost::harness::{Arm, ArmId, CellKey, Experiment, HarnessConfig};
use maskboost::introspect::summarize;
use maskboost::synth::{Dgp, FeatureSet, SplitSizes};

fn main() -> maskboost::Result<()> {
    let mut cfg = HarnessConfig::default();
    cfg.sizes = SplitSizes {
        train: 8000,
        valid: 3000,
        test: 4000,
        test_prevalence: 0.05,
    };
    let exp = Experiment::new(cfg)?;
    for arm in [Arm::baseline(), Arm::new(ArmId::C3, 0.4)] {
        let key = CellKey::new(Dgp::A, FeatureSet::F0, arm, 0);
        let (model, rec) = exp.fit_cell(&key)?;
        let dump = model.to_dump();
        let s = summarize(&dump, dump.feature_index("a")?, dump.feature_index("b")?)?;
        println!(
            "{}: pr_auc {:.4}, trees {}, mean depth {:.2}, cooc per-tree {:.3}, pooled {:.3}",
            key.arm(),
            rec.metrics.pr_auc,
            s.n_trees,
            s.mean_depth,
            s.cooc_path_mean,
            s.cooc_pooled
        );
    }
    Ok(())
}
