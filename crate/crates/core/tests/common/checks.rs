//! Named pass/fail checks grouped by acceptance criterion. Module tests
//! assert every check; the acceptance target prints them.

use maskboost::boost::{sample_columns, sigmoid};
use maskboost::dump::{DumpNode, DumpTree, ModelDump};
use maskboost::introspect::{cooc_path_mean, node_pair_availability, path_availability};
use maskboost::metrics::{paired_delta_ci, pr_auc, roc_auc};
use maskboost::rng::stream_from_seed;
use maskboost::synth::{
    calibrate_intercept, draw_splits, make_distractors, sample_dgp_a, sample_dgp_b, sample_negbin,
    DgpAParams, DgpBParams, DgpParams, DistractorParams, FeatureSet, SplitSizes,
};
use maskboost::ColumnRole;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{brute_ci, brute_pr_auc, brute_roc_auc};

#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ok,
            detail: detail.into(),
        }
    }
}

/// Panics listing every failed check.
pub fn assert_all(checks: &[Check]) {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    assert!(failed.is_empty(), "failed checks:\n{}", failed.join("\n"));
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn var(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

fn corr(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

fn as_f64(y: &[u8]) -> Vec<f64> {
    y.iter().map(|&v| f64::from(v)).collect()
}

/// Ranking metrics and paired intervals against brute-force references.
pub fn metric_oracles() -> Vec<Check> {
    let mut rng = stream_from_seed(2024);
    let mut worst_pr: f64 = 0.0;
    let mut worst_roc: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..200);
        let mut labels: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(0.3))).collect();
        labels[0] = 1;
        labels[1] = 0;
        labels.shuffle(&mut rng);
        let coarse = rng.random_bool(0.5);
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                let s: f64 = rng.random();
                if coarse {
                    (s * 5.0).floor()
                } else {
                    s
                }
            })
            .collect();
        worst_pr = worst_pr
            .max((pr_auc(&scores, &labels).unwrap() - brute_pr_auc(&scores, &labels)).abs());
        worst_roc = worst_roc
            .max((roc_auc(&scores, &labels).unwrap() - brute_roc_auc(&scores, &labels)).abs());
    }

    let mut worst_ci: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..30);
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(-0.2..0.1)).collect();
        let got = paired_delta_ci(&d).unwrap();
        let (m, lo, hi) = brute_ci(&d);
        worst_ci = worst_ci
            .max((got.mean - m).abs())
            .max((got.ci_lo - lo).abs())
            .max((got.ci_hi - hi).abs());
    }

    let trials = 2000;
    let n = 1000;
    let positives = 50;
    let mut labels: Vec<u8> = (0..n).map(|i| u8::from(i < positives)).collect();
    let mut total = 0.0;
    for _ in 0..trials {
        labels.shuffle(&mut rng);
        let scores: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        total += pr_auc(&scores, &labels).unwrap();
    }
    let random_pr = total / trials as f64;

    vec![
        Check::new(
            "pr_auc vs brute force (100 instances)",
            worst_pr <= 1e-12,
            format!("max |diff| {worst_pr:.2e}"),
        ),
        Check::new(
            "roc_auc vs brute force (100 instances)",
            worst_roc <= 1e-12,
            format!("max |diff| {worst_roc:.2e}"),
        ),
        Check::new(
            "paired_delta_ci vs textbook (100 vectors)",
            worst_ci <= 1e-12,
            format!("max |diff| {worst_ci:.2e}"),
        ),
        Check::new(
            "random-ranking PR-AUC averages the prevalence",
            (random_pr - 0.05).abs() <= 0.01,
            format!("mean {random_pr:.4} over {trials} trials, target 0.05 +/- 0.01"),
        ),
    ]
}

/// Masking simulations driven by the booster's own column sampler.
pub fn availability_simulation() -> Vec<Check> {
    let trials = 1_000_000;
    let mut rng = stream_from_seed(77);
    let mut out = Vec::new();

    // 10 candidates make s * p an integer, so each level keeps a column with probability exactly s.
    let cols: Vec<usize> = (0..10).collect();
    for s in [0.4, 0.8] {
        for levels in [1u32, 3, 6] {
            let hits = (0..trials)
                .filter(|_| (0..levels).any(|_| sample_columns(&cols, s, &mut rng).contains(&0)))
                .count();
            let mc = hits as f64 / trials as f64;
            let exact = path_availability(s, levels);
            out.push(Check::new(
                format!("path availability s={s} L={levels}"),
                (mc - exact).abs() <= 0.002,
                format!("simulated {mc:.4}, formula {exact:.4}"),
            ));
        }
    }

    let p = 122;
    let cols: Vec<usize> = (0..p).collect();
    for s in [0.4, 0.8] {
        let hits = (0..trials)
            .filter(|_| {
                let picked = sample_columns(&cols, s, &mut rng);
                picked.contains(&0) && picked.contains(&1)
            })
            .count();
        let mc = hits as f64 / trials as f64;
        let exact = node_pair_availability(s, p);
        out.push(Check::new(
            format!("node-pair availability s={s} p={p}"),
            (mc - exact).abs() <= 0.002,
            format!("simulated {mc:.4}, formula {exact:.4}"),
        ));
    }
    out
}

fn worked_tree(i: usize, j: usize) -> DumpTree {
    DumpTree {
        nodes: vec![
            DumpNode::split(0, i, 0.5, 8.0, 1, 2),
            DumpNode::split(1, j, 0.5, 4.0, 3, 4),
            DumpNode::leaf(2, 0.1, 4.0),
            DumpNode::leaf(3, -0.2, 2.0),
            DumpNode::leaf(4, 0.3, 2.0),
        ],
    }
}

/// Hand-built dumps with known co-usage.
pub fn cooc_fixtures() -> Vec<Check> {
    let one = ModelDump::from_trees(3, vec![worked_tree(0, 1)]);
    let three = ModelDump::from_trees(
        3,
        vec![worked_tree(0, 1), worked_tree(0, 1), worked_tree(0, 1)],
    );
    let only_i = ModelDump::from_trees(3, vec![worked_tree(0, 2), worked_tree(0, 0)]);
    let both_everywhere = ModelDump::from_trees(
        3,
        vec![DumpTree {
            nodes: vec![
                DumpNode::split(0, 1, 0.0, 5.0, 1, 2),
                DumpNode::split(1, 0, 0.0, 2.0, 3, 4),
                DumpNode::split(2, 0, 1.0, 3.0, 5, 6),
                DumpNode::leaf(3, 0.0, 1.0),
                DumpNode::leaf(4, 0.0, 1.0),
                DumpNode::leaf(5, 0.0, 1.5),
                DumpNode::leaf(6, 0.0, 1.5),
            ],
        }],
    );
    let cases = [
        ("worked example", &one, 0.5),
        ("worked example tripled", &three, 0.5),
        ("second feature absent", &only_i, 0.0),
        ("both on every path", &both_everywhere, 1.0),
    ];
    cases
        .into_iter()
        .map(|(name, dump, want)| {
            let got = cooc_path_mean(dump, 0, 1).unwrap();
            Check::new(
                format!("cooc {name}"),
                got == want,
                format!("got {got}, want {want}"),
            )
        })
        .collect()
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Moment, correlation and prevalence properties of both processes, using
/// `a` and `b` as the default process parameters.
pub fn dgp_properties(
    a: &DgpAParams,
    b: &DgpBParams,
    distractors: &DistractorParams,
) -> Vec<Check> {
    let mut out = Vec::new();
    let n = 100_000;
    let mut rng = stream_from_seed(5150);

    // Noiseless ratio.
    let noiseless = DgpAParams {
        sigma_eps: 0.0,
        intercept: Some(0.0),
        ..a.clone()
    };
    let d = sample_dgp_a(&noiseless, 10_000, &mut rng);
    let worst =
        d.r.iter()
            .zip(&d.v)
            .map(|(r, v)| (r - 2.0 * v).abs())
            .fold(0.0, f64::max);
    out.push(Check::new(
        "A: sigma_eps = 0 gives r = 2V",
        worst <= 1e-12,
        format!("max |r - 2V| {worst:.1e}"),
    ));

    let pa = DgpAParams {
        intercept: Some(a.intercept.unwrap_or(-3.0)),
        ..a.clone()
    };
    let d = sample_dgp_a(&pa, n, &mut rng);
    let identity =
        d.r.iter()
            .zip(d.log_a.iter().zip(&d.log_b))
            .all(|(r, (la, lb))| *r == la - lb);
    out.push(Check::new(
        "A: r equals log a - log b exactly",
        identity,
        "",
    ));
    let se = (var(&d.r) / n as f64).sqrt();
    let mr = mean(&d.r);
    out.push(Check::new(
        "A: mean of r is 0",
        mr.abs() <= 3.0 * se,
        format!("mean {mr:.5}, 3 se {:.5}", 3.0 * se),
    ));
    let (su2, sv2, se2) = (a.sigma_u.powi(2), a.sigma_v.powi(2), a.sigma_eps.powi(2));
    let want = (su2 - sv2) / (su2 + sv2 + se2);
    let got = corr(&d.log_a, &d.log_b);
    out.push(Check::new(
        "A: corr(log a, log b) closed form",
        (got - want).abs() <= 0.01,
        format!("sample {got:.4}, closed form {want:.4}"),
    ));
    out.push(decile_check("A", &d.v, &d.y));
    let cu = corr(&as_f64(&d.y), &d.u);
    out.push(Check::new(
        "A: corr(y, U) vanishes",
        cu.abs() < 0.02,
        format!("{cu:.4}"),
    ));

    // Count process.
    let pb = DgpBParams {
        intercept: Some(b.intercept.unwrap_or(-3.0)),
        ..b.clone()
    };
    let d = sample_dgp_b(&pb, n, &mut rng);
    out.push(decile_check("B", &d.v, &d.y));
    let log_e: Vec<f64> = d.exposure.iter().map(|e| e.ln()).collect();
    let ce = corr(&as_f64(&d.y), &log_e);
    out.push(Check::new(
        "B: corr(y, log E) vanishes",
        ce.abs() < 0.02,
        format!("{ce:.4}"),
    ));
    let smoothing =
        d.r.iter()
            .zip(d.count_a.iter().zip(&d.count_b))
            .all(|(r, (ca, cb))| *r == (ca + b.s0).ln() - (cb + b.s0).ln());
    out.push(Check::new(
        "B: r uses the smoothed log ratio",
        smoothing,
        "",
    ));

    // V = 0 and fixed exposure: A and B share a distribution.
    let e = b.mu_e.exp();
    let ra: Vec<f64> = (0..n)
        .map(|_| {
            let ca = sample_negbin(e, b.phi, &mut rng);
            let cb = sample_negbin(e, b.phi, &mut rng);
            (ca + b.s0).ln() - (cb + b.s0).ln()
        })
        .collect();
    let (m, se) = (mean(&ra), (var(&ra) / n as f64).sqrt());
    out.push(Check::new(
        "B: symmetric counts give mean r = 0",
        m.abs() <= 3.0 * se,
        format!("mean {m:.5}, 3 se {:.5}", 3.0 * se),
    ));

    let (e, v) = (20.0, 0.3);
    let lambda = e * f64::exp(v);
    let counts: Vec<f64> = (0..n)
        .map(|_| sample_negbin(lambda, b.phi, &mut rng))
        .collect();
    let (m, s2) = (mean(&counts), var(&counts));
    let se = (s2 / n as f64).sqrt();
    out.push(Check::new(
        "B: NegBin mean",
        (m - lambda).abs() <= 3.0 * se,
        format!("mean {m:.3}, lambda {lambda:.3}, 3 se {:.3}", 3.0 * se),
    ));
    let want = lambda + lambda * lambda / b.phi;
    out.push(Check::new(
        "B: NegBin variance",
        (s2 / want - 1.0).abs() <= 0.05,
        format!("variance {s2:.2}, identity {want:.2}"),
    ));
    let big = 1_000_000;
    let counts: Vec<f64> = (0..big)
        .map(|_| sample_negbin(lambda, 1e6, &mut rng))
        .collect();
    let ratio = var(&counts) / mean(&counts);
    out.push(Check::new(
        "B: NegBin reduces to Poisson",
        (ratio - 1.0).abs() <= 0.05,
        format!("variance / mean {ratio:.4}"),
    ));

    // Distractors.
    let nuisance: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
    for rho in [0.0, 0.5] {
        let cols = make_distractors(&nuisance, &DistractorParams { p_noise: 3, rho }, &mut rng);
        let worst = cols
            .iter()
            .map(|c| (corr(c, &nuisance) - rho).abs())
            .fold(0.0, f64::max);
        out.push(Check::new(
            format!("distractor corr with nuisance at rho={rho}"),
            worst < 0.02,
            format!("max |corr - rho| {worst:.4}"),
        ));
    }

    // Calibration.
    let sample = |beta: f64, sigma: f64, target: f64, seed: u64| {
        calibrate_intercept(
            beta,
            |r| sigma * standard_normal(r),
            target,
            1_000_000,
            &mut stream_from_seed(seed),
        )
        .unwrap()
    };
    let c = sample(0.0, 1.0, 0.05, 1);
    out.push(Check::new(
        "calibration beta=0",
        (c - (0.05f64 / 0.95).ln()).abs() < 1e-6,
        format!("{c:.6}"),
    ));
    let c = sample(0.0, 1.0, 0.5, 2);
    out.push(Check::new(
        "calibration beta=0 target 0.5",
        c.abs() < 1e-6,
        format!("{c:.6}"),
    ));
    let c = sample(2.0, 1.0, 0.05, 3);
    let mut oracle_rng = stream_from_seed(4);
    let draws = 10_000_000;
    let prev = (0..draws)
        .map(|_| sigmoid(2.0 * standard_normal(&mut oracle_rng) + c))
        .sum::<f64>()
        / draws as f64;
    out.push(Check::new(
        "calibration beta=2 resimulated",
        (prev - 0.05).abs() <= 0.002,
        format!("intercept {c:.4}, prevalence {prev:.5}"),
    ));

    // Datasets at default sizes.
    for (name, params) in [
        ("A", DgpParams::A(a.clone())),
        ("B", DgpParams::B(b.clone())),
    ] {
        let params = maskboost::synth::calibrated(&params, 0.05, 99).unwrap();
        let sizes = SplitSizes::default();
        let draws = draw_splits(&params, distractors, &sizes, 17).unwrap();
        let again = draw_splits(&params, distractors, &sizes, 17).unwrap();
        let f0 = draws.assemble(FeatureSet::F0).unwrap();
        let f1 = draws.assemble(FeatureSet::F1).unwrap();
        let rows = (
            f0.train.features.n_rows(),
            f0.valid.features.n_rows(),
            f0.test.features.n_rows(),
        );
        out.push(Check::new(
            format!("{name}: split sizes"),
            rows == (25_000, 10_000, 10_000),
            format!("{rows:?}"),
        ));
        let positives = f0.test.labels.iter().filter(|&&y| y == 1).count();
        out.push(Check::new(
            format!("{name}: test positives"),
            positives == 500,
            format!("{positives}"),
        ));
        let (pt, pv) = (f0.train.prevalence(), f0.valid.prevalence());
        out.push(Check::new(
            format!("{name}: train/valid prevalence"),
            (pt - 0.05).abs() <= 0.01 && (pv - 0.05).abs() <= 0.01,
            format!("train {pt:.4}, valid {pv:.4}"),
        ));
        let cols = (f0.train.features.n_cols(), f1.train.features.n_cols());
        out.push(Check::new(
            format!("{name}: feature counts"),
            cols == (122, 123),
            format!("{cols:?}"),
        ));
        out.push(Check::new(
            format!("{name}: same seed, same data"),
            draws == again,
            "",
        ));
        if name == "A" {
            let x = &f1.train.features;
            let ia = x.role_index(ColumnRole::PrimitiveA).unwrap();
            let ib = x.role_index(ColumnRole::PrimitiveB).unwrap();
            let ir = x.role_index(ColumnRole::EngineeredRatio).unwrap();
            let worst = (0..x.n_rows())
                .map(|i| (x.value(i, ir) - (x.value(i, ia).ln() - x.value(i, ib).ln())).abs())
                .fold(0.0, f64::max);
            out.push(Check::new(
                "A: engineered column recomputes from primitives",
                worst <= 1e-12,
                format!("{worst:.1e}"),
            ));
        }
    }
    out
}

fn decile_check(name: &str, v: &[f64], y: &[u8]) -> Check {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let k = v.len() / 10;
    let rate =
        |rows: &[usize]| rows.iter().filter(|&&i| y[i] == 1).count() as f64 / rows.len() as f64;
    let (lo, hi) = (rate(&idx[..k]), rate(&idx[v.len() - k..]));
    let se = (lo * (1.0 - lo) / k as f64 + hi * (1.0 - hi) / k as f64).sqrt();
    Check::new(
        format!("{name}: top-decile V has more positives"),
        hi - lo > 5.0 * se,
        format!("top {hi:.4}, bottom {lo:.4}, 5 se {:.4}", 5.0 * se),
    )
}
