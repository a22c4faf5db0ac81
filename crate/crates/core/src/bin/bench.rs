use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use maskboost::harness::{
    aggregate_boundary, emit_report, read_results, write_boundary, write_results, write_run_info,
    write_timings, Arm, ArmId, CellKey, Experiment, HarnessConfig, RunInfo, RunRecord,
    RESULTS_FILE, RUN_INFO_FILE, SUMMARY_MD, TIMINGS_FILE,
};
use maskboost::introspect::{load_dump, summarize};
use maskboost::synth::{self, Dgp, FeatureSet, SplitSizes};
use maskboost::{Error, Result};

#[derive(Parser)]
#[command(
    name = "bench",
    version,
    about = "Column-subsampling experiments for boosted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full grid and write results, summary tables and figures.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild summary tables and figures from an existing results.csv.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Nuisance-strength sweep on DGP A.
    Boundary {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path co-usage of two features in a model dump, as one CSV row.
    Introspect {
        #[arg(long)]
        dump: PathBuf,
        #[arg(long)]
        feat_a: String,
        #[arg(long)]
        feat_b: String,
    },
    /// Train a single cell, print its metrics and optionally save the model.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "A")]
        dgp: Dgp,
        #[arg(long, default_value = "F0")]
        fs: FeatureSet,
        #[arg(long, default_value = "C0")]
        arm: ArmId,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 0)]
        seed: usize,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Write one replicate's train/valid/test rows as CSV.
    Export {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "A")]
        dgp: Dgp,
        #[arg(long, default_value = "F1")]
        fs: FeatureSet,
        #[arg(long, default_value_t = 0)]
        seed: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn mkdir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn progress(key: &CellKey, res: &Result<RunRecord>) {
    match res {
        Ok(r) => eprintln!(
            "{key}: pr_auc {:.4} roc_auc {:.4} iters {} ({:.1}s)",
            r.metrics.pr_auc, r.metrics.roc_auc, r.best_iteration, r.wall_time
        ),
        Err(e) => eprintln!("{key}: FAILED: {e}"),
    }
}

fn sweep(config: &Path, out: Option<PathBuf>) -> Result<ExitCode> {
    let cfg = HarnessConfig::load(config)?;
    let out = out.unwrap_or_else(|| cfg.out_dir.clone());
    mkdir(&out)?;
    let snapshot = cfg.to_toml()?;
    let start = Instant::now();
    let exp = Experiment::new(cfg)?;
    eprintln!("running {} cells", exp.config().grid().cells().len());
    let outcome = exp.run_grid(&progress);
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("grid finished in {elapsed:.1}s");

    fs::write(out.join("config.toml"), snapshot).map_err(|e| Error::Io {
        path: out.join("config.toml"),
        source: e,
    })?;
    write_results(&outcome.records, &out.join(RESULTS_FILE))?;
    write_timings(&outcome.records, &out.join(TIMINGS_FILE))?;
    let info = RunInfo {
        cells: outcome.records.len() + outcome.failures.len(),
        threads: rayon::current_num_threads(),
        elapsed_seconds: elapsed,
    };
    write_run_info(&info, &out.join(RUN_INFO_FILE))?;
    if !outcome.failures.is_empty() {
        for (key, msg) in &outcome.failures {
            eprintln!("failed: {key}: {msg}");
        }
        eprintln!(
            "{} cell(s) failed; partial results in {}",
            outcome.failures.len(),
            out.display()
        );
        return Ok(ExitCode::FAILURE);
    }
    emit_report(&outcome.records, &out)?;
    println!("{}", out.join(SUMMARY_MD).display());
    Ok(ExitCode::SUCCESS)
}

fn report(dir: &Path) -> Result<ExitCode> {
    let records = read_results(&dir.join(RESULTS_FILE))?;
    emit_report(&records, dir)?;
    println!("{}", dir.join(SUMMARY_MD).display());
    Ok(ExitCode::SUCCESS)
}

fn boundary(config: &Path, out: Option<PathBuf>) -> Result<ExitCode> {
    let cfg = HarnessConfig::load(config)?;
    let out = out.unwrap_or_else(|| cfg.out_dir.clone());
    let exp = Experiment::new(cfg)?;
    let records = exp.run_boundary(&progress)?;
    let rows = aggregate_boundary(&records)?;
    write_boundary(&rows, &out)?;
    for r in &rows {
        println!(
            "sigma_u {:<5} {} relΔPR {:>7.1}%  ΔPR {:.4} [{:.4}, {:.4}]",
            r.sigma_u, r.feature_set, r.rel_pr, r.pr.mean, r.pr.ci_lo, r.pr.ci_hi
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn introspect(dump: &Path, feat_a: &str, feat_b: &str) -> Result<ExitCode> {
    let text = fs::read_to_string(dump).map_err(|e| Error::Io {
        path: dump.to_path_buf(),
        source: e,
    })?;
    let dump = load_dump(&text)?;
    let summary = summarize(
        &dump,
        dump.feature_index(feat_a)?,
        dump.feature_index(feat_b)?,
    )?;
    summary.write_csv(io::stdout().lock())?;
    Ok(ExitCode::SUCCESS)
}

fn train_one(config: &Path, key: CellKey, dump: Option<PathBuf>) -> Result<ExitCode> {
    let exp = Experiment::new(HarnessConfig::load(config)?)?;
    let (model, rec) = exp.fit_cell(&key)?;
    println!(
        "{key}: pr_auc {:.4} roc_auc {:.4} latent_corr {:.4} cooc {:.4} trees {}",
        rec.metrics.pr_auc,
        rec.metrics.roc_auc,
        rec.metrics.latent_corr,
        rec.cooc_path_mean,
        rec.best_iteration
    );
    if let Some(path) = dump {
        fs::write(&path, model.dump_json()?).map_err(|e| Error::Io { path, source: e })?;
    }
    Ok(ExitCode::SUCCESS)
}

fn export(config: &Path, dgp: Dgp, fs_: FeatureSet, seed: usize, out: &Path) -> Result<ExitCode> {
    let exp = Experiment::new(HarnessConfig::load(config)?)?;
    let splits = exp.draw(dgp, seed)?.assemble(fs_)?;
    let file = fs::File::create(out).map_err(|e| Error::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    synth::write_csv(
        &[&splits.train, &splits.valid, &splits.test],
        io::BufWriter::new(file),
    )?;
    let sizes: &SplitSizes = &exp.config().sizes;
    eprintln!(
        "wrote {} rows ({} test positives) to {}",
        sizes.train + sizes.valid + sizes.test,
        splits.test.labels.iter().filter(|&&y| y == 1).count(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep { config, out } => sweep(&config, out),
        Command::Report { input } => report(&input),
        Command::Boundary { config, out } => boundary(&config, out),
        Command::Introspect {
            dump,
            feat_a,
            feat_b,
        } => introspect(&dump, &feat_a, &feat_b),
        Command::Train {
            config,
            dgp,
            fs,
            arm,
            s,
            seed,
            dump,
        } => train_one(&config, CellKey::new(dgp, fs, Arm::new(arm, s), seed), dump),
        Command::Export {
            config,
            dgp,
            fs,
            seed,
            out,
        } => export(&config, dgp, fs, seed, &out),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}
