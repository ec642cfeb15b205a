//! Subcommand handlers: resolve plans against the manifest, run the
//! experiment, print the human table, and emit machine files.

use std::fs;
use std::path::Path;

use linkassay::classify::{ModelKind, ModelSpec};
use linkassay::dataset::{load_manifest, summarize, Dataset};
use linkassay::experiments::{
    run_assessment, run_noise_experiment, run_null_model, run_transfer, AssessmentPlan, NoisePlan,
    NoiseSummary, TrainSource,
};
use linkassay::features::{build_aggregated_fdm, build_fdm, Fdm};
use linkassay::metrics::{roc_curve, EvaluationReport};
use linkassay::ranking::{best_ranker, rank_ties};
use linkassay::report::{
    fdm_table, fmt_full, fmt_human, folds_table, ledger_upsert, ranking_table, report_kv,
    report_table, report_table_human, roc_table, summary_table, LedgerRow, NA,
};
use linkassay::{Error, ExecMode};

use crate::{
    AssessArgs, Cli, Command, Common, CompareArgs, Failure, FdmArgs, NoiseArgs, NullArgs,
    RankArgs, SummarizeArgs,
};

pub(crate) fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Summarize(args) => cmd_summarize(&args),
        Command::Fdm(args) => cmd_fdm(&args),
        Command::Assess(args) => cmd_assess(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Rank(args) => cmd_rank(&args),
        Command::Noise(args) => cmd_noise(&args),
        Command::Nullmodel(args) => cmd_nullmodel(&args),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(common: &Common) -> Result<Dataset, Failure> {
    let ds = load_manifest(&common.manifest)?;
    for w in &ds.warnings {
        eprintln!("warning: {w}");
    }
    Ok(ds)
}

fn mode_of(common: &Common) -> ExecMode {
    if common.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    }
}

fn resolve_seed(flag: Option<u64>, ds: &Dataset) -> Result<u64, Failure> {
    flag.or(ds.defaults.seed).ok_or_else(|| {
        usage("--seed is required (or set `seed` under [defaults] in the manifest)")
    })
}

/// Model from the flag, the manifest default, or the svm_rbf default; the
/// run seed always keys the model's own randomness.
fn resolve_model(flag: Option<&str>, ds: &Dataset, seed: u64) -> Result<ModelSpec, Failure> {
    let mut spec = match flag {
        Some(text) => ModelSpec::parse_config(text).map_err(|e| usage(e.to_string()))?,
        None => ds
            .defaults
            .model
            .clone()
            .unwrap_or_else(|| ModelSpec::new(ModelKind::SvmRbf)),
    };
    spec.seed = seed;
    Ok(spec)
}

fn resolve_kfold(flag: Option<usize>, ds: &Dataset) -> usize {
    flag.or(ds.defaults.kfold_k).unwrap_or(10)
}

fn resolve_train(text: &str, ds: &Dataset) -> Result<TrainSource, Failure> {
    let source: TrainSource = text.parse().map_err(|e: Error| usage(e.to_string()))?;
    if let TrainSource::Network(id) = &source {
        ds.exogenous_by_id(id).map_err(|e| usage(e.to_string()))?;
    }
    Ok(source)
}

/// File emitter for one run's output directory; silent when no --out.
struct Sink<'a> {
    dir: Option<&'a Path>,
}

impl Sink<'_> {
    fn new(common: &Common) -> Result<Sink<'_>, Failure> {
        if let Some(dir) = &common.out {
            fs::create_dir_all(dir).map_err(|e| Failure::Runtime(Error::io(dir, e)))?;
        }
        Ok(Sink {
            dir: common.out.as_deref(),
        })
    }

    fn write(&self, name: &str, text: &str) -> Result<(), Failure> {
        if let Some(dir) = self.dir {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Failure::Runtime(Error::io(&path, e)))?;
        }
        Ok(())
    }

    /// Upserts the run ledger keyed by (plan hash, seed): reruns of an
    /// identical plan leave the file byte-identical.
    fn ledger(&self, plan: String, seed: u64, result: String) -> Result<(), Failure> {
        let Some(dir) = self.dir else {
            return Ok(());
        };
        let path = dir.join("runs.tsv");
        let existing = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(Failure::Runtime(Error::io(&path, e))),
        };
        let merged = ledger_upsert(&existing, &LedgerRow { plan, seed, result })?;
        fs::write(&path, merged).map_err(|e| Failure::Runtime(Error::io(&path, e)))
    }
}

fn fmt_auc(auc: Option<f64>, fmt: impl Fn(f64) -> String) -> String {
    auc.map_or_else(|| NA.to_owned(), fmt)
}

fn cmd_summarize(args: &SummarizeArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let rows = summarize(&ds)?;
    print!("{}", summary_table(&rows, true));
    sink.write("summary.tsv", &summary_table(&rows, false))
}

fn cmd_fdm(args: &FdmArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let mode = mode_of(&args.common);
    let fdm: Fdm = if args.aggregated {
        let nets: Vec<_> = ds.exogenous.iter().collect();
        build_aggregated_fdm(&nets, mode)?
    } else if args.sn {
        build_fdm(&ds.sn, args.global, mode)?
    } else {
        let id = args.network.as_deref().expect("clap group guarantees a source");
        let net = ds.exogenous_by_id(id).map_err(|e| usage(e.to_string()))?;
        build_fdm(net, args.global, mode)?
    };
    let text = fdm_table(&fdm);
    eprintln!(
        "fdm {}: {} instances, {} features",
        fdm.source(),
        fdm.n_instances(),
        fdm.n_features()
    );
    if args.common.out.is_some() {
        sink.write(&format!("fdm_{}.tsv", fdm.source()), &text)
    } else {
        print!("{text}");
        Ok(())
    }
}

fn cmd_assess(args: &AssessArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let seed = resolve_seed(args.seed, &ds)?;
    let plan = AssessmentPlan {
        train: resolve_train(&args.train, &ds)?,
        model: resolve_model(args.model.as_deref(), &ds, seed)?,
        kfold_k: resolve_kfold(args.kfold, &ds),
        seed,
        mode: mode_of(&args.common),
    };
    let report = if plan.train == TrainSource::SnSelf {
        if args.grid.is_some() {
            return Err(usage("--grid needs a transfer source, not sn_self"));
        }
        run_assessment(&ds, &plan)?
    } else {
        let run = run_transfer(&ds, &plan)?;
        if run.report.auc.is_some() {
            let curve = roc_curve(run.test.labels(), &run.probs)?;
            sink.write("roc.tsv", &roc_table(&curve))?;
        }
        if let Some(spec) = &args.grid {
            sink.write("grid.tsv", &crate::grid::grid_table(&run, spec, args.grid_steps)?)?;
        }
        run.report
    };
    print!("{}", report_table_human(&[report.clone()]));
    sink.write("report.txt", &report_kv(&report))?;
    sink.write("report.tsv", &report_table(std::slice::from_ref(&report)))?;
    if let Some(folds) = folds_table(&report) {
        sink.write("folds.tsv", &folds)?;
    }
    sink.ledger(
        format!(
            "assess dataset={} train={} model={} kfold={}{}",
            ds.name,
            plan.train,
            plan.model.to_config(),
            plan.kfold_k,
            args.grid
                .as_deref()
                .map(|g| format!(" grid={g} grid_steps={}", args.grid_steps))
                .unwrap_or_default()
        ),
        seed,
        format!(
            "f_weighted={} auc={}",
            fmt_full(report.weighted.f1),
            fmt_auc(report.auc, fmt_full)
        ),
    )
}

fn parse_model_list(text: &str, seed: u64) -> Result<Vec<ModelSpec>, Failure> {
    let mut specs = Vec::new();
    for token in text
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let kind: ModelKind = token.parse().map_err(|e: Error| usage(e.to_string()))?;
        let mut spec = ModelSpec::new(kind);
        spec.seed = seed;
        specs.push(spec);
    }
    if specs.is_empty() {
        return Err(usage("--models names at least one classifier"));
    }
    Ok(specs)
}

fn cmd_compare(args: &CompareArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let seed = resolve_seed(args.seed, &ds)?;
    let train = resolve_train(&args.train, &ds)?;
    let specs = parse_model_list(&args.models, seed)?;
    let kfold_k = resolve_kfold(args.kfold, &ds);
    let mode = mode_of(&args.common);
    let mut reports: Vec<EvaluationReport> = Vec::with_capacity(specs.len());
    for model in specs {
        let plan = AssessmentPlan {
            train: train.clone(),
            model,
            kfold_k,
            seed,
            mode,
        };
        reports.push(run_assessment(&ds, &plan)?);
    }
    print!("{}", report_table_human(&reports));
    sink.write("compare.tsv", &report_table(&reports))?;
    let kinds: Vec<String> = reports
        .iter()
        .map(|r| r.model.split_whitespace().next().unwrap_or(NA).to_owned())
        .collect();
    sink.ledger(
        format!(
            "compare dataset={} train={train} models={} kfold={kfold_k}",
            ds.name,
            kinds.join(",")
        ),
        seed,
        format!(
            "best_f_weighted={}",
            fmt_full(
                reports
                    .iter()
                    .map(|r| r.weighted.f1)
                    .fold(f64::NEG_INFINITY, f64::max)
            )
        ),
    )
}

fn cmd_rank(args: &RankArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let seed = resolve_seed(args.seed, &ds)?;
    let train = resolve_train(&args.train, &ds)?;
    if train == TrainSource::SnSelf {
        return Err(usage("rank needs a transfer source, not sn_self"));
    }
    let plan = AssessmentPlan {
        train,
        model: resolve_model(args.model.as_deref(), &ds, seed)?,
        kfold_k: resolve_kfold(None, &ds),
        seed,
        mode: mode_of(&args.common),
    };
    let run = run_transfer(&ds, &plan)?;
    let ranking = rank_ties(&run.model, &run.test, plan.mode)?;
    let best = best_ranker(&run.test)?;
    println!(
        "ranked {} pairs of {}: error_total {}, error_normalized {} ({:.1}%)",
        ranking.entries.len(),
        ds.sn.id(),
        fmt_human(ranking.error_total),
        fmt_human(ranking.error_normalized),
        ranking.error_normalized * 100.0
    );
    println!("best_ranker error_total {}", fmt_human(best.error_total));
    sink.write("ranking.tsv", &ranking_table(&ranking))?;
    sink.write("best_ranker.tsv", &ranking_table(&best))?;
    let mut kv = String::new();
    for (key, value) in [
        ("train_source", plan.train.to_string()),
        ("test_source", ds.sn.id().to_owned()),
        ("model", plan.model.to_config()),
        ("seed", seed.to_string()),
        ("entries", ranking.entries.len().to_string()),
        ("error_total", fmt_full(ranking.error_total)),
        ("error_normalized", fmt_full(ranking.error_normalized)),
        ("best_ranker_error_total", fmt_full(best.error_total)),
    ] {
        kv.push_str(&format!("{key}\t{value}\n"));
    }
    sink.write("rank_report.txt", &kv)?;
    sink.ledger(
        format!(
            "rank dataset={} train={} model={}",
            ds.name,
            plan.train,
            plan.model.to_config()
        ),
        seed,
        format!("error_normalized={}", fmt_full(ranking.error_normalized)),
    )
}

fn parse_r_values(text: Option<&str>) -> Result<Vec<f64>, Failure> {
    let Some(text) = text else {
        return Ok((1..=10).map(|i| f64::from(i) / 10.0).collect());
    };
    let mut values = Vec::new();
    for token in text
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let r: f64 = token
            .parse()
            .map_err(|_| usage(format!("bad noise rate `{token}`")))?;
        if !(r > 0.0 && r <= 1.0) {
            return Err(usage(format!("noise rate {r} outside (0, 1]")));
        }
        values.push(r);
    }
    if values.is_empty() {
        return Err(usage("--r-values names at least one rate"));
    }
    Ok(values)
}

fn noise_tables(summary: &NoiseSummary, human: bool) -> (String, String) {
    let fmt: fn(f64) -> String = if human { fmt_human } else { fmt_full };
    let mut cells = String::from("r\trun\tinjected\tsuccess\n");
    for c in &summary.cells {
        cells.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            fmt_full(c.r),
            c.run,
            c.injected,
            fmt(c.success)
        ));
    }
    let mut means = String::from("r\tmean_success\n");
    for &(r, m) in &summary.per_r_means {
        means.push_str(&format!("{}\t{}\n", fmt_full(r), fmt(m)));
    }
    (cells, means)
}

fn cmd_noise(args: &NoiseArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let seed = resolve_seed(args.seed, &ds)?;
    let train = resolve_train(&args.train, &ds)?;
    if train == TrainSource::SnSelf {
        return Err(usage("noise experiments train on exogenous networks only"));
    }
    if args.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let plan = NoisePlan {
        r_values: parse_r_values(args.r_values.as_deref())?,
        runs_per_r: args.runs,
        train,
        model: resolve_model(args.model.as_deref(), &ds, seed)?,
        seed,
        mode: mode_of(&args.common),
    };
    let summary = run_noise_experiment(&ds, &plan)?;
    let (_, means_human) = noise_tables(&summary, true);
    print!("{means_human}");
    println!("grand_mean\t{}", fmt_human(summary.grand_mean));
    let (cells, means) = noise_tables(&summary, false);
    sink.write("noise_cells.tsv", &cells)?;
    sink.write("noise_means.tsv", &means)?;
    let r_list: Vec<String> = plan.r_values.iter().map(|&r| fmt_full(r)).collect();
    let mut kv = String::new();
    for (key, value) in [
        ("train_source", plan.train.to_string()),
        ("model", plan.model.to_config()),
        ("seed", seed.to_string()),
        ("r_values", r_list.join(",")),
        ("runs_per_r", plan.runs_per_r.to_string()),
        ("grand_mean", fmt_full(summary.grand_mean)),
    ] {
        kv.push_str(&format!("{key}\t{value}\n"));
    }
    sink.write("noise_report.txt", &kv)?;
    sink.ledger(
        format!(
            "noise dataset={} train={} model={} r_values={} runs={}",
            ds.name,
            plan.train,
            plan.model.to_config(),
            r_list.join(","),
            plan.runs_per_r
        ),
        seed,
        format!("grand_mean={}", fmt_full(summary.grand_mean)),
    )
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn cmd_nullmodel(args: &NullArgs) -> Result<(), Failure> {
    let ds = load(&args.common)?;
    let sink = Sink::new(&args.common)?;
    let seed = resolve_seed(args.seed, &ds)?;
    if args.replicates == 0 {
        return Err(usage("--replicates must be at least 1"));
    }
    let plan = AssessmentPlan {
        train: resolve_train(&args.train, &ds)?,
        model: resolve_model(args.model.as_deref(), &ds, seed)?,
        kfold_k: resolve_kfold(args.kfold, &ds),
        seed,
        mode: mode_of(&args.common),
    };
    let reports = run_null_model(&ds, &plan, args.replicates)?;
    let metric = |f: fn(&EvaluationReport) -> f64| -> (f64, f64) {
        mean_sd(&reports.iter().map(f).collect::<Vec<_>>())
    };
    let (acc_mean, acc_sd) = metric(|r| r.accuracy);
    let (p_mean, p_sd) = metric(|r| r.weighted.precision);
    let (r_mean, r_sd) = metric(|r| r.weighted.recall);
    let (f_mean, f_sd) = metric(|r| r.weighted.f1);
    let aucs: Vec<f64> = reports.iter().filter_map(|r| r.auc).collect();
    let (auc_mean, auc_sd) = mean_sd(&aucs);
    println!(
        "null model over {} replicates: f_weighted {} ± {}, auc {} ± {}",
        reports.len(),
        fmt_human(f_mean),
        fmt_human(f_sd),
        if aucs.is_empty() { NA.to_owned() } else { fmt_human(auc_mean) },
        fmt_human(auc_sd)
    );
    sink.write("null_replicates.tsv", &report_table(&reports))?;
    let mut kv = String::new();
    for (key, value) in [
        ("train_source", plan.train.to_string()),
        ("model", plan.model.to_config()),
        ("seed", seed.to_string()),
        ("replicates", reports.len().to_string()),
        ("accuracy_mean", fmt_full(acc_mean)),
        ("accuracy_sd", fmt_full(acc_sd)),
        ("precision_weighted_mean", fmt_full(p_mean)),
        ("precision_weighted_sd", fmt_full(p_sd)),
        ("recall_weighted_mean", fmt_full(r_mean)),
        ("recall_weighted_sd", fmt_full(r_sd)),
        ("f_weighted_mean", fmt_full(f_mean)),
        ("f_weighted_sd", fmt_full(f_sd)),
        ("auc_defined", aucs.len().to_string()),
        (
            "auc_mean",
            if aucs.is_empty() { NA.to_owned() } else { fmt_full(auc_mean) },
        ),
        ("auc_sd", fmt_full(auc_sd)),
    ] {
        kv.push_str(&format!("{key}\t{value}\n"));
    }
    sink.write("null_report.txt", &kv)?;
    sink.ledger(
        format!(
            "nullmodel dataset={} train={} model={} kfold={} replicates={}",
            ds.name,
            plan.train,
            plan.model.to_config(),
            plan.kfold_k,
            args.replicates
        ),
        seed,
        format!(
            "f_weighted_mean={} auc_mean={}",
            fmt_full(f_mean),
            if aucs.is_empty() { NA.to_owned() } else { fmt_full(auc_mean) }
        ),
    )
}
