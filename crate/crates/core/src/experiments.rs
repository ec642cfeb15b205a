//! Experiment drivers: training-source selection, transfer assessment,
//! matched null models, and the noise-injection study.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;

use crate::classify::{cross_validate, fit, ModelSpec, TrainedModel};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::features::{build_aggregated_fdm, build_fdm, pair_features, Fdm};
use crate::graph::{non_edges, random_graph_named, with_added_edges, Network};
use crate::metrics::{evaluate, EvaluationReport};
use crate::synthetic::mix_seed;

/// Where the training instances come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrainSource {
    /// A single exogenous network, by id.
    Network(String),
    /// Every exogenous network stacked, with the global density feature.
    Aggregated,
    /// The social network itself, assessed by cross-validation.
    SnSelf,
}

impl fmt::Display for TrainSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrainSource::Network(id) => f.write_str(id),
            TrainSource::Aggregated => f.write_str("aggregated"),
            TrainSource::SnSelf => f.write_str("sn_self"),
        }
    }
}

impl FromStr for TrainSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<TrainSource> {
        match s {
            "" => Err(Error::InvalidInput("empty training source".to_owned())),
            "aggregated" => Ok(TrainSource::Aggregated),
            "sn_self" | "self" => Ok(TrainSource::SnSelf),
            id => Ok(TrainSource::Network(id.to_owned())),
        }
    }
}

/// One assessment: a training source, a model, and the evaluation seed.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentPlan {
    pub train: TrainSource,
    pub model: ModelSpec,
    /// Folds for the `sn_self` source; ignored otherwise.
    pub kfold_k: usize,
    pub seed: u64,
    pub mode: ExecMode,
}

/// Builds the training feature data model for a source. Single networks
/// use the plain schema; the aggregated source appends the density column.
pub fn train_fdm(ds: &Dataset, train: &TrainSource, mode: ExecMode) -> Result<Fdm> {
    match train {
        TrainSource::Network(id) => build_fdm(ds.exogenous_by_id(id)?, false, mode),
        TrainSource::Aggregated => {
            let nets: Vec<&Network> = ds.exogenous.iter().collect();
            build_aggregated_fdm(&nets, mode)
        }
        TrainSource::SnSelf => build_fdm(&ds.sn, false, mode),
    }
}

/// Everything a transfer run produces, for callers that need more than
/// the report (ROC export, ranking, probability grids).
#[derive(Debug, Clone)]
pub struct TransferRun {
    pub report: EvaluationReport,
    pub model: TrainedModel,
    pub train: Fdm,
    /// The social-network FDM, schema-matched to the training source.
    pub test: Fdm,
    pub probs: Vec<f64>,
}

fn stamp(mut report: EvaluationReport, ds: &Dataset, plan: &AssessmentPlan) -> EvaluationReport {
    report.train_source = plan.train.to_string();
    report.test_source = ds.sn.id().to_owned();
    report.model = plan.model.to_config();
    report.seed = plan.seed;
    report
}

/// Trains on an exogenous source and classifies the social network's
/// pairs. The `sn_self` source has no transfer semantics and is rejected.
pub fn run_transfer(ds: &Dataset, plan: &AssessmentPlan) -> Result<TransferRun> {
    if plan.train == TrainSource::SnSelf {
        return Err(Error::InvalidInput(
            "transfer runs need an exogenous training source".to_owned(),
        ));
    }
    let train = train_fdm(ds, &plan.train, plan.mode)?;
    let include_global = matches!(plan.train, TrainSource::Aggregated);
    let test = build_fdm(&ds.sn, include_global, plan.mode)?;
    let model = fit(&plan.model, &train)?;
    let probs = model.predict_fdm(&test, plan.mode)?;
    let report = EvaluationReport::single(evaluate(test.labels(), &probs, plan.model.threshold)?);
    Ok(TransferRun {
        report: stamp(report, ds, plan),
        model,
        train,
        test,
        probs,
    })
}

/// Trains per the plan and evaluates on the social network. The `sn_self`
/// source runs stratified k-fold cross-validation instead of a transfer.
pub fn run_assessment(ds: &Dataset, plan: &AssessmentPlan) -> Result<EvaluationReport> {
    match &plan.train {
        TrainSource::SnSelf => {
            let fdm = train_fdm(ds, &plan.train, plan.mode)?;
            let report = cross_validate(&plan.model, &fdm, plan.kfold_k, plan.seed)?;
            Ok(stamp(report, ds, plan))
        }
        _ => Ok(run_transfer(ds, plan)?.report),
    }
}

/// Repeats the plan on datasets whose networks are replaced by random
/// graphs matched on node and edge counts. Returns one report per
/// replicate, each under a derived seed.
pub fn run_null_model(
    ds: &Dataset,
    plan: &AssessmentPlan,
    replicates: usize,
) -> Result<Vec<EvaluationReport>> {
    if replicates == 0 {
        return Err(Error::InvalidInput("need at least one replicate".to_owned()));
    }
    map_indexed(plan.mode, replicates, |rep| {
        let rep_seed = mix_seed(plan.seed, rep as u64);
        let matched = |net: &Network, stream: u64| -> Result<Network> {
            random_graph_named(
                net.id(),
                net.node_count(),
                net.edge_count(),
                mix_seed(rep_seed, stream),
                net.directed(),
            )
        };
        let sn = matched(&ds.sn, 1)?;
        let exogenous = ds
            .exogenous
            .iter()
            .enumerate()
            .map(|(i, net)| matched(net, 2 + i as u64))
            .collect::<Result<Vec<_>>>()?;
        let null_ds = Dataset::from_networks(&ds.name, sn, exogenous)?;
        let mut rep_plan = plan.clone();
        rep_plan.seed = rep_seed;
        // Replicates already run in parallel; nesting adds nothing.
        rep_plan.mode = ExecMode::Sequential;
        run_assessment(&null_ds, &rep_plan)
    })
    .into_iter()
    .collect()
}

/// A disguised social network: the original plus injected fake links.
#[derive(Debug, Clone, PartialEq)]
pub struct Disguised {
    pub network: Network,
    /// The injected pairs, sorted by node label.
    pub injected: Vec<(String, String)>,
}

/// Adds `floor(r * available)` fake links drawn uniformly from the absent
/// pairs of `sn`, where `available` is the count of such pairs. `r` must
/// lie in (0, 1]; `r = 1` completes the graph.
pub fn inject_noise(sn: &Network, r: f64, seed: u64) -> Result<Disguised> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "noise rate must be in (0, 1], got {r}"
        )));
    }
    let pool = non_edges(sn);
    let k = (pool.len() as f64 * r).floor() as usize;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<(usize, usize)> = rand::seq::index::sample(&mut rng, pool.len().max(1), k)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    chosen.sort_unstable();
    let network = with_added_edges(sn, &format!("{}_disguised", sn.id()), &chosen);
    let injected = chosen
        .into_iter()
        .map(|(u, v)| (sn.label(u).to_owned(), sn.label(v).to_owned()))
        .collect();
    Ok(Disguised { network, injected })
}

/// Fraction of the injected pairs the model classifies as fake (class 0),
/// with their features computed on the disguised network. Appends the
/// density column when the model was trained with it.
pub fn noise_success_rate(model: &TrainedModel, disguised: &Disguised) -> Result<f64> {
    if disguised.injected.is_empty() {
        return Err(Error::InvalidInput(
            "no injected links; success rate undefined".to_owned(),
        ));
    }
    let net = &disguised.network;
    let base = if net.directed() { 18 } else { 9 };
    let want = model.n_features();
    let global = if want == base + 1 {
        Some(net.density()?)
    } else if want == base {
        None
    } else {
        return Err(Error::SchemaMismatch {
            got: base,
            expected: want,
        });
    };
    let mut fakes = 0usize;
    for (u, v) in &disguised.injected {
        let mut row = pair_features(net, u, v)?;
        if let Some(d) = global {
            row.push(d);
        }
        if model.predict_class(&row)? == 0 {
            fakes += 1;
        }
    }
    Ok(fakes as f64 / disguised.injected.len() as f64)
}

/// The noise-injection experiment: a grid of noise rates, repeated runs
/// per rate, one model trained once on the clean dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePlan {
    pub r_values: Vec<f64>,
    pub runs_per_r: usize,
    pub train: TrainSource,
    pub model: ModelSpec,
    pub seed: u64,
    pub mode: ExecMode,
}

/// One grid cell: a noise rate, a run index, and its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCell {
    pub r: f64,
    pub run: usize,
    /// Count of links injected in this run.
    pub injected: usize,
    pub success: f64,
}

/// All cells plus the per-rate means and their uniform grand mean.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSummary {
    pub cells: Vec<NoiseCell>,
    pub per_r_means: Vec<(f64, f64)>,
    pub grand_mean: f64,
}

/// Runs the full grid. Cell seeds derive from the plan seed, so the grid
/// is reproducible regardless of execution mode.
pub fn run_noise_experiment(ds: &Dataset, plan: &NoisePlan) -> Result<NoiseSummary> {
    if plan.r_values.is_empty() || plan.runs_per_r == 0 {
        return Err(Error::InvalidInput(
            "need at least one noise rate and one run per rate".to_owned(),
        ));
    }
    if plan.train == TrainSource::SnSelf {
        return Err(Error::InvalidInput(
            "noise experiments train on exogenous networks only".to_owned(),
        ));
    }
    let train = train_fdm(ds, &plan.train, plan.mode)?;
    let model = fit(&plan.model, &train)?;

    let total = plan.r_values.len() * plan.runs_per_r;
    let cells: Vec<NoiseCell> = map_indexed(plan.mode, total, |i| {
        let r = plan.r_values[i / plan.runs_per_r];
        let run = i % plan.runs_per_r;
        let disguised = inject_noise(&ds.sn, r, mix_seed(plan.seed, 1 + i as u64))?;
        Ok(NoiseCell {
            r,
            run,
            injected: disguised.injected.len(),
            success: noise_success_rate(&model, &disguised)?,
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let per_r_means: Vec<(f64, f64)> = plan
        .r_values
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let runs = &cells[j * plan.runs_per_r..(j + 1) * plan.runs_per_r];
            let mean = runs.iter().map(|c| c.success).sum::<f64>() / runs.len() as f64;
            (r, mean)
        })
        .collect();
    let grand_mean =
        per_r_means.iter().map(|&(_, m)| m).sum::<f64>() / per_r_means.len() as f64;
    Ok(NoiseSummary {
        cells,
        per_r_means,
        grand_mean,
    })
}
