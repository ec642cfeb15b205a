//! Stratified k-fold splitting and cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{fit, ModelSpec};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::features::Fdm;
use crate::metrics::{evaluate, EvaluationReport, FoldMetrics};

/// Splits `0..n` into k folds as (train, test) index pairs. Fold sizes
/// differ by at most 1. With labels given, each class is shuffled and dealt
/// separately, and the round-robin cursor continues across classes so
/// per-class proportions hold within one instance per fold.
pub fn kfold_split(
    n: usize,
    k: usize,
    seed: u64,
    stratify: Option<&[u8]>,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if k < 2 || k > n {
        return Err(Error::InvalidInput(format!(
            "k must be in 2..={n}, got {k}"
        )));
    }
    if let Some(labels) = stratify {
        if labels.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} stratify labels for {n} instances",
                labels.len()
            )));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::InvalidInput("labels must be 0 or 1".to_owned()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<usize>> = match stratify {
        Some(labels) => [0u8, 1]
            .iter()
            .map(|&class| {
                (0..n).filter(|&i| labels[i] == class).collect::<Vec<usize>>()
            })
            .filter(|g| !g.is_empty())
            .collect(),
        None => vec![(0..n).collect()],
    };

    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut cursor = 0usize;
    for mut group in groups {
        group.shuffle(&mut rng);
        for idx in group {
            folds[cursor % k].push(idx);
            cursor += 1;
        }
    }

    let result = folds
        .iter()
        .map(|test| {
            let mut test = test.clone();
            test.sort_unstable();
            let train: Vec<usize> = (0..n).filter(|i| test.binary_search(i).is_err()).collect();
            (train, test)
        })
        .collect();
    Ok(result)
}

/// Stratified k-fold cross-validation of one model spec on one FDM.
/// Returns the instance-weighted aggregate with per-fold records attached;
/// provenance fields are left for the caller.
pub fn cross_validate(spec: &ModelSpec, fdm: &Fdm, k: usize, seed: u64) -> Result<EvaluationReport> {
    let splits = kfold_split(fdm.n_instances(), k, seed, Some(fdm.labels()))?;
    let mut folds = Vec::with_capacity(k);
    for (fold, (train_idx, test_idx)) in splits.into_iter().enumerate() {
        let train = fdm.subset(&train_idx);
        let test = fdm.subset(&test_idx);
        let model = fit(spec, &train)?;
        let probs = model.predict_fdm(&test, ExecMode::Sequential)?;
        let metrics = evaluate(test.labels(), &probs, spec.threshold)?;
        folds.push(FoldMetrics {
            fold,
            test_size: test.n_instances(),
            metrics,
        });
    }
    Ok(EvaluationReport::from_folds(folds))
}
