//! Tie-strength ranking: classifier probabilities as a continuous strength
//! score per node pair, measured against the step-function best ranker.

use crate::classify::TrainedModel;
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::features::Fdm;

/// One ranked pair: observed strength e_obs and ground truth e_real.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub pair: (String, String),
    pub e_obs: f64,
    pub e_real: u8,
}

/// Pairs sorted by ascending observed strength plus both error forms.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    pub entries: Vec<RankEntry>,
    /// Sum of |e_obs - e_real| over all entries.
    pub error_total: f64,
    /// error_total divided by the entry count.
    pub error_normalized: f64,
    pub model: String,
    pub source: String,
}

/// Sum and mean absolute deviation of observed from real strength.
pub fn ranking_error(entries: &[RankEntry]) -> Result<(f64, f64)> {
    if entries.is_empty() {
        return Err(Error::InvalidInput("no entries to rank".to_owned()));
    }
    for e in entries {
        if !(0.0..=1.0).contains(&e.e_obs) {
            return Err(Error::InvalidInput(format!(
                "e_obs {} outside [0, 1]",
                e.e_obs
            )));
        }
        if e.e_real > 1 {
            return Err(Error::InvalidInput("e_real must be 0 or 1".to_owned()));
        }
    }
    let total: f64 = entries
        .iter()
        .map(|e| (e.e_obs - f64::from(e.e_real)).abs())
        .sum();
    Ok((total, total / entries.len() as f64))
}

/// Builds a ranking from per-instance scores aligned with `fdm`. The sort
/// is stable, so equal scores keep instance order.
pub fn rank_with_scores(scores: &[f64], fdm: &Fdm, model: &str) -> Result<RankingResult> {
    if scores.len() != fdm.n_instances() {
        return Err(Error::InvalidInput(format!(
            "{} scores for {} instances",
            scores.len(),
            fdm.n_instances()
        )));
    }
    let mut entries: Vec<RankEntry> = fdm
        .pairs()
        .iter()
        .zip(fdm.labels())
        .zip(scores)
        .map(|((pair, &label), &score)| RankEntry {
            pair: pair.clone(),
            e_obs: score,
            e_real: label,
        })
        .collect();
    let (error_total, error_normalized) = ranking_error(&entries)?;
    entries.sort_by(|a, b| a.e_obs.total_cmp(&b.e_obs));
    Ok(RankingResult {
        entries,
        error_total,
        error_normalized,
        model: model.to_owned(),
        source: String::new(),
    })
}

/// The gold standard: e_obs equals the ground-truth label everywhere, so
/// both errors are 0.
pub fn best_ranker(fdm: &Fdm) -> Result<RankingResult> {
    let scores: Vec<f64> = fdm.labels().iter().map(|&l| f64::from(l)).collect();
    rank_with_scores(&scores, fdm, "best_ranker")
}

/// Ranks every pair of `fdm` by the model's probability output.
pub fn rank_ties(model: &TrainedModel, fdm: &Fdm, mode: ExecMode) -> Result<RankingResult> {
    let scores = model.predict_fdm(fdm, mode)?;
    rank_with_scores(&scores, fdm, &model.spec().to_config())
}
