//! Binary classification metrics: confusion matrix, accuracy,
//! precision/recall/F-score (positive-class and support-weighted), and ROC
//! analysis with two independent AUC routes.

use crate::error::{Error, Result};

/// Binary confusion counts. Class 1 is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

/// Precision, recall, and F-score as one row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Confusion {
    pub fn from_predictions(y_true: &[u8], y_pred: &[u8]) -> Result<Confusion> {
        if y_true.len() != y_pred.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels but {} predictions",
                y_true.len(),
                y_pred.len()
            )));
        }
        if y_true.iter().chain(y_pred).any(|&y| y > 1) {
            return Err(Error::InvalidInput("labels must be 0 or 1".to_owned()));
        }
        let mut c = Confusion::default();
        for (&t, &p) in y_true.iter().zip(y_pred) {
            match (t, p) {
                (1, 1) => c.tp += 1,
                (0, 1) => c.fp += 1,
                (0, 0) => c.tn += 1,
                (1, 0) => c.fn_ += 1,
                _ => unreachable!(),
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Adds another confusion matrix elementwise (pooling across folds).
    pub fn merge(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (self.tp + self.tn) as f64 / total as f64
    }

    /// Precision/recall/F for class 1. Undefined ratios (empty denominator)
    /// are reported as 0.
    pub fn positive_prf(&self) -> Prf {
        prf(self.tp, self.fp, self.fn_)
    }

    /// Precision/recall/F for class 0 (class 0 treated as the positive one).
    pub fn negative_prf(&self) -> Prf {
        prf(self.tn, self.fn_, self.fp)
    }

    /// Support-weighted one-vs-rest average of the per-class scores. The
    /// F entry is the weighted mean of per-class F values, not the harmonic
    /// mean of the weighted precision and recall.
    pub fn weighted_prf(&self) -> Prf {
        let support1 = (self.tp + self.fn_) as f64;
        let support0 = (self.tn + self.fp) as f64;
        let total = support1 + support0;
        if total == 0.0 {
            return Prf {
                precision: 0.0,
                recall: 0.0,
                f1: 0.0,
            };
        }
        let pos = self.positive_prf();
        let neg = self.negative_prf();
        let avg = |a: f64, b: f64| (support1 * a + support0 * b) / total;
        Prf {
            precision: avg(pos.precision, neg.precision),
            recall: avg(pos.recall, neg.recall),
            f1: avg(pos.f1, neg.f1),
        }
    }
}

fn prf(tp: usize, fp: usize, fn_: usize) -> Prf {
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Prf {
        precision,
        recall,
        f1,
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// One operating point of a ROC curve: everything scoring at least
/// `threshold` is classified positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

fn check_scored(labels: &[u8], scores: &[f64]) -> Result<(usize, usize)> {
    if labels.len() != scores.len() {
        return Err(Error::InvalidInput(format!(
            "{} labels but {} scores",
            labels.len(),
            scores.len()
        )));
    }
    if labels.iter().any(|&y| y > 1) {
        return Err(Error::InvalidInput("labels must be 0 or 1".to_owned()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("scores must not be NaN".to_owned()));
    }
    let pos = labels.iter().filter(|&&y| y == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    Ok((pos, neg))
}

/// ROC curve from scores: one point per distinct score value, descending
/// threshold sweep, tied scores grouped into a single point. Starts at the
/// (0, 0) corner and ends at (1, 1).
pub fn roc_curve(labels: &[u8], scores: &[f64]) -> Result<Vec<RocPoint>> {
    let (pos, neg) = check_scored(labels, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
        });
    }
    Ok(points)
}

/// Area under a ROC curve by the trapezoidal rule.
pub fn auc_trapezoid(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
        .sum()
}

/// AUC via the Mann-Whitney statistic: the probability a random positive
/// outscores a random negative, ties counted half. Rank-based, so it agrees
/// with [`auc_trapezoid`] over [`roc_curve`] up to rounding.
pub fn auc_mann_whitney(labels: &[u8], scores: &[f64]) -> Result<f64> {
    let (pos, neg) = check_scored(labels, scores)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Average ranks over tied scores (1-based ranks).
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if labels[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    let n1 = pos as f64;
    let u = rank_sum_pos - n1 * (n1 + 1.0) / 2.0;
    Ok(u / (n1 * neg as f64))
}

/// Convenience wrapper: ROC-based AUC.
pub fn auc(labels: &[u8], scores: &[f64]) -> Result<f64> {
    Ok(auc_trapezoid(&roc_curve(labels, scores)?))
}

/// Metrics of one scored evaluation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalBundle {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub weighted: Prf,
    pub positive: Prf,
    /// None when the truth is single-class (AUC undefined).
    pub auc: Option<f64>,
}

/// Scores probabilities against truth: classes by thresholding, AUC from
/// the raw scores.
pub fn evaluate(labels: &[u8], probs: &[f64], threshold: f64) -> Result<EvalBundle> {
    let preds: Vec<u8> = probs.iter().map(|&p| u8::from(p >= threshold)).collect();
    let confusion = Confusion::from_predictions(labels, &preds)?;
    let auc = match auc(labels, probs) {
        Ok(v) => Some(v),
        Err(Error::SingleClass) => None,
        Err(e) => return Err(e),
    };
    Ok(EvalBundle {
        confusion,
        accuracy: confusion.accuracy(),
        weighted: confusion.weighted_prf(),
        positive: confusion.positive_prf(),
        auc,
    })
}

/// Per-fold record inside a cross-validated report.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldMetrics {
    pub fold: usize,
    pub test_size: usize,
    pub metrics: EvalBundle,
}

/// A full evaluation record: aggregate metrics plus run provenance, and the
/// per-fold breakdown when cross-validation produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub train_source: String,
    pub test_source: String,
    pub model: String,
    pub seed: u64,
    /// Pooled over folds for cross-validated runs.
    pub confusion: Confusion,
    pub accuracy: f64,
    pub weighted: Prf,
    pub positive: Prf,
    pub auc: Option<f64>,
    pub folds: Vec<FoldMetrics>,
}

impl EvaluationReport {
    /// Report for a single train/test pass (no folds).
    pub fn single(bundle: EvalBundle) -> EvaluationReport {
        EvaluationReport {
            train_source: String::new(),
            test_source: String::new(),
            model: String::new(),
            seed: 0,
            confusion: bundle.confusion,
            accuracy: bundle.accuracy,
            weighted: bundle.weighted,
            positive: bundle.positive,
            auc: bundle.auc,
            folds: Vec::new(),
        }
    }

    /// Instance-weighted aggregation of per-fold metrics; the confusion
    /// matrix is pooled, AUC averages over the folds where it is defined.
    pub fn from_folds(folds: Vec<FoldMetrics>) -> EvaluationReport {
        let mut confusion = Confusion::default();
        let total: usize = folds.iter().map(|f| f.test_size).sum();
        let mut accuracy = 0.0;
        let mut weighted = [0.0; 3];
        let mut positive = [0.0; 3];
        let mut auc_sum = 0.0;
        let mut auc_weight = 0.0;
        for fold in &folds {
            let w = fold.test_size as f64;
            confusion.merge(&fold.metrics.confusion);
            accuracy += w * fold.metrics.accuracy;
            weighted[0] += w * fold.metrics.weighted.precision;
            weighted[1] += w * fold.metrics.weighted.recall;
            weighted[2] += w * fold.metrics.weighted.f1;
            positive[0] += w * fold.metrics.positive.precision;
            positive[1] += w * fold.metrics.positive.recall;
            positive[2] += w * fold.metrics.positive.f1;
            if let Some(a) = fold.metrics.auc {
                auc_sum += w * a;
                auc_weight += w;
            }
        }
        let n = (total as f64).max(1.0);
        EvaluationReport {
            train_source: String::new(),
            test_source: String::new(),
            model: String::new(),
            seed: 0,
            confusion,
            accuracy: accuracy / n,
            weighted: Prf {
                precision: weighted[0] / n,
                recall: weighted[1] / n,
                f1: weighted[2] / n,
            },
            positive: Prf {
                precision: positive[0] / n,
                recall: positive[1] / n,
                f1: positive[2] / n,
            },
            auc: if auc_weight > 0.0 {
                Some(auc_sum / auc_weight)
            } else {
                None
            },
            folds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_counts() {
        let c = Confusion::from_predictions(&[1, 1, 0, 0, 1], &[1, 0, 1, 0, 1]).unwrap();
        assert_eq!(
            c,
            Confusion {
                tp: 2,
                fp: 1,
                tn: 1,
                fn_: 1
            }
        );
        assert_eq!(c.total(), 5);
        assert!(Confusion::from_predictions(&[1], &[1, 0]).is_err());
        assert!(Confusion::from_predictions(&[2], &[1]).is_err());
    }

    #[test]
    fn merge_pools_counts() {
        let mut a = Confusion::from_predictions(&[1, 0], &[1, 0]).unwrap();
        let b = Confusion::from_predictions(&[1, 0], &[0, 1]).unwrap();
        a.merge(&b);
        assert_eq!(a.total(), 4);
        assert_eq!(a.accuracy(), 0.5);
    }

    #[test]
    fn balanced_half_right() {
        let c = Confusion::from_predictions(&[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap();
        assert_eq!(c.accuracy(), 0.5);
        let w = c.weighted_prf();
        assert_eq!((w.precision, w.recall, w.f1), (0.5, 0.5, 0.5));
        let p = c.positive_prf();
        assert_eq!((p.precision, p.recall, p.f1), (0.5, 0.5, 0.5));
    }

    #[test]
    fn skewed_all_negative_predictions() {
        let y_true = [0, 0, 0, 0, 0, 0, 0, 0, 0, 1];
        let y_pred = [0; 10];
        let c = Confusion::from_predictions(&y_true, &y_pred).unwrap();
        assert_eq!(c.accuracy(), 0.9);
        let w = c.weighted_prf();
        assert!((w.precision - 0.81).abs() < 1e-12);
        assert!((w.recall - 0.9).abs() < 1e-12);
        assert!((w.f1 - 0.9 * (18.0 / 19.0)).abs() < 1e-12);
        // No positive predictions: positive-class scores collapse to 0.
        let p = c.positive_prf();
        assert_eq!((p.precision, p.recall, p.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn perfect_predictions() {
        let c = Confusion::from_predictions(&[1, 0, 1], &[1, 0, 1]).unwrap();
        assert_eq!(c.accuracy(), 1.0);
        let w = c.weighted_prf();
        assert_eq!((w.precision, w.recall, w.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn roc_shape_and_auc() {
        let labels = [1, 0, 1, 0];
        let scores = [0.9, 0.8, 0.4, 0.3];
        let curve = roc_curve(&labels, &scores).unwrap();
        assert_eq!(curve.len(), 5);
        assert_eq!((curve[0].fpr, curve[0].tpr), (0.0, 0.0));
        let last = curve.last().unwrap();
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        assert!((auc_trapezoid(&curve) - 0.75).abs() < 1e-12);
        assert!((auc_mann_whitney(&labels, &scores).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn auc_extremes() {
        assert_eq!(auc(&[1, 0], &[0.9, 0.1]).unwrap(), 1.0);
        assert_eq!(auc(&[1, 0], &[0.1, 0.9]).unwrap(), 0.0);
    }

    #[test]
    fn tied_scores_grouped() {
        let labels = [1, 0];
        let scores = [0.5, 0.5];
        let curve = roc_curve(&labels, &scores).unwrap();
        // Initial corner plus one grouped point.
        assert_eq!(curve.len(), 2);
        assert!((auc_trapezoid(&curve) - 0.5).abs() < 1e-12);
        assert!((auc_mann_whitney(&labels, &scores).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn auc_routes_agree_on_random_scores() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 50;
            let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..=1)).collect();
            if labels.iter().all(|&y| y == labels[0]) {
                continue;
            }
            // Coarse grid forces plenty of ties.
            let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..5) as f64 / 4.0).collect();
            let a = auc(&labels, &scores).unwrap();
            let b = auc_mann_whitney(&labels, &scores).unwrap();
            assert!((a - b).abs() < 1e-9, "trapezoid {a} vs mann-whitney {b}");
        }
    }

    #[test]
    fn single_class_is_an_error() {
        assert!(matches!(auc(&[1, 1], &[0.5, 0.6]), Err(Error::SingleClass)));
        assert!(matches!(
            auc_mann_whitney(&[0, 0], &[0.5, 0.6]),
            Err(Error::SingleClass)
        ));
    }
}
