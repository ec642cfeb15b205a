//! Gaussian naive Bayes with per-class feature means and variances.

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    /// log prior per class [class 0, class 1].
    log_prior: [f64; 2],
    /// Per-class feature means, indexed [class][feature].
    mean: [Vec<f64>; 2],
    var: [Vec<f64>; 2],
}

/// Fits per-class Gaussians. Variances are floored at 1e-9 times the largest
/// overall feature variance so zero-variance features stay usable.
pub fn fit_naive_bayes(x: &[Vec<f64>], y: &[u8]) -> NaiveBayesModel {
    let d = x.first().map_or(0, Vec::len);
    let n = x.len() as f64;
    let mut count = [0usize; 2];
    let mut mean = [vec![0.0; d], vec![0.0; d]];
    for (row, &label) in x.iter().zip(y) {
        count[label as usize] += 1;
        for (m, v) in mean[label as usize].iter_mut().zip(row) {
            *m += v;
        }
    }
    for c in 0..2 {
        for m in &mut mean[c] {
            *m /= count[c].max(1) as f64;
        }
    }
    let mut var = [vec![0.0; d], vec![0.0; d]];
    for (row, &label) in x.iter().zip(y) {
        let c = label as usize;
        for ((s, v), m) in var[c].iter_mut().zip(row).zip(&mean[c]) {
            *s += (v - m) * (v - m);
        }
    }
    for c in 0..2 {
        for s in &mut var[c] {
            *s /= count[c].max(1) as f64;
        }
    }

    // Overall per-feature variance sets the smoothing scale.
    let mut overall_mean = vec![0.0; d];
    for row in x {
        for (m, v) in overall_mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut overall_mean {
        *m /= n;
    }
    let mut max_var: f64 = 0.0;
    for j in 0..d {
        let v = x.iter().map(|row| (row[j] - overall_mean[j]).powi(2)).sum::<f64>() / n;
        max_var = max_var.max(v);
    }
    let floor = (1e-9 * max_var).max(1e-300);
    for c in 0..2 {
        for s in &mut var[c] {
            *s = s.max(floor);
        }
    }

    let log_prior = [
        (count[0] as f64 / n).max(f64::MIN_POSITIVE).ln(),
        (count[1] as f64 / n).max(f64::MIN_POSITIVE).ln(),
    ];
    NaiveBayesModel {
        log_prior,
        mean,
        var,
    }
}

impl NaiveBayesModel {
    fn log_joint(&self, class: usize, row: &[f64]) -> f64 {
        let mut l = self.log_prior[class];
        for ((v, m), s2) in row.iter().zip(&self.mean[class]).zip(&self.var[class]) {
            l += -0.5 * ((2.0 * std::f64::consts::PI * s2).ln() + (v - m) * (v - m) / s2);
        }
        l
    }

    /// Posterior probability of class 1.
    pub fn probability(&self, row: &[f64]) -> f64 {
        let l0 = self.log_joint(0, row);
        let l1 = self.log_joint(1, row);
        let max = l0.max(l1);
        let e0 = (l0 - max).exp();
        let e1 = (l1 - max).exp();
        e1 / (e0 + e1)
    }
}
