//! k-nearest-neighbor classification on standardized features.

#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    /// Standardized training rows.
    points: Vec<Vec<f64>>,
    labels: Vec<u8>,
    k: usize,
}

pub fn fit_knn(x: Vec<Vec<f64>>, y: Vec<u8>, k: usize) -> KnnModel {
    let k = k.min(x.len()).max(1);
    KnnModel {
        points: x,
        labels: y,
        k,
    }
}

impl KnnModel {
    /// Fraction of the k nearest training points labeled 1. Distance ties
    /// break by training index, so prediction is order-deterministic.
    pub fn probability(&self, row: &[f64]) -> f64 {
        let mut dist: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d2: f64 = p.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let ones = dist[..self.k]
            .iter()
            .filter(|&&(_, i)| self.labels[i] == 1)
            .count();
        ones as f64 / self.k as f64
    }
}
