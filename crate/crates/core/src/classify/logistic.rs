//! Logistic regression trained by batch gradient descent with an L1 or L2
//! penalty on the weights (never the bias).

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Penalty {
    L1,
    L2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticModel {
    pub fn probability(&self, row: &[f64]) -> f64 {
        let z: f64 = self
            .weights
            .iter()
            .zip(row)
            .map(|(w, x)| w * x)
            .sum::<f64>()
            + self.bias;
        sigmoid(z)
    }
}

/// Mean log-loss plus the penalty term, as minimized by [`fit_logistic`].
pub fn penalized_loss(
    weights: &[f64],
    bias: f64,
    x: &[Vec<f64>],
    y: &[u8],
    penalty: Penalty,
    lambda: f64,
) -> f64 {
    let n = x.len() as f64;
    let mut loss = 0.0;
    for (row, &label) in x.iter().zip(y) {
        let z: f64 = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + bias;
        // log(1 + e^z) - t·z, computed stably for large |z|.
        let softplus = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
        loss += softplus - f64::from(label) * z;
    }
    loss /= n;
    let reg: f64 = match penalty {
        Penalty::L2 => 0.5 * lambda * weights.iter().map(|w| w * w).sum::<f64>(),
        Penalty::L1 => lambda * weights.iter().map(|w| w.abs()).sum::<f64>(),
    };
    loss + reg
}

/// Gradient of [`penalized_loss`] in (weights, bias). The L1 term uses the
/// sign subgradient, 0 at exactly 0.
pub fn gradient(
    weights: &[f64],
    bias: f64,
    x: &[Vec<f64>],
    y: &[u8],
    penalty: Penalty,
    lambda: f64,
) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (row, &label) in x.iter().zip(y) {
        let z: f64 = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + bias;
        let err = sigmoid(z) - f64::from(label);
        for (g, v) in gw.iter_mut().zip(row) {
            *g += err * v;
        }
        gb += err;
    }
    for g in &mut gw {
        *g /= n;
    }
    gb /= n;
    for (g, w) in gw.iter_mut().zip(weights) {
        *g += match penalty {
            Penalty::L2 => lambda * w,
            Penalty::L1 => lambda * w.signum() * f64::from(*w != 0.0),
        };
    }
    (gw, gb)
}

/// Full-batch gradient descent from zero weights for a fixed epoch count.
pub fn fit_logistic(
    x: &[Vec<f64>],
    y: &[u8],
    penalty: Penalty,
    lambda: f64,
    rate: f64,
    epochs: usize,
) -> LogisticModel {
    let d = x.first().map_or(0, Vec::len);
    let mut weights = vec![0.0; d];
    let mut bias = 0.0;
    for _ in 0..epochs {
        let (gw, gb) = gradient(&weights, bias, x, y, penalty, lambda);
        for (w, g) in weights.iter_mut().zip(&gw) {
            *w -= rate * g;
        }
        bias -= rate * gb;
    }
    LogisticModel { weights, bias }
}
