//! Reference baselines: a feature-blind seeded random scorer and a
//! single-feature decision stump.

/// Random baseline. Learns nothing; scores each instance by hashing the
/// seed together with the feature bits, so repeated prediction of the same
/// instance is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomBaseline {
    seed: u64,
}

pub fn fit_random_baseline(seed: u64) -> RandomBaseline {
    RandomBaseline { seed }
}

impl RandomBaseline {
    /// Uniform in [0, 1), deterministic per (seed, features).
    pub fn probability(&self, row: &[f64]) -> f64 {
        let mut h = 0xcbf29ce484222325u64 ^ self.seed;
        let mut mix = |byte: u8| {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x100000001b3);
        };
        for v in row {
            for byte in v.to_bits().to_le_bytes() {
                mix(byte);
            }
        }
        // Top 53 bits give a uniform dyadic in [0, 1).
        (h >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// One-rule baseline: the single (feature, threshold) stump with the fewest
/// training misclassifications. Ties keep the first feature and the lowest
/// threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct OneRuleModel {
    /// None when no feature admits a split (all constant).
    stump: Option<Stump>,
    /// Fallback probability: overall training label-1 fraction.
    base_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Stump {
    feature: usize,
    threshold: f64,
    /// Label-1 fraction on each side of the threshold.
    p_low: f64,
    p_high: f64,
}

pub fn fit_one_rule(x: &[Vec<f64>], y: &[u8]) -> OneRuleModel {
    let n = x.len();
    let d = x.first().map_or(0, Vec::len);
    let total_pos = y.iter().filter(|&&l| l == 1).count();
    let base_rate = total_pos as f64 / n as f64;

    let mut best: Option<(usize, usize, f64, f64, f64)> = None;
    for feature in 0..d {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]).then(a.cmp(&b)));
        let mut left_pos = 0usize;
        for (count, window) in order.windows(2).enumerate() {
            let left_n = count + 1;
            if y[window[0]] == 1 {
                left_pos += 1;
            }
            let (lo, hi) = (x[window[0]][feature], x[window[1]][feature]);
            if lo == hi {
                continue;
            }
            let right_n = n - left_n;
            let right_pos = total_pos - left_pos;
            let errors = left_pos.min(left_n - left_pos) + right_pos.min(right_n - right_pos);
            if best.is_none_or(|(e, ..)| errors < e) {
                best = Some((
                    errors,
                    feature,
                    lo + (hi - lo) / 2.0,
                    left_pos as f64 / left_n as f64,
                    right_pos as f64 / right_n as f64,
                ));
            }
        }
    }

    OneRuleModel {
        stump: best.map(|(_, feature, threshold, p_low, p_high)| Stump {
            feature,
            threshold,
            p_low,
            p_high,
        }),
        base_rate,
    }
}

impl OneRuleModel {
    pub fn probability(&self, row: &[f64]) -> f64 {
        match &self.stump {
            Some(s) => {
                if row[s.feature] <= s.threshold {
                    s.p_low
                } else {
                    s.p_high
                }
            }
            None => self.base_rate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_baseline_is_reproducible_and_feature_hashed() {
        let model = fit_random_baseline(7);
        let p = model.probability(&[1.0, 2.0]);
        assert_eq!(p, model.probability(&[1.0, 2.0]));
        assert!((0.0..1.0).contains(&p));
        let other_seed = fit_random_baseline(8);
        assert_ne!(p, other_seed.probability(&[1.0, 2.0]));
    }

    #[test]
    fn random_baseline_is_roughly_uniform() {
        let model = fit_random_baseline(3);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|i| model.probability(&[f64::from(i)]))
            .sum::<f64>()
            / f64::from(n);
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn one_rule_finds_a_perfect_split() {
        // Second feature separates perfectly; first is noise.
        let x = vec![
            vec![5.0, 0.0],
            vec![1.0, 0.0],
            vec![4.0, 3.0],
            vec![2.0, 3.0],
        ];
        let y = vec![0, 0, 1, 1];
        let model = fit_one_rule(&x, &y);
        assert_eq!(model.probability(&[9.0, 0.5]), 0.0);
        assert_eq!(model.probability(&[0.0, 2.0]), 1.0);
    }

    #[test]
    fn one_rule_constant_features_fall_back_to_base_rate() {
        let x = vec![vec![1.0], vec![1.0], vec![1.0], vec![1.0]];
        let y = vec![1, 0, 0, 0];
        let model = fit_one_rule(&x, &y);
        assert_eq!(model.probability(&[1.0]), 0.25);
    }

    #[test]
    fn one_rule_tie_prefers_first_feature() {
        let x = vec![vec![0.0, 10.0], vec![1.0, 20.0]];
        let y = vec![0, 1];
        let model = fit_one_rule(&x, &y);
        let s = model.stump.as_ref().unwrap();
        assert_eq!(s.feature, 0);
        assert_eq!(s.threshold, 0.5);
    }
}
