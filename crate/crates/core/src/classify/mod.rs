//! From-scratch binary classifiers behind a single spec/fit/predict API.
//!
//! Every model standardizes features with training-set statistics before
//! fitting, exposes a probability of class 1, and derives its class output
//! by thresholding that probability. Fitting and prediction are fully
//! deterministic; the only randomness is the seeded hash inside
//! [`baseline::RandomBaseline`].

pub mod baseline;
pub mod kfold;
pub mod knn;
pub mod logistic;
pub mod naive_bayes;
pub mod standardize;
pub mod svm;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::features::Fdm;

pub use kfold::{cross_validate, kfold_split};
pub use logistic::Penalty;
pub use standardize::Scaler;

/// Classifier family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LogisticRegression,
    GaussianNb,
    Knn,
    DecisionTree,
    SvmRbf,
    RandomBaseline,
    OneRuleBaseline,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::LogisticRegression,
        ModelKind::GaussianNb,
        ModelKind::Knn,
        ModelKind::DecisionTree,
        ModelKind::SvmRbf,
        ModelKind::RandomBaseline,
        ModelKind::OneRuleBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LogisticRegression => "logistic_regression",
            ModelKind::GaussianNb => "gaussian_nb",
            ModelKind::Knn => "knn",
            ModelKind::DecisionTree => "decision_tree",
            ModelKind::SvmRbf => "svm_rbf",
            ModelKind::RandomBaseline => "random_baseline",
            ModelKind::OneRuleBaseline => "one_rule_baseline",
        }
    }

    fn is_baseline(self) -> bool {
        matches!(self, ModelKind::RandomBaseline | ModelKind::OneRuleBaseline)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModelKind> {
        match s.to_ascii_lowercase().as_str() {
            "lr" | "logistic" | "logistic_regression" => Ok(ModelKind::LogisticRegression),
            "nb" | "gaussian_nb" | "naive_bayes" => Ok(ModelKind::GaussianNb),
            "kn" | "knn" => Ok(ModelKind::Knn),
            "dt" | "tree" | "decision_tree" => Ok(ModelKind::DecisionTree),
            "svm" | "svm_rbf" => Ok(ModelKind::SvmRbf),
            "random" | "random_baseline" => Ok(ModelKind::RandomBaseline),
            "oner" | "one_rule" | "one_rule_baseline" => Ok(ModelKind::OneRuleBaseline),
            other => Err(Error::InvalidInput(format!("unknown model kind `{other}`"))),
        }
    }
}

/// A classifier choice plus every hyperparameter, with conventional
/// defaults. Fields irrelevant to the chosen kind are carried but unused.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub knn_k: usize,
    pub svm_c: f64,
    /// RBF kernel width; `None` resolves to 1 / feature count at fit time.
    pub svm_gamma: Option<f64>,
    pub penalty: Penalty,
    pub lr_lambda: f64,
    pub lr_rate: f64,
    pub lr_epochs: usize,
    pub tree_max_depth: usize,
    pub tree_min_leaf: usize,
    /// predict_class is 1 exactly when the probability reaches this value.
    pub threshold: f64,
    /// Consumed by the random baseline only.
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> ModelSpec {
        ModelSpec {
            kind,
            knn_k: 5,
            svm_c: 1.0,
            svm_gamma: None,
            penalty: Penalty::L2,
            lr_lambda: 1e-4,
            lr_rate: 0.1,
            lr_epochs: 500,
            tree_max_depth: 8,
            tree_min_leaf: 5,
            threshold: 0.5,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("model spec: {what}")));
        if self.knn_k == 0 {
            return bad("k must be at least 1");
        }
        if !(self.svm_c > 0.0) {
            return bad("c must be positive");
        }
        if let Some(g) = self.svm_gamma {
            if !(g > 0.0) {
                return bad("gamma must be positive");
            }
        }
        if !(self.lr_lambda >= 0.0) {
            return bad("lambda must be non-negative");
        }
        if !(self.lr_rate > 0.0) {
            return bad("rate must be positive");
        }
        if self.lr_epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.tree_max_depth == 0 {
            return bad("max_depth must be at least 1");
        }
        if self.tree_min_leaf == 0 {
            return bad("min_leaf must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return bad("threshold must be in [0, 1]");
        }
        Ok(())
    }

    /// Parses `<kind> [key=value]...` with tokens split on whitespace or
    /// commas. Keys: k, c, gamma (number or `auto`), penalty (l1/l2),
    /// lambda, rate, epochs, max_depth, min_leaf, threshold, seed.
    pub fn parse_config(text: &str) -> Result<ModelSpec> {
        let mut tokens = text
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|t| !t.is_empty());
        let kind_token = tokens
            .next()
            .ok_or_else(|| Error::InvalidInput("empty model config".to_owned()))?;
        let mut spec = ModelSpec::new(kind_token.parse()?);
        for token in tokens {
            let (key, value) = token.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("model config token `{token}` is not key=value"))
            })?;
            let num = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad numeric value `{v}` for `{key}`")))
            };
            let int = |v: &str| -> Result<usize> {
                v.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad integer value `{v}` for `{key}`")))
            };
            match key {
                "k" => spec.knn_k = int(value)?,
                "c" => spec.svm_c = num(value)?,
                "gamma" => {
                    spec.svm_gamma = if value == "auto" { None } else { Some(num(value)?) }
                }
                "penalty" => {
                    spec.penalty = match value {
                        "l1" => Penalty::L1,
                        "l2" => Penalty::L2,
                        other => {
                            return Err(Error::InvalidInput(format!(
                                "penalty must be l1 or l2, got `{other}`"
                            )))
                        }
                    }
                }
                "lambda" => spec.lr_lambda = num(value)?,
                "rate" => spec.lr_rate = num(value)?,
                "epochs" => spec.lr_epochs = int(value)?,
                "max_depth" => spec.tree_max_depth = int(value)?,
                "min_leaf" => spec.tree_min_leaf = int(value)?,
                "threshold" => spec.threshold = num(value)?,
                "seed" => {
                    spec.seed = value.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad seed value `{value}`"))
                    })?
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown model config key `{other}`"
                    )))
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical config text; `parse_config` round-trips it exactly.
    pub fn to_config(&self) -> String {
        let gamma = match self.svm_gamma {
            Some(g) => g.to_string(),
            None => "auto".to_owned(),
        };
        let penalty = match self.penalty {
            Penalty::L1 => "l1",
            Penalty::L2 => "l2",
        };
        format!(
            "{} k={} c={} gamma={} penalty={} lambda={} rate={} epochs={} max_depth={} min_leaf={} threshold={} seed={}",
            self.kind,
            self.knn_k,
            self.svm_c,
            gamma,
            penalty,
            self.lr_lambda,
            self.lr_rate,
            self.lr_epochs,
            self.tree_max_depth,
            self.tree_min_leaf,
            self.threshold,
            self.seed,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Fitted {
    Logistic(logistic::LogisticModel),
    NaiveBayes(naive_bayes::NaiveBayesModel),
    Knn(knn::KnnModel),
    Tree(tree::TreeModel),
    Svm(svm::SvmModel),
    Random(baseline::RandomBaseline),
    OneRule(baseline::OneRuleModel),
}

/// A fitted classifier. Immutable; prediction is deterministic and safe to
/// call concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    spec: ModelSpec,
    scaler: Scaler,
    inner: Fitted,
}

/// Fits a model on an FDM's features and labels.
pub fn fit(spec: &ModelSpec, train: &Fdm) -> Result<TrainedModel> {
    let x: Vec<Vec<f64>> = train.rows().map(<[f64]>::to_vec).collect();
    fit_xy(spec, x, train.labels().to_vec())
}

/// Fits a model on a raw feature matrix. Exposed for synthetic-data tests;
/// [`fit`] is the FDM-facing entry point.
pub fn fit_xy(spec: &ModelSpec, x: Vec<Vec<f64>>, y: Vec<u8>) -> Result<TrainedModel> {
    spec.validate()?;
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "training data has {} rows and {} labels",
            x.len(),
            y.len()
        )));
    }
    let width = x[0].len();
    if x.iter().any(|row| row.len() != width) {
        return Err(Error::InvalidInput("ragged feature matrix".to_owned()));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite feature value".to_owned()));
    }
    if y.iter().any(|&l| l > 1) {
        return Err(Error::InvalidInput("labels must be 0 or 1".to_owned()));
    }
    let single_class = y.iter().all(|&l| l == y[0]);
    if single_class && !spec.kind.is_baseline() {
        return Err(Error::SingleClass);
    }

    let scaler = Scaler::fit(&x);
    let xs = scaler.transform(&x);
    let inner = match spec.kind {
        ModelKind::LogisticRegression => Fitted::Logistic(logistic::fit_logistic(
            &xs,
            &y,
            spec.penalty,
            spec.lr_lambda,
            spec.lr_rate,
            spec.lr_epochs,
        )),
        ModelKind::GaussianNb => Fitted::NaiveBayes(naive_bayes::fit_naive_bayes(&xs, &y)),
        ModelKind::Knn => Fitted::Knn(knn::fit_knn(xs, y, spec.knn_k)),
        ModelKind::DecisionTree => Fitted::Tree(tree::fit_tree(
            &xs,
            &y,
            spec.tree_max_depth,
            spec.tree_min_leaf,
        )),
        ModelKind::SvmRbf => {
            let gamma = spec.svm_gamma.unwrap_or(1.0 / width as f64);
            Fitted::Svm(svm::fit_svm(&xs, &y, spec.svm_c, gamma))
        }
        ModelKind::RandomBaseline => Fitted::Random(baseline::fit_random_baseline(spec.seed)),
        ModelKind::OneRuleBaseline => Fitted::OneRule(baseline::fit_one_rule(&xs, &y)),
    };
    Ok(TrainedModel {
        spec: spec.clone(),
        scaler,
        inner,
    })
}

impl TrainedModel {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn n_features(&self) -> usize {
        self.scaler.n_features()
    }

    fn check_width(&self, got: usize) -> Result<()> {
        if got == self.n_features() {
            Ok(())
        } else {
            Err(Error::SchemaMismatch {
                got,
                expected: self.n_features(),
            })
        }
    }

    /// Probability of class 1 for one raw (unstandardized) feature row.
    pub fn predict_probability(&self, features: &[f64]) -> Result<f64> {
        self.check_width(features.len())?;
        let row = self.scaler.transform_row(features);
        let p = match &self.inner {
            Fitted::Logistic(m) => m.probability(&row),
            Fitted::NaiveBayes(m) => m.probability(&row),
            Fitted::Knn(m) => m.probability(&row),
            Fitted::Tree(m) => m.probability(&row),
            Fitted::Svm(m) => m.probability(&row),
            Fitted::Random(m) => m.probability(&row),
            Fitted::OneRule(m) => m.probability(&row),
        };
        Ok(p.clamp(0.0, 1.0))
    }

    pub fn predict_class(&self, features: &[f64]) -> Result<u8> {
        Ok(u8::from(self.predict_probability(features)? >= self.spec.threshold))
    }

    /// Probabilities for every instance of an FDM, in instance order.
    pub fn predict_fdm(&self, fdm: &Fdm, mode: ExecMode) -> Result<Vec<f64>> {
        self.check_width(fdm.n_features())?;
        let probs = map_indexed(mode, fdm.n_instances(), |i| {
            self.predict_probability(fdm.row(i)).expect("width was checked")
        });
        Ok(probs)
    }

    pub fn classes_from_probabilities(&self, probs: &[f64]) -> Vec<u8> {
        probs.iter().map(|&p| u8::from(p >= self.spec.threshold)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::build_fdm;
    use crate::graph::Network;

    #[test]
    fn kind_aliases_parse() {
        for (alias, kind) in [
            ("kn", ModelKind::Knn),
            ("svm", ModelKind::SvmRbf),
            ("dt", ModelKind::DecisionTree),
            ("nb", ModelKind::GaussianNb),
            ("lr", ModelKind::LogisticRegression),
            ("random_baseline", ModelKind::RandomBaseline),
            ("one_rule", ModelKind::OneRuleBaseline),
        ] {
            assert_eq!(alias.parse::<ModelKind>().unwrap(), kind);
        }
        assert!("gbm".parse::<ModelKind>().is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = "svm_rbf c=10 gamma=0.25 threshold=0.4 seed=9";
        let spec = ModelSpec::parse_config(text).unwrap();
        assert_eq!(spec.kind, ModelKind::SvmRbf);
        assert_eq!(spec.svm_c, 10.0);
        assert_eq!(spec.svm_gamma, Some(0.25));
        assert_eq!(spec.threshold, 0.4);
        assert_eq!(spec.seed, 9);
        let round = ModelSpec::parse_config(&spec.to_config()).unwrap();
        assert_eq!(round, spec);

        // Commas work as separators too.
        let commas = ModelSpec::parse_config("knn,k=3").unwrap();
        assert_eq!(commas.knn_k, 3);

        assert!(ModelSpec::parse_config("svm c=-1").is_err());
        assert!(ModelSpec::parse_config("svm bogus=1").is_err());
        assert!(ModelSpec::parse_config("svm c").is_err());
        assert!(ModelSpec::parse_config("").is_err());
    }

    fn tiny_fdm() -> Fdm {
        let net = Network::from_edges("s", false, &[("a", "b"), ("b", "c"), ("c", "d")]);
        build_fdm(&net, false, ExecMode::Sequential).unwrap()
    }

    #[test]
    fn fit_rejects_bad_input() {
        let spec = ModelSpec::new(ModelKind::GaussianNb);
        assert!(matches!(
            fit_xy(&spec, vec![vec![1.0], vec![2.0]], vec![1, 1]),
            Err(Error::SingleClass)
        ));
        assert!(fit_xy(&spec, vec![vec![f64::NAN]], vec![1]).is_err());
        assert!(fit_xy(&spec, vec![], vec![]).is_err());
        assert!(fit_xy(&spec, vec![vec![1.0], vec![2.0]], vec![0, 2]).is_err());

        // Baselines accept single-class data.
        let base = ModelSpec::new(ModelKind::RandomBaseline);
        assert!(fit_xy(&base, vec![vec![1.0], vec![2.0]], vec![1, 1]).is_ok());
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let model = fit(&ModelSpec::new(ModelKind::GaussianNb), &tiny_fdm()).unwrap();
        assert!(matches!(
            model.predict_probability(&[1.0, 2.0]),
            Err(Error::SchemaMismatch { got: 2, expected: 9 })
        ));
    }

    #[test]
    fn every_kind_fits_and_scores_the_fdm() {
        let fdm = tiny_fdm();
        for kind in ModelKind::ALL {
            let model = fit(&ModelSpec::new(kind), &fdm).unwrap();
            let probs = model.predict_fdm(&fdm, ExecMode::Sequential).unwrap();
            assert_eq!(probs.len(), fdm.n_instances());
            assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)), "{kind}: {probs:?}");
        }
    }

    #[test]
    fn class_output_thresholds_probability() {
        let fdm = tiny_fdm();
        let mut spec = ModelSpec::new(ModelKind::RandomBaseline);
        spec.threshold = 1.0;
        let never = fit(&spec, &fdm).unwrap();
        spec.threshold = 0.0;
        let always = fit(&spec, &fdm).unwrap();
        for i in 0..fdm.n_instances() {
            assert_eq!(never.predict_class(fdm.row(i)).unwrap(), 0);
            assert_eq!(always.predict_class(fdm.row(i)).unwrap(), 1);
        }
    }

    #[test]
    fn knn_probability_matches_definition_through_the_api() {
        let x = vec![vec![0.0], vec![0.1], vec![0.2], vec![0.3], vec![10.0], vec![11.0]];
        let y = vec![1, 1, 1, 0, 0, 0];
        let mut spec = ModelSpec::new(ModelKind::Knn);
        spec.knn_k = 5;
        let model = fit_xy(&spec, x, y).unwrap();
        assert_eq!(model.predict_probability(&[0.0]).unwrap(), 0.6);
    }
}
