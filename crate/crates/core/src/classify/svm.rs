//! RBF-kernel support vector machine trained by sequential minimal
//! optimization, with a Platt-style sigmoid fitted on training decision
//! values for probability output.
//!
//! The SMO working-pair heuristics are the classic ones (max |E1 - E2|
//! second choice, then sweeps over non-bound and all points) but every
//! sweep runs in ascending index order instead of from a random start, so
//! training is deterministic.

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    /// Support vectors (standardized rows).
    sv: Vec<Vec<f64>>,
    /// Per support vector: alpha_i * y_i with y in {-1, +1}.
    coef: Vec<f64>,
    bias: f64,
    gamma: f64,
    /// Platt sigmoid: P(1|f) = 1 / (1 + exp(a*f + b)).
    platt_a: f64,
    platt_b: f64,
}

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

/// Shared solver state. `x` rows are already standardized.
struct Smo<'a> {
    x: &'a [Vec<f64>],
    y: Vec<f64>,
    c: f64,
    gamma: f64,
    tol: f64,
    alpha: Vec<f64>,
    bias: f64,
    /// err[i] = f(x_i) - y_i, maintained incrementally.
    err: Vec<f64>,
    /// Full kernel matrix when it fits in memory, row-major.
    cache: Option<Vec<f64>>,
    /// Dual objective after each successful step; filled only when tracing.
    trace: Option<Vec<f64>>,
}

const EPS: f64 = 1e-12;
const CACHE_LIMIT: usize = 8_000_000;

impl<'a> Smo<'a> {
    fn new(x: &'a [Vec<f64>], labels: &[u8], c: f64, gamma: f64, tol: f64, trace: bool) -> Self {
        let n = x.len();
        let y: Vec<f64> = labels.iter().map(|&t| if t == 1 { 1.0 } else { -1.0 }).collect();
        let cache = if n * n <= CACHE_LIMIT {
            let mut k = vec![0.0; n * n];
            for i in 0..n {
                k[i * n + i] = 1.0;
                for j in i + 1..n {
                    let v = rbf(&x[i], &x[j], gamma);
                    k[i * n + j] = v;
                    k[j * n + i] = v;
                }
            }
            Some(k)
        } else {
            None
        };
        // With all alphas 0 and bias 0, f(x_i) = 0 and E_i = -y_i.
        let err = y.iter().map(|&v| -v).collect();
        Smo {
            x,
            y,
            c,
            gamma,
            tol,
            alpha: vec![0.0; n],
            bias: 0.0,
            err,
            cache,
            trace: if trace { Some(Vec::new()) } else { None },
        }
    }

    fn k(&self, i: usize, j: usize) -> f64 {
        match &self.cache {
            Some(k) => k[i * self.x.len() + j],
            None => rbf(&self.x[i], &self.x[j], self.gamma),
        }
    }

    fn dual_objective(&self) -> f64 {
        let n = self.x.len();
        let mut quad = 0.0;
        for i in 0..n {
            if self.alpha[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if self.alpha[j] == 0.0 {
                    continue;
                }
                quad += self.alpha[i] * self.alpha[j] * self.y[i] * self.y[j] * self.k(i, j);
            }
        }
        self.alpha.iter().sum::<f64>() - 0.5 * quad
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1_old, a2_old) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.err[i1], self.err[i2]);
        let s = y1 * y2;
        let (lo, hi) = if s < 0.0 {
            ((a2_old - a1_old).max(0.0), (self.c + a2_old - a1_old).min(self.c))
        } else {
            ((a1_old + a2_old - self.c).max(0.0), (a1_old + a2_old).min(self.c))
        };
        if lo >= hi {
            return false;
        }
        let k11 = self.k(i1, i1);
        let k12 = self.k(i1, i2);
        let k22 = self.k(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;
        let mut a2 = if eta > 0.0 {
            (a2_old + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // Degenerate curvature: evaluate the objective at both ends.
            let f1 = y1 * e1 - a1_old * k11 - s * a2_old * k12;
            let f2 = y2 * e2 - s * a1_old * k12 - a2_old * k22;
            let l1 = a1_old + s * (a2_old - lo);
            let h1 = a1_old + s * (a2_old - hi);
            let lobj = l1 * f1 + lo * f2
                + 0.5 * l1 * l1 * k11
                + 0.5 * lo * lo * k22
                + s * lo * l1 * k12;
            let hobj = h1 * f1 + hi * f2
                + 0.5 * h1 * h1 * k11
                + 0.5 * hi * hi * k22
                + s * hi * h1 * k12;
            if lobj < hobj - EPS {
                lo
            } else if lobj > hobj + EPS {
                hi
            } else {
                a2_old
            }
        };
        if (a2 - a2_old).abs() < EPS * (a2 + a2_old + EPS) {
            return false;
        }
        let mut a1 = a1_old + s * (a2_old - a2);
        // Clamp tiny numeric overshoots back into the box.
        if a1 < 0.0 {
            a2 += s * a1;
            a1 = 0.0;
        } else if a1 > self.c {
            a2 += s * (a1 - self.c);
            a1 = self.c;
        }

        let d1 = y1 * (a1 - a1_old);
        let d2 = y2 * (a2 - a2_old);
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let new_bias = if a1 > 0.0 && a1 < self.c {
            b1
        } else if a2 > 0.0 && a2 < self.c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        let db = new_bias - self.bias;
        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        self.bias = new_bias;
        for i in 0..self.x.len() {
            self.err[i] += d1 * self.k(i1, i) + d2 * self.k(i2, i) + db;
        }
        if self.trace.is_some() {
            let obj = self.dual_objective();
            self.trace.as_mut().expect("checked above").push(obj);
        }
        true
    }

    fn non_bound(&self) -> Vec<usize> {
        (0..self.alpha.len())
            .filter(|&i| self.alpha[i] > 0.0 && self.alpha[i] < self.c)
            .collect()
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let r2 = self.err[i2] * y2;
        let violates = (r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0);
        if !violates {
            return false;
        }
        let non_bound = self.non_bound();
        if non_bound.len() > 1 {
            // Second-choice heuristic: maximize |E1 - E2|, lowest index wins
            // ties.
            let e2 = self.err[i2];
            let i1 = *non_bound
                .iter()
                .max_by(|&&a, &&b| {
                    (self.err[a] - e2)
                        .abs()
                        .total_cmp(&(self.err[b] - e2).abs())
                        .then(b.cmp(&a))
                })
                .unwrap();
            if self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in non_bound {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.x.len() {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn solve(&mut self) {
        let n = self.x.len();
        // Generous cap; normal runs converge far earlier. Guarantees
        // termination on pathological inputs.
        let max_steps = 200 * n.max(100);
        let mut steps = 0usize;
        let mut examine_all = true;
        let mut num_changed = 1usize;
        while (num_changed > 0 || examine_all) && steps < max_steps {
            num_changed = 0;
            let candidates: Vec<usize> = if examine_all {
                (0..n).collect()
            } else {
                self.non_bound()
            };
            for i in candidates {
                if self.examine(i) {
                    num_changed += 1;
                    steps += 1;
                    if steps >= max_steps {
                        break;
                    }
                }
            }
            if examine_all {
                examine_all = false;
            } else if num_changed == 0 {
                examine_all = true;
            }
        }
    }
}

/// Decision value f(x) = sum_i alpha_i y_i K(x_i, x) + b.
pub fn decision_value(model: &SvmModel, row: &[f64]) -> f64 {
    model
        .sv
        .iter()
        .zip(&model.coef)
        .map(|(sv, c)| c * rbf(sv, row, model.gamma))
        .sum::<f64>()
        + model.bias
}

impl SvmModel {
    pub fn probability(&self, row: &[f64]) -> f64 {
        let f = decision_value(self, row);
        let z = self.platt_a * f + self.platt_b;
        if z >= 0.0 {
            (-z).exp() / (1.0 + (-z).exp())
        } else {
            1.0 / (1.0 + z.exp())
        }
    }

    pub fn support_vector_count(&self) -> usize {
        self.sv.len()
    }
}

/// Sigmoid calibration on training decision values, after Platt with the
/// numerically robust Newton iteration of Lin, Lucent, and Weng.
fn fit_platt(decision: &[f64], labels: &[u8]) -> (f64, f64) {
    let n1 = labels.iter().filter(|&&t| t == 1).count() as f64;
    let n0 = labels.len() as f64 - n1;
    let hi = (n1 + 1.0) / (n1 + 2.0);
    let lo = 1.0 / (n0 + 2.0);
    let t: Vec<f64> = labels.iter().map(|&l| if l == 1 { hi } else { lo }).collect();

    let objective = |a: f64, b: f64| -> f64 {
        decision
            .iter()
            .zip(&t)
            .map(|(&f, &ti)| {
                let z = a * f + b;
                if z >= 0.0 {
                    ti * z + (-z).exp().ln_1p()
                } else {
                    (ti - 1.0) * z + z.exp().ln_1p()
                }
            })
            .sum()
    };

    let mut a = 0.0;
    let mut b = ((n0 + 1.0) / (n1 + 1.0)).ln();
    let mut obj = objective(a, b);
    let sigma = 1e-12;
    for _ in 0..100 {
        let (mut h11, mut h22, mut h12) = (sigma, sigma, 0.0);
        let (mut g1, mut g2) = (0.0, 0.0);
        for (&f, &ti) in decision.iter().zip(&t) {
            let z = a * f + b;
            let p = if z >= 0.0 {
                (-z).exp() / (1.0 + (-z).exp())
            } else {
                1.0 / (1.0 + z.exp())
            };
            let q = 1.0 - p;
            let d2 = p * q;
            h11 += f * f * d2;
            h22 += d2;
            h12 += f * d2;
            let d1 = ti - p;
            g1 += f * d1;
            g2 += d1;
        }
        if g1.abs() < 1e-5 && g2.abs() < 1e-5 {
            break;
        }
        let det = h11 * h22 - h12 * h12;
        let da = -(h22 * g1 - h12 * g2) / det;
        let db = -(-h12 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        // Backtracking line search on the calibration objective.
        let mut improved = false;
        while step >= 1e-10 {
            let (na, nb) = (a + step * da, b + step * db);
            let nobj = objective(na, nb);
            if nobj < obj + 1e-4 * step * gd {
                a = na;
                b = nb;
                obj = nobj;
                improved = true;
                break;
            }
            step /= 2.0;
        }
        if !improved {
            break;
        }
    }
    (a, b)
}

/// Training output plus SMO diagnostics used by tests.
pub struct SvmDiagnostics {
    /// Largest KKT violation at the returned solution.
    pub kkt_residual: f64,
    /// Dual objective after every successful optimization step.
    pub objective_trace: Vec<f64>,
}

pub fn fit_svm(x: &[Vec<f64>], y: &[u8], c: f64, gamma: f64) -> SvmModel {
    fit_svm_impl(x, y, c, gamma, false).0
}

/// As [`fit_svm`] but also reports convergence diagnostics. Tracing
/// recomputes the dual objective after every step; use on small inputs only.
pub fn fit_svm_traced(x: &[Vec<f64>], y: &[u8], c: f64, gamma: f64) -> (SvmModel, SvmDiagnostics) {
    let (model, diag) = fit_svm_impl(x, y, c, gamma, true);
    (model, diag.expect("tracing was requested"))
}

fn fit_svm_impl(
    x: &[Vec<f64>],
    y: &[u8],
    c: f64,
    gamma: f64,
    trace: bool,
) -> (SvmModel, Option<SvmDiagnostics>) {
    let tol = 1e-4;
    let mut smo = Smo::new(x, y, c, gamma, tol, trace);
    smo.solve();

    let diag = trace.then(|| {
        let mut residual: f64 = 0.0;
        for i in 0..x.len() {
            // err = f - y, so y*f - 1 = y*err for labels in {-1, +1}.
            let margin = smo.y[i] * smo.err[i] + 1.0;
            let v = if smo.alpha[i] <= 0.0 {
                (1.0 - margin).max(0.0)
            } else if smo.alpha[i] >= smo.c {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            };
            residual = residual.max(v);
        }
        SvmDiagnostics {
            kkt_residual: residual,
            objective_trace: smo.trace.clone().unwrap_or_default(),
        }
    });

    // Training decision values follow from the maintained errors.
    let decision: Vec<f64> = smo.err.iter().zip(&smo.y).map(|(e, y)| e + y).collect();
    let (platt_a, platt_b) = fit_platt(&decision, y);

    let mut sv = Vec::new();
    let mut coef = Vec::new();
    for i in 0..x.len() {
        if smo.alpha[i] > 0.0 {
            sv.push(x[i].clone());
            coef.push(smo.alpha[i] * smo.y[i]);
        }
    }
    (
        SvmModel {
            sv,
            coef,
            bias: smo.bias,
            gamma,
            platt_a,
            platt_b,
        },
        diag,
    )
}
