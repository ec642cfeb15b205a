//! Probability-grid export: the model's output over a 2-D slice of
//! feature space, for external decision-boundary plotting.

use linkassay::experiments::TransferRun;
use linkassay::report::fmt_full;

use crate::Failure;

fn column_range(fdm: &linkassay::features::Fdm, col: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in fdm.rows() {
        lo = lo.min(row[col]);
        hi = hi.max(row[col]);
    }
    if lo >= hi {
        // Constant column: a flat axis still deserves a visible span.
        (lo - 0.5, lo + 0.5)
    } else {
        (lo, hi)
    }
}

fn column_means(fdm: &linkassay::features::Fdm) -> Vec<f64> {
    let mut sums = vec![0.0; fdm.n_features()];
    for row in fdm.rows() {
        for (s, x) in sums.iter_mut().zip(row) {
            *s += x;
        }
    }
    let n = fdm.n_instances().max(1) as f64;
    sums.iter_mut().for_each(|s| *s /= n);
    sums
}

/// Renders a `steps` x `steps` probability grid over two named features.
/// Axis ranges come from the test FDM; the remaining features sit at their
/// training means.
pub(crate) fn grid_table(run: &TransferRun, spec: &str, steps: usize) -> Result<String, Failure> {
    if steps < 2 {
        return Err(Failure::Usage("--grid-steps must be at least 2".to_owned()));
    }
    let names: Vec<&str> = spec
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let [x_name, y_name] = names[..] else {
        return Err(Failure::Usage(format!(
            "--grid takes exactly two feature names, got `{spec}`"
        )));
    };
    let columns = run.test.columns();
    let find = |name: &str| -> Result<usize, Failure> {
        columns.iter().position(|c| c == name).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown grid feature `{name}` (available: {})",
                columns.join(", ")
            ))
        })
    };
    let cx = find(x_name)?;
    let cy = find(y_name)?;
    if cx == cy {
        return Err(Failure::Usage("grid features must differ".to_owned()));
    }

    let (x_lo, x_hi) = column_range(&run.test, cx);
    let (y_lo, y_hi) = column_range(&run.test, cy);
    let mut base = column_means(&run.train);
    let mut out = format!("{x_name}\t{y_name}\tprobability\n");
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (steps - 1) as f64;
    for i in 0..steps {
        for j in 0..steps {
            let x = step(x_lo, x_hi, i);
            let y = step(y_lo, y_hi, j);
            base[cx] = x;
            base[cy] = y;
            let p = run.model.predict_probability(&base)?;
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                fmt_full(x),
                fmt_full(y),
                fmt_full(p)
            ));
        }
    }
    Ok(out)
}
