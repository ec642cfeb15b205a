//! Text serialization: key-value report records, delimited tables, FDM
//! exports, ROC curves, rankings, and the run ledger.
//!
//! Machine files render floats with Rust's shortest round-trip formatting,
//! so re-parsing reproduces every value bit for bit. Human tables round to
//! three decimals.

use std::fmt::Write as _;

use crate::dataset::SummaryRow;
use crate::error::{Error, Result};
use crate::features::Fdm;
use crate::metrics::{EvaluationReport, RocPoint};
use crate::ranking::RankingResult;

/// Placeholder for undefined metrics (single-class AUC).
pub const NA: &str = "NA";

/// Full-precision text for a float: the shortest string that parses back
/// to the identical bits.
pub fn fmt_full(x: f64) -> String {
    format!("{x}")
}

/// Three-decimal rendering for human tables.
pub fn fmt_human(x: f64) -> String {
    format!("{x:.3}")
}

fn fmt_opt(x: Option<f64>, f: impl Fn(f64) -> String) -> String {
    x.map_or_else(|| NA.to_owned(), f)
}

/// FNV-1a hash of a text, as 16 hex digits. Keys run-ledger rows.
pub fn hash_hex(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for byte in text.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Serializes a report as one `key<TAB>value` line per field.
pub fn report_kv(r: &EvaluationReport) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}\t{v}");
    };
    kv("train_source", r.train_source.clone());
    kv("test_source", r.test_source.clone());
    kv("model", r.model.clone());
    kv("seed", r.seed.to_string());
    kv("instances", r.confusion.total().to_string());
    kv("tp", r.confusion.tp.to_string());
    kv("fp", r.confusion.fp.to_string());
    kv("tn", r.confusion.tn.to_string());
    kv("fn", r.confusion.fn_.to_string());
    kv("accuracy", fmt_full(r.accuracy));
    kv("precision_weighted", fmt_full(r.weighted.precision));
    kv("recall_weighted", fmt_full(r.weighted.recall));
    kv("f_weighted", fmt_full(r.weighted.f1));
    kv("precision_positive", fmt_full(r.positive.precision));
    kv("recall_positive", fmt_full(r.positive.recall));
    kv("f_positive", fmt_full(r.positive.f1));
    kv("auc", fmt_opt(r.auc, fmt_full));
    kv("folds", r.folds.len().to_string());
    out
}

/// Parses a key-value record back into ordered pairs.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .filter(|line| !line.is_empty())
        .map(|line| {
            line.split_once('\t')
                .map(|(k, v)| (k.to_owned(), v.to_owned()))
                .ok_or_else(|| Error::InvalidInput(format!("malformed record line: {line}")))
        })
        .collect()
}

const REPORT_COLUMNS: [&str; 16] = [
    "train_source",
    "test_source",
    "model",
    "seed",
    "tp",
    "fp",
    "tn",
    "fn",
    "accuracy",
    "precision_weighted",
    "recall_weighted",
    "f_weighted",
    "precision_positive",
    "recall_positive",
    "f_positive",
    "auc",
];

fn report_row(r: &EvaluationReport, fmt: impl Fn(f64) -> String) -> String {
    [
        r.train_source.clone(),
        r.test_source.clone(),
        r.model.clone(),
        r.seed.to_string(),
        r.confusion.tp.to_string(),
        r.confusion.fp.to_string(),
        r.confusion.tn.to_string(),
        r.confusion.fn_.to_string(),
        fmt(r.accuracy),
        fmt(r.weighted.precision),
        fmt(r.weighted.recall),
        fmt(r.weighted.f1),
        fmt(r.positive.precision),
        fmt(r.positive.recall),
        fmt(r.positive.f1),
        fmt_opt(r.auc, &fmt),
    ]
    .join("\t")
}

/// One header plus one row per report, full precision.
pub fn report_table(reports: &[EvaluationReport]) -> String {
    let mut out = REPORT_COLUMNS.join("\t");
    out.push('\n');
    for r in reports {
        out.push_str(&report_row(r, fmt_full));
        out.push('\n');
    }
    out
}

/// The same table rounded for reading.
pub fn report_table_human(reports: &[EvaluationReport]) -> String {
    let mut out = REPORT_COLUMNS.join("\t");
    out.push('\n');
    for r in reports {
        out.push_str(&report_row(r, fmt_human));
        out.push('\n');
    }
    out
}

/// Per-fold breakdown of a cross-validated report; None when single-pass.
pub fn folds_table(r: &EvaluationReport) -> Option<String> {
    if r.folds.is_empty() {
        return None;
    }
    let mut out = String::from("fold\ttest_size\taccuracy\tf_weighted\tauc\n");
    for f in &r.folds {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            f.fold,
            f.test_size,
            fmt_full(f.metrics.accuracy),
            fmt_full(f.metrics.weighted.f1),
            fmt_opt(f.metrics.auc, fmt_full),
        );
    }
    Some(out)
}

/// Two-column ROC data for external plotting.
pub fn roc_table(points: &[RocPoint]) -> String {
    let mut out = String::from("fpr\ttpr\n");
    for p in points {
        let _ = writeln!(out, "{}\t{}", fmt_full(p.fpr), fmt_full(p.tpr));
    }
    out
}

/// Ranking entries in rank order, 1-based rank index.
pub fn ranking_table(r: &RankingResult) -> String {
    let mut out = String::from("node_u\tnode_v\te_obs\te_real\trank_index\n");
    for (i, e) in r.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.pair.0,
            e.pair.1,
            fmt_full(e.e_obs),
            e.e_real,
            i + 1
        );
    }
    out
}

/// Dataset summary rows: machine precision or, with `human`, the
/// three-decimal layout.
pub fn summary_table(rows: &[SummaryRow], human: bool) -> String {
    let fmt: fn(f64) -> String = if human { fmt_human } else { fmt_full };
    let mut out = String::from("network\tdirected\tn\tm\tavg_clustering\tdensity\toverlap_with_sn\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.id,
            row.directed,
            row.stats.n,
            row.stats.m,
            fmt(row.stats.avg_clustering),
            fmt(row.stats.density),
            row.overlap_with_sn
        );
    }
    out
}

/// FDM export: provenance comments, a header row, then one line per
/// instance. Aggregated FDMs carry a leading per-instance source column.
pub fn fdm_table(fdm: &Fdm) -> String {
    let aggregated = fdm.source() == "aggregated";
    let mut out = String::new();
    let _ = writeln!(out, "# source\t{}", fdm.source());
    let _ = writeln!(out, "# directed\t{}", fdm.directed());
    if aggregated {
        out.push_str("source\t");
    }
    out.push_str("node_u\tnode_v\t");
    out.push_str(&fdm.columns().join("\t"));
    out.push_str("\tlabel\n");
    for i in 0..fdm.n_instances() {
        if aggregated {
            out.push_str(&fdm.instance_sources()[i]);
            out.push('\t');
        }
        let (u, v) = &fdm.pairs()[i];
        out.push_str(u);
        out.push('\t');
        out.push_str(v);
        for x in fdm.row(i) {
            out.push('\t');
            out.push_str(&fmt_full(*x));
        }
        let _ = writeln!(out, "\t{}", fdm.labels()[i]);
    }
    out
}

/// Reads an FDM export back; exact inverse of [`fdm_table`].
pub fn parse_fdm(text: &str) -> Result<Fdm> {
    let bad = |msg: String| Error::InvalidInput(format!("fdm parse: {msg}"));
    let mut source = None;
    let mut directed = None;
    let mut header: Option<Vec<&str>> = None;
    let mut pairs = Vec::new();
    let mut sources = Vec::new();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut aggregated = false;
    let mut columns: Vec<String> = Vec::new();

    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let (key, value) = rest
                .split_once('\t')
                .ok_or_else(|| bad(format!("malformed comment: {line}")))?;
            match key {
                "source" => source = Some(value.to_owned()),
                "directed" => {
                    directed = Some(value.parse::<bool>().map_err(|_| {
                        bad(format!("directed flag must be true/false, got {value}"))
                    })?);
                }
                other => return Err(bad(format!("unknown comment key {other}"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let Some(header) = &header else {
            aggregated = fields.first() == Some(&"source");
            let skip = if aggregated { 3 } else { 2 };
            if fields.len() < skip + 1 || fields.last() != Some(&"label") {
                return Err(bad(format!("malformed header: {line}")));
            }
            columns = fields[skip..fields.len() - 1]
                .iter()
                .map(|s| (*s).to_owned())
                .collect();
            header = Some(fields);
            continue;
        };
        if fields.len() != header.len() {
            return Err(bad(format!(
                "row has {} fields, header has {}",
                fields.len(),
                header.len()
            )));
        }
        let mut it = fields.iter();
        let row_source = if aggregated {
            (*it.next().expect("checked length")).to_owned()
        } else {
            source.clone().unwrap_or_default()
        };
        let u = *it.next().expect("checked length");
        let v = *it.next().expect("checked length");
        pairs.push((u.to_owned(), v.to_owned()));
        sources.push(row_source);
        for _ in 0..columns.len() {
            let tok = it.next().expect("checked length");
            values.push(
                tok.parse::<f64>()
                    .map_err(|_| bad(format!("bad feature value {tok}")))?,
            );
        }
        let tok = it.next().expect("checked length");
        labels.push(
            tok.parse::<u8>()
                .map_err(|_| bad(format!("bad label {tok}")))?,
        );
    }

    let source = source.ok_or_else(|| bad("missing source comment".to_owned()))?;
    let directed = directed.ok_or_else(|| bad("missing directed comment".to_owned()))?;
    if header.is_none() {
        return Err(bad("missing header".to_owned()));
    }
    let includes_global = columns.last().is_some_and(|c| c == "density");
    Fdm::from_parts(
        source,
        directed,
        includes_global,
        columns,
        pairs,
        sources,
        values,
        labels,
    )
}

/// One run-ledger row; `plan` is the canonical command text being hashed.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub plan: String,
    pub seed: u64,
    pub result: String,
}

const LEDGER_HEADER: &str = "plan_hash\tseed\tplan\tresult";

/// Inserts a row into ledger text keyed by (plan hash, seed): an existing
/// row with the same key is replaced in place, otherwise the row is
/// appended. Re-running an identical experiment leaves the file unchanged.
pub fn ledger_upsert(existing: &str, row: &LedgerRow) -> Result<String> {
    let hash = hash_hex(&row.plan);
    let line = format!("{hash}\t{}\t{}\t{}", row.seed, row.plan, row.result);
    let mut lines: Vec<String> = Vec::new();
    for (i, old) in existing.lines().enumerate() {
        if i == 0 {
            if old != LEDGER_HEADER {
                return Err(Error::InvalidInput(format!(
                    "unrecognized ledger header: {old}"
                )));
            }
            continue;
        }
        if old.is_empty() {
            continue;
        }
        lines.push(old.to_owned());
    }
    let key = format!("{hash}\t{}\t", row.seed);
    match lines.iter_mut().find(|l| l.starts_with(&key)) {
        Some(slot) => *slot = line,
        None => lines.push(line),
    }
    let mut out = String::from(LEDGER_HEADER);
    out.push('\n');
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::build_fdm;
    use crate::graph::Network;
    use crate::metrics::evaluate;
    use crate::ranking::best_ranker;
    use crate::ExecMode;

    fn sample_report() -> EvaluationReport {
        let labels = [1, 1, 0, 0, 1, 0];
        let probs = [0.9, 0.8, 0.4, 0.3, 0.2, 0.61];
        let mut r = EvaluationReport::single(evaluate(&labels, &probs, 0.5).unwrap());
        r.train_source = "g1".to_owned();
        r.test_source = "sn".to_owned();
        r.model = "gaussian_nb".to_owned();
        r.seed = 7;
        r
    }

    #[test]
    fn kv_record_round_trips_every_value() {
        let r = sample_report();
        let text = report_kv(&r);
        let kv = parse_kv(&text).unwrap();
        let get = |k: &str| &kv.iter().find(|(key, _)| key == k).unwrap().1;
        assert_eq!(get("train_source"), "g1");
        assert_eq!(get("seed"), "7");
        assert_eq!(get("tp").parse::<usize>().unwrap(), r.confusion.tp);
        assert_eq!(get("accuracy").parse::<f64>().unwrap(), r.accuracy);
        assert_eq!(get("f_weighted").parse::<f64>().unwrap(), r.weighted.f1);
        assert_eq!(get("auc").parse::<f64>().unwrap(), r.auc.unwrap());
    }

    #[test]
    fn full_precision_formatting_is_lossless() {
        for x in [
            1.0 / 3.0,
            0.1 + 0.2,
            std::f64::consts::PI,
            1e-300,
            6.02214076e23,
            -0.0,
        ] {
            let parsed: f64 = fmt_full(x).parse().unwrap();
            assert_eq!(parsed.to_bits(), x.to_bits());
        }
        assert_eq!(fmt_human(1.0 / 3.0), "0.333");
        assert_eq!(fmt_human(2.0 / 3.0), "0.667");
    }

    #[test]
    fn report_table_parses_back() {
        let r = sample_report();
        let text = report_table(&[r.clone()]);
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
        let row: Vec<&str> = lines.next().unwrap().split('\t').collect();
        assert_eq!(header.len(), row.len());
        let idx = |k: &str| header.iter().position(|h| *h == k).unwrap();
        assert_eq!(row[idx("f_weighted")].parse::<f64>().unwrap(), r.weighted.f1);
        assert_eq!(row[idx("tn")].parse::<usize>().unwrap(), r.confusion.tn);

        let human = report_table_human(&[r]);
        assert!(human.lines().nth(1).unwrap().contains("0.667"));
    }

    #[test]
    fn fdm_export_round_trips_exactly() {
        let net = Network::from_edges(
            "sn",
            false,
            &[("a", "b"), ("b", "c"), ("c", "d"), ("a", "c")],
        );
        for include_global in [false, true] {
            let fdm = build_fdm(&net, include_global, ExecMode::Sequential).unwrap();
            let text = fdm_table(&fdm);
            let back = parse_fdm(&text).unwrap();
            assert_eq!(back, fdm);
        }
    }

    #[test]
    fn aggregated_fdm_round_trips_with_sources() {
        let a = Network::from_edges("a", false, &[("x", "y"), ("y", "z")]);
        let b = Network::from_edges("b", false, &[("p", "q")]);
        let fdm = crate::features::build_aggregated_fdm(&[&a, &b], ExecMode::Sequential).unwrap();
        let text = fdm_table(&fdm);
        assert!(text.contains("source\tnode_u"));
        assert_eq!(parse_fdm(&text).unwrap(), fdm);
    }

    #[test]
    fn fdm_parse_rejects_malformed_text() {
        assert!(parse_fdm("").is_err());
        assert!(parse_fdm("# source\tx\nnode_u\tnode_v\tcn\tlabel\n1\t2\t3\t0\n").is_err());
        let net = Network::from_edges("sn", false, &[("a", "b")]);
        let good = fdm_table(&build_fdm(&net, false, ExecMode::Sequential).unwrap());
        let truncated: String = good
            .lines()
            .map(|l| l.rsplit_once('\t').unwrap().0.to_owned() + "\n")
            .collect();
        assert!(parse_fdm(&truncated).is_err());
    }

    #[test]
    fn roc_and_ranking_tables_render() {
        let labels = [1, 0, 1, 0];
        let probs = [0.9, 0.2, 0.7, 0.4];
        let curve = crate::metrics::roc_curve(&labels, &probs).unwrap();
        let roc = roc_table(&curve);
        assert!(roc.starts_with("fpr\ttpr\n0\t0\n"));
        assert_eq!(roc.lines().count(), curve.len() + 1);

        let net = Network::from_edges("sn", false, &[("a", "b"), ("b", "c")]);
        let fdm = build_fdm(&net, false, ExecMode::Sequential).unwrap();
        let ranking = best_ranker(&fdm).unwrap();
        let table = ranking_table(&ranking);
        assert_eq!(table.lines().count(), 4);
        assert!(table.ends_with("\t3\n"));
        let first = table.lines().nth(1).unwrap();
        assert_eq!(first, "a\tc\t0\t0\t1");
    }

    #[test]
    fn ledger_upsert_is_idempotent_and_keyed() {
        let row = LedgerRow {
            plan: "assess --train g1 --model svm_rbf".to_owned(),
            seed: 7,
            result: "f_weighted=0.95".to_owned(),
        };
        let once = ledger_upsert("", &row).unwrap();
        assert_eq!(once.lines().count(), 2);
        let twice = ledger_upsert(&once, &row).unwrap();
        assert_eq!(once, twice);

        let mut updated = row.clone();
        updated.result = "f_weighted=0.96".to_owned();
        let replaced = ledger_upsert(&once, &updated).unwrap();
        assert_eq!(replaced.lines().count(), 2);
        assert!(replaced.contains("0.96"));
        assert!(!replaced.contains("0.95"));

        let mut other_seed = row.clone();
        other_seed.seed = 8;
        let two = ledger_upsert(&replaced, &other_seed).unwrap();
        assert_eq!(two.lines().count(), 3);

        assert!(ledger_upsert("bogus header\n", &row).is_err());
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        assert_eq!(hash_hex(""), format!("{:016x}", 0xcbf29ce484222325u64));
        assert_eq!(hash_hex("a"), hash_hex("a"));
        assert_ne!(hash_hex("a"), hash_hex("b"));
    }
}
