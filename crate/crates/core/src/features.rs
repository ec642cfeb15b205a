//! Edge-proximity measures and feature data model (FDM) construction.
//!
//! Nine measures characterize how close a node pair sits in a network:
//! common neighbors, resource allocation, Adamic-Adar, Jaccard, preferential
//! attachment, Sorensen-Dice, hub promoted, hub depressed, and the
//! community-adjusted index over the common-neighbor subgraph (CAR). On
//! directed networks each measure is evaluated twice, substituting the in-
//! and then the out-neighborhood everywhere the undirected neighborhood
//! appears, which doubles the feature count.
//!
//! A network's FDM holds one instance per node pair: the pair's proximity
//! features in that network, optionally the network's global density, and a
//! binary label marking whether the network contains the pair as an edge.
//! The aggregated FDM of several networks stacks their instances under a
//! shared schema, carrying each source network's density as the global
//! feature.

use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::graph::{max_edges, Direction, Network};

/// Per-direction measure names, in feature order.
pub const MEASURE_NAMES: [&str; 9] = ["cn", "ra", "aac", "ji", "pa", "sd", "hpi", "hdi", "car"];

/// A feature data model: a dense instance matrix with named columns, a
/// binary label per row, and per-row provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Fdm {
    /// Network id or "aggregated".
    source: String,
    directed: bool,
    includes_global: bool,
    columns: Vec<String>,
    /// Node-token pair per instance.
    pairs: Vec<(String, String)>,
    /// Source network id per instance.
    sources: Vec<String>,
    /// Row-major instance matrix, `pairs.len()` rows by `columns.len()`.
    values: Vec<f64>,
    labels: Vec<u8>,
}

impl Fdm {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn includes_global(&self) -> bool {
        self.includes_global
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn n_instances(&self) -> usize {
        self.labels.len()
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn instance_sources(&self) -> &[String] {
        &self.sources
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.columns.len();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.columns.len().max(1))
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    /// Builds an FDM directly from parts; every per-row vector must agree
    /// on length.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        source: String,
        directed: bool,
        includes_global: bool,
        columns: Vec<String>,
        pairs: Vec<(String, String)>,
        sources: Vec<String>,
        values: Vec<f64>,
        labels: Vec<u8>,
    ) -> Result<Fdm> {
        let n = labels.len();
        if pairs.len() != n || sources.len() != n || values.len() != n * columns.len() {
            return Err(Error::InvalidInput(format!(
                "inconsistent fdm shape: {} pairs, {} sources, {} labels, {} values, {} columns",
                pairs.len(),
                sources.len(),
                n,
                values.len(),
                columns.len()
            )));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::InvalidInput("labels must be 0 or 1".to_owned()));
        }
        Ok(Fdm {
            source,
            directed,
            includes_global,
            columns,
            pairs,
            sources,
            values,
            labels,
        })
    }

    /// Rows selected by index, in the given order. Indices may repeat.
    pub fn subset(&self, indices: &[usize]) -> Fdm {
        let w = self.columns.len();
        let mut values = Vec::with_capacity(indices.len() * w);
        let mut pairs = Vec::with_capacity(indices.len());
        let mut sources = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            values.extend_from_slice(self.row(i));
            pairs.push(self.pairs[i].clone());
            sources.push(self.sources[i].clone());
            labels.push(self.labels[i]);
        }
        Fdm {
            source: self.source.clone(),
            directed: self.directed,
            includes_global: self.includes_global,
            columns: self.columns.clone(),
            pairs,
            sources,
            values,
            labels,
        }
    }
}

/// Computes the nine measures for node indices `(v, w)` in `net` using the
/// given neighborhood. `direction` must match the network kind.
pub(crate) fn nine_measures(net: &Network, v: usize, w: usize, direction: Direction) -> [f64; 9] {
    let nv = net.adj(v, direction);
    let nw = net.adj(w, direction);
    let dv = nv.len() as f64;
    let dw = nw.len() as f64;

    // Single merge pass collects the intersection; union size follows from
    // inclusion-exclusion.
    let mut common: Vec<usize> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < nv.len() && j < nw.len() {
        match nv[i].cmp(&nw[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common.push(nv[i]);
                i += 1;
                j += 1;
            }
        }
    }
    let cn = common.len() as f64;
    let union = dv + dw - cn;

    let mut ra = 0.0;
    let mut aac = 0.0;
    for &z in &common {
        let dz = net.degree_idx(z, direction) as f64;
        if dz > 0.0 {
            ra += 1.0 / dz;
        }
        if dz > 1.0 {
            aac += 1.0 / dz.ln();
        }
    }

    let ji = if union > 0.0 { cn / union } else { 0.0 };
    let pa = dv * dw;
    let sd = if dv + dw > 0.0 { 2.0 * cn / (dv + dw) } else { 0.0 };
    let dmin = dv.min(dw);
    let dmax = dv.max(dw);
    let hpi = if dmin > 0.0 { cn / dmin } else { 0.0 };
    let hdi = if dmax > 0.0 { cn / dmax } else { 0.0 };

    // CAR: common neighbors weighted by their links inside the common
    // neighborhood itself.
    let mut car = 0.0;
    for (a, &z) in common.iter().enumerate() {
        let mut gamma = 0usize;
        for (b, &y) in common.iter().enumerate() {
            if a != b && net.adj(z, direction).binary_search(&y).is_ok() {
                gamma += 1;
            }
        }
        car += cn * gamma as f64 / 2.0;
    }

    [cn, ra, aac, ji, pa, sd, hpi, hdi, car]
}

/// Feature vector for the node pair `(v, w)` in one network: 9 values
/// undirected or 18 directed (each measure on Λ_in, then on Λ_out).
pub fn pair_features(net: &Network, v: &str, w: &str) -> Result<Vec<f64>> {
    let vi = net
        .node_index(v)
        .ok_or_else(|| Error::UnknownNode(v.to_owned()))?;
    let wi = net
        .node_index(w)
        .ok_or_else(|| Error::UnknownNode(w.to_owned()))?;
    if vi == wi {
        return Err(Error::InvalidInput(format!(
            "pair features need two distinct nodes, got `{v}` twice"
        )));
    }
    Ok(pair_features_idx(net, vi, wi))
}

pub(crate) fn pair_features_idx(net: &Network, v: usize, w: usize) -> Vec<f64> {
    if net.directed() {
        let mut out = Vec::with_capacity(18);
        out.extend_from_slice(&nine_measures(net, v, w, Direction::In));
        out.extend_from_slice(&nine_measures(net, v, w, Direction::Out));
        out
    } else {
        nine_measures(net, v, w, Direction::Undirected).to_vec()
    }
}

/// Schema column names shared by every FDM of the given shape: `cn`, `ra`,
/// ... undirected; `cn_in`, ..., `cn_out`, ... directed; plus `density`
/// when the global feature is included.
pub fn feature_names(directed: bool, includes_global: bool) -> Vec<String> {
    let mut names = Vec::new();
    if directed {
        for dir in ["in", "out"] {
            for base in MEASURE_NAMES {
                names.push(format!("{base}_{dir}"));
            }
        }
    } else {
        for base in MEASURE_NAMES {
            names.push(base.to_owned());
        }
    }
    if includes_global {
        names.push("density".to_owned());
    }
    names
}

/// All node-index pairs of `net` in deterministic order: unordered pairs
/// `(u, v)` with `u < v` when undirected, all ordered pairs otherwise.
fn all_pairs(net: &Network) -> Vec<(usize, usize)> {
    let n = net.node_count();
    let mut pairs = Vec::with_capacity(max_edges(n, net.directed()));
    if net.directed() {
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    pairs.push((u, v));
                }
            }
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

/// Builds the FDM of one network: instances are its node pairs, features
/// are each pair's proximity values in the network itself, the label is 1
/// when the pair is an edge. The global density column is appended when
/// `include_global` is set.
pub fn build_fdm(net: &Network, include_global: bool, mode: ExecMode) -> Result<Fdm> {
    if net.node_count() < 2 {
        return Err(Error::InvalidInput(format!(
            "network `{}` has fewer than 2 nodes",
            net.id()
        )));
    }
    let columns = feature_names(net.directed(), include_global);
    let density = if include_global { Some(net.density()?) } else { None };
    let pairs = all_pairs(net);
    let width = columns.len();

    let rows: Vec<(Vec<f64>, u8)> = map_indexed(mode, pairs.len(), |i| {
        let (u, v) = pairs[i];
        let mut row = pair_features_idx(net, u, v);
        if let Some(d) = density {
            row.push(d);
        }
        (row, u8::from(net.has_edge_idx(u, v)))
    });

    let mut values = Vec::with_capacity(pairs.len() * width);
    let mut labels = Vec::with_capacity(pairs.len());
    for (row, label) in rows {
        values.extend_from_slice(&row);
        labels.push(label);
    }
    let token_pairs: Vec<(String, String)> = pairs
        .into_iter()
        .map(|(u, v)| (net.label(u).to_owned(), net.label(v).to_owned()))
        .collect();
    let sources = vec![net.id().to_owned(); token_pairs.len()];

    Fdm::from_parts(
        net.id().to_owned(),
        net.directed(),
        include_global,
        columns,
        token_pairs,
        sources,
        values,
        labels,
    )
}

/// Stacks the FDMs of several networks into one aggregated FDM. Every
/// instance carries its source network's density as the global feature, so
/// pooled instances remain distinguishable by origin.
pub fn build_aggregated_fdm(nets: &[&Network], mode: ExecMode) -> Result<Fdm> {
    let Some(first) = nets.first() else {
        return Err(Error::InvalidInput("no networks to aggregate".to_owned()));
    };
    if nets.iter().any(|n| n.directed() != first.directed()) {
        return Err(Error::DirectednessMismatch);
    }
    let columns = feature_names(first.directed(), true);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut pairs = Vec::new();
    let mut sources = Vec::new();
    for net in nets {
        let part = build_fdm(net, true, mode)?;
        values.extend_from_slice(&part.values);
        labels.extend_from_slice(&part.labels);
        pairs.extend_from_slice(&part.pairs);
        sources.extend_from_slice(&part.sources);
    }
    Fdm::from_parts(
        "aggregated".to_owned(),
        first.directed(),
        true,
        columns,
        pairs,
        sources,
        values,
        labels,
    )
}

/// Pearson correlation between every feature column pair, with a flag per
/// column marking constants (whose correlations are 0 by convention).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    /// Row-major square matrix; diagonal is 1.
    pub values: Vec<Vec<f64>>,
    pub constant: Vec<bool>,
}

pub fn feature_correlation_matrix(fdm: &Fdm) -> Result<CorrelationMatrix> {
    let n = fdm.n_instances();
    if n < 2 {
        return Err(Error::InvalidInput(
            "correlation needs at least 2 instances".to_owned(),
        ));
    }
    let d = fdm.n_features();
    let nf = n as f64;
    let mut mean = vec![0.0; d];
    for row in fdm.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= nf;
    }
    // Column-major centered copy for cache-friendly dot products.
    let mut centered = vec![vec![0.0; n]; d];
    for (i, row) in fdm.rows().enumerate() {
        for (j, v) in row.iter().enumerate() {
            centered[j][i] = v - mean[j];
        }
    }
    let norms: Vec<f64> = centered
        .iter()
        .map(|col| col.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let constant: Vec<bool> = norms.iter().map(|&s| s < 1e-12).collect();
    let mut values = vec![vec![0.0; d]; d];
    for j in 0..d {
        values[j][j] = 1.0;
        for l in j + 1..d {
            let r = if constant[j] || constant[l] {
                0.0
            } else {
                let dot: f64 = centered[j].iter().zip(&centered[l]).map(|(a, b)| a * b).sum();
                dot / (norms[j] * norms[l])
            };
            values[j][l] = r;
            values[l][j] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: fdm.columns().to_vec(),
        values,
        constant,
    })
}
