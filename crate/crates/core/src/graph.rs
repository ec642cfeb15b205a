//! Graph representation, edge-list ingestion, neighborhood queries, summary
//! statistics, and uniform random graphs.
//!
//! Networks are simple graphs: self-loops and parallel edges are dropped at
//! construction. Node identity is the literal string token from the input;
//! tokens are mapped to dense indices in lexicographic order, so the same
//! node/edge sets always produce the same internal layout regardless of
//! input order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Neighborhood direction selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Undirected,
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Undirected => write!(f, "undirected"),
            Direction::In => write!(f, "in"),
            Direction::Out => write!(f, "out"),
        }
    }
}

/// A named simple graph, directed or undirected.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    id: String,
    directed: bool,
    /// Node tokens in lexicographic order; position is the node index.
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted adjacency. Undirected: the single neighbor list.
    /// Directed: out-neighbors.
    out: Vec<Vec<usize>>,
    /// Directed only: in-neighbors (empty vector of lists when undirected).
    inn: Vec<Vec<usize>>,
    m: usize,
}

/// Per-network summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStats {
    pub n: usize,
    pub m: usize,
    pub avg_clustering: f64,
    pub density: f64,
}

/// Result of ingesting raw edge pairs: the network plus counts of what the
/// simple-graph normalization removed.
#[derive(Debug, Clone)]
pub struct Ingest {
    pub network: Network,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl Network {
    /// Builds a network from string edge pairs, deriving the node set from
    /// the endpoints. Self-loops and duplicates are silently dropped; use
    /// [`ingest_edges`] to observe the drop counts.
    pub fn from_edges<S: AsRef<str>>(id: &str, directed: bool, pairs: &[(S, S)]) -> Network {
        let owned: Vec<(String, String)> = pairs
            .iter()
            .map(|(u, v)| (u.as_ref().to_owned(), v.as_ref().to_owned()))
            .collect();
        ingest_edges(id, directed, owned).network
    }

    /// Builds a network from an explicit node set plus index edge pairs.
    /// Needed when isolated nodes must be representable (random graphs).
    fn from_parts(
        id: &str,
        directed: bool,
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Network {
        let n = labels.len();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut out = vec![Vec::new(); n];
        let mut inn = if directed { vec![Vec::new(); n] } else { Vec::new() };
        let mut m = 0;
        for (u, v) in edges {
            debug_assert!(u != v && u < n && v < n);
            m += 1;
            if directed {
                out[u].push(v);
                inn[v].push(u);
            } else {
                out[u].push(v);
                out[v].push(u);
            }
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
        }
        Network {
            id: id.to_owned(),
            directed,
            labels,
            index,
            out,
            inn,
            m,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Node tokens in index order (lexicographic).
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_index(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    fn require_node(&self, token: &str) -> Result<usize> {
        self.node_index(token)
            .ok_or_else(|| Error::UnknownNode(token.to_owned()))
    }

    fn check_direction(&self, direction: Direction) -> Result<()> {
        let ok = if self.directed {
            matches!(direction, Direction::In | Direction::Out)
        } else {
            matches!(direction, Direction::Undirected)
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DirectionMismatch {
                direction: direction.to_string(),
                kind: if self.directed { "directed" } else { "undirected" }.to_owned(),
            })
        }
    }

    /// Neighborhood of `v`: Λ(v), Λ_in(v), or Λ_out(v) as sorted tokens.
    pub fn neighbors(&self, v: &str, direction: Direction) -> Result<Vec<&str>> {
        let idx = self.require_node(v)?;
        self.check_direction(direction)?;
        Ok(self
            .adj(idx, direction)
            .iter()
            .map(|&w| self.labels[w].as_str())
            .collect())
    }

    /// Sorted neighbor indices. Internal callers must pass a direction that
    /// matches the network kind.
    pub(crate) fn adj(&self, v: usize, direction: Direction) -> &[usize] {
        match direction {
            Direction::Undirected | Direction::Out => &self.out[v],
            Direction::In => &self.inn[v],
        }
    }

    pub(crate) fn degree_idx(&self, v: usize, direction: Direction) -> usize {
        self.adj(v, direction).len()
    }

    pub fn has_edge_idx(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// Whether the edge {u,v} (or (u,v) if directed) is present.
    pub fn has_edge(&self, u: &str, v: &str) -> Result<bool> {
        let ui = self.require_node(u)?;
        let vi = self.require_node(v)?;
        Ok(self.has_edge_idx(ui, vi))
    }

    /// Edges as token pairs in deterministic (index) order. Undirected edges
    /// are reported once with the lower index first.
    pub fn edges(&self) -> Vec<(&str, &str)> {
        let mut result = Vec::with_capacity(self.m);
        for u in 0..self.labels.len() {
            for &v in &self.out[u] {
                if self.directed || u < v {
                    result.push((self.labels[u].as_str(), self.labels[v].as_str()));
                }
            }
        }
        result
    }

    /// Maximum possible edge count for this node set and directedness.
    pub fn max_edges(&self) -> usize {
        max_edges(self.node_count(), self.directed)
    }

    /// Network density: 2m/(n(n-1)) undirected, m/(n(n-1)) directed.
    pub fn density(&self) -> Result<f64> {
        let n = self.node_count();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "density needs at least 2 nodes, network `{}` has {n}",
                self.id
            )));
        }
        let pairs = (n * (n - 1)) as f64;
        let num = if self.directed { self.m } else { 2 * self.m } as f64;
        Ok(num / pairs)
    }

    /// Mean local clustering coefficient. Nodes of degree < 2 contribute 0.
    /// Directed networks are measured on their undirected projection.
    pub fn avg_clustering(&self) -> f64 {
        let n = self.node_count();
        if n == 0 {
            return 0.0;
        }
        let projected: Vec<Vec<usize>> = if self.directed {
            (0..n)
                .map(|v| {
                    let mut set: Vec<usize> =
                        self.out[v].iter().chain(self.inn[v].iter()).copied().collect();
                    set.sort_unstable();
                    set.dedup();
                    set
                })
                .collect()
        } else {
            self.out.clone()
        };
        let mut total = 0.0;
        for nbrs in &projected {
            let d = nbrs.len();
            if d < 2 {
                continue;
            }
            let mut links = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if projected[a].binary_search(&b).is_ok() {
                        links += 1;
                    }
                }
            }
            total += 2.0 * links as f64 / (d * (d - 1)) as f64;
        }
        total / n as f64
    }

    /// Summary statistics row. Density is 0 for networks with fewer than
    /// two nodes.
    pub fn stats(&self) -> NetworkStats {
        NetworkStats {
            n: self.node_count(),
            m: self.m,
            avg_clustering: self.avg_clustering(),
            density: self.density().unwrap_or(0.0),
        }
    }
}

pub(crate) fn max_edges(n: usize, directed: bool) -> usize {
    if n < 2 {
        return 0;
    }
    if directed {
        n * (n - 1)
    } else {
        n * (n - 1) / 2
    }
}

/// Normalizes raw token pairs into a simple graph: drops self-loops, then
/// duplicates (for undirected input, `b a` duplicates `a b`). Node tokens
/// are indexed in lexicographic order.
pub fn ingest_edges(id: &str, directed: bool, pairs: Vec<(String, String)>) -> Ingest {
    let mut self_loops = 0usize;
    let mut tokens: BTreeSet<&str> = BTreeSet::new();
    for (u, v) in &pairs {
        tokens.insert(u);
        tokens.insert(v);
    }
    let labels: Vec<String> = tokens.iter().map(|s| (*s).to_owned()).collect();
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();

    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut duplicates = 0usize;
    for (u, v) in &pairs {
        let ui = index[u.as_str()];
        let vi = index[v.as_str()];
        if ui == vi {
            self_loops += 1;
            continue;
        }
        let key = if directed || ui < vi { (ui, vi) } else { (vi, ui) };
        if !seen.insert(key) {
            duplicates += 1;
        }
    }

    let network = Network::from_parts(id, directed, labels, seen);
    Ingest {
        network,
        self_loops_dropped: self_loops,
        duplicates_dropped: duplicates,
    }
}

/// Parses edge-list text: one edge per line, two tokens separated by
/// whitespace or commas, `#` lines are comments, blank lines are skipped.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected two node tokens, found {}", tokens.len()),
            ));
        }
        pairs.push((tokens[0].to_owned(), tokens[1].to_owned()));
    }
    if pairs.is_empty() {
        return Err(Error::parse(path, 0, "no edges found"));
    }
    Ok(pairs)
}

/// Loads a network from an edge-list file. The returned [`Ingest`] carries
/// the counts of dropped self-loops and duplicate edges so callers can warn.
pub fn load_edge_list(path: &Path, directed: bool, id: &str) -> Result<Ingest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let pairs = parse_edge_list(&text, path)?;
    Ok(ingest_edges(id, directed, pairs))
}

/// Number of edges present in both networks (token identity; unordered
/// pairs when undirected). Errors when directedness differs.
pub fn edge_overlap(a: &Network, b: &Network) -> Result<usize> {
    if a.directed() != b.directed() {
        return Err(Error::DirectednessMismatch);
    }
    let mut count = 0usize;
    for (u, v) in a.edges() {
        if let (Some(ui), Some(vi)) = (b.node_index(u), b.node_index(v)) {
            if b.has_edge_idx(ui, vi) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Uniform G(n, m): exactly `m` distinct non-self-loop edges sampled without
/// replacement. Deterministic for a fixed seed. Node tokens are zero-padded
/// decimal strings so lexicographic and numeric order agree.
pub fn random_graph(n: usize, m: usize, seed: u64, directed: bool) -> Result<Network> {
    let total = max_edges(n, directed);
    if m > total {
        return Err(Error::InvalidInput(format!(
            "m={m} exceeds the {total} possible edges for n={n}"
        )));
    }
    let width = if n <= 1 { 1 } else { (n - 1).to_string().len() };
    let labels: Vec<String> = (0..n).map(|i| format!("{i:0width$}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, total, m);
    let mut edges: Vec<(usize, usize)> = picks.iter().map(|code| decode_pair(code, n, directed)).collect();
    edges.sort_unstable();
    Ok(Network::from_parts(
        &format!("er-{n}-{m}-{seed}{}", if directed { "-d" } else { "" }),
        directed,
        labels,
        edges,
    ))
}

/// Builds a random graph with the given id instead of the generated one.
pub fn random_graph_named(
    id: &str,
    n: usize,
    m: usize,
    seed: u64,
    directed: bool,
) -> Result<Network> {
    let mut net = random_graph(n, m, seed, directed)?;
    net.id = id.to_owned();
    Ok(net)
}

/// Maps a pair code in `0..max_edges(n, directed)` to a node-index pair.
fn decode_pair(code: usize, n: usize, directed: bool) -> (usize, usize) {
    if directed {
        let u = code / (n - 1);
        let r = code % (n - 1);
        let v = if r < u { r } else { r + 1 };
        (u, v)
    } else {
        // Row-major upper triangle: row u holds n-1-u codes.
        let mut u = 0usize;
        let mut remaining = code;
        loop {
            let row = n - 1 - u;
            if remaining < row {
                return (u, u + 1 + remaining);
            }
            remaining -= row;
            u += 1;
        }
    }
}

/// All node-index pairs absent from the network (no self-loops), in
/// deterministic order.
pub(crate) fn non_edges(net: &Network) -> Vec<(usize, usize)> {
    let n = net.node_count();
    let mut result = Vec::new();
    if net.directed() {
        for u in 0..n {
            for v in 0..n {
                if u != v && !net.has_edge_idx(u, v) {
                    result.push((u, v));
                }
            }
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                if !net.has_edge_idx(u, v) {
                    result.push((u, v));
                }
            }
        }
    }
    result
}

/// Returns a copy of `net` with the given node-index pairs added as edges.
pub(crate) fn with_added_edges(net: &Network, id: &str, extra: &[(usize, usize)]) -> Network {
    let mut edges: Vec<(usize, usize)> = if net.directed() {
        (0..net.node_count())
            .flat_map(|u| net.out[u].iter().map(move |&v| (u, v)))
            .collect()
    } else {
        (0..net.node_count())
            .flat_map(|u| net.out[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    };
    edges.extend_from_slice(extra);
    edges.sort_unstable();
    edges.dedup();
    Network::from_parts(id, net.directed(), net.labels.to_vec(), edges)
}
