//! Synthetic benchmark data: a planted-community interaction network plus a
//! social network derived from it by light edge noise.
//!
//! Desk-scale stand-in for real multiplex data. The community structure
//! makes edge presence learnable from proximity features, and the rewiring
//! fraction controls how far the social network drifts from the interaction
//! network it is predicted from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ingest_edges, Network};

/// Planted-multiplex generator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedOptions {
    pub n: usize,
    pub communities: usize,
    /// Edge probability inside a community.
    pub p_in: f64,
    /// Edge probability across communities.
    pub p_out: f64,
    /// Fraction of interaction edges rewired to form the social network.
    pub noise: f64,
}

impl Default for PlantedOptions {
    fn default() -> Self {
        PlantedOptions {
            n: 60,
            communities: 5,
            p_in: 0.9,
            p_out: 0.02,
            noise: 0.05,
        }
    }
}

/// A generated pair of networks over the same node set.
#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    /// The interaction network with planted communities.
    pub interaction: Network,
    /// The social network: the interaction network with `noise` of its
    /// edges rewired.
    pub social: Network,
}

fn node_label(i: usize, n: usize) -> String {
    let width = if n <= 1 { 1 } else { (n - 1).to_string().len() };
    format!("{i:0width$}")
}

/// Samples a planted-partition graph: nodes split into near-equal blocks,
/// each pair linked with `p_in` inside a block and `p_out` across blocks.
pub fn planted_partition(id: &str, opts: &PlantedOptions, seed: u64) -> Result<Network> {
    if opts.n < 2 || opts.communities == 0 || opts.communities > opts.n {
        return Err(Error::InvalidInput(format!(
            "need 2 <= communities <= n, got n={} communities={}",
            opts.n, opts.communities
        )));
    }
    for (name, p) in [("p_in", opts.p_in), ("p_out", opts.p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("{name} must be in [0, 1], got {p}")));
        }
    }
    let block = opts.n.div_ceil(opts.communities);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..opts.n {
        for v in u + 1..opts.n {
            let p = if u / block == v / block { opts.p_in } else { opts.p_out };
            if rng.random_bool(p) {
                pairs.push((node_label(u, opts.n), node_label(v, opts.n)));
            }
        }
    }
    if pairs.is_empty() {
        // Keep the node set representable even if sampling yields no edges.
        pairs.push((node_label(0, opts.n), node_label(1, opts.n)));
    }
    let mut all_nodes: Vec<(String, String)> = (0..opts.n)
        .map(|i| (node_label(i, opts.n), node_label(i, opts.n)))
        .collect();
    // Self-loop placeholders register isolated nodes and are dropped by
    // ingestion.
    all_nodes.extend(pairs);
    Ok(ingest_edges(id, false, all_nodes).network)
}

/// Rewires `floor(fraction * m)` edges: deletes that many uniformly chosen
/// edges and adds the same number of uniformly chosen non-edges. The node
/// set is preserved.
pub fn rewire_fraction(net: &Network, id: &str, fraction: f64, seed: u64) -> Result<Network> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidInput(format!(
            "rewire fraction must be in [0, 1], got {fraction}"
        )));
    }
    let edges: Vec<(String, String)> = net
        .edges()
        .into_iter()
        .map(|(u, v)| (u.to_owned(), v.to_owned()))
        .collect();
    let m = edges.len();
    let k = ((m as f64) * fraction).floor() as usize;
    let non_edges = crate::graph::non_edges(net);
    let k = k.min(non_edges.len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drop: std::collections::BTreeSet<usize> =
        rand::seq::index::sample(&mut rng, m, k).into_iter().collect();
    let add = rand::seq::index::sample(&mut rng, non_edges.len(), k);

    let mut pairs: Vec<(String, String)> = net
        .labels()
        .iter()
        .map(|l| (l.clone(), l.clone()))
        .collect();
    for (i, edge) in edges.into_iter().enumerate() {
        if !drop.contains(&i) {
            pairs.push(edge);
        }
    }
    for idx in add {
        let (u, v) = non_edges[idx];
        pairs.push((net.label(u).to_owned(), net.label(v).to_owned()));
    }
    Ok(ingest_edges(id, net.directed(), pairs).network)
}

/// Generates the benchmark pair: interaction network plus noisy social
/// network. Derived seeds keep the two stages independent.
pub fn planted_multiplex(opts: &PlantedOptions, seed: u64) -> Result<Planted> {
    let interaction = planted_partition("g1", opts, mix_seed(seed, 1))?;
    let social = rewire_fraction(&interaction, "sn", opts.noise, mix_seed(seed, 2))?;
    Ok(Planted {
        interaction,
        social,
    })
}

/// Stable seed derivation for independent pipeline stages.
pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the combined value.
    let mut z = seed ^ stream.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
