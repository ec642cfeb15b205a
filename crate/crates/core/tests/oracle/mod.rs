//! Brute-force re-derivation of the nine edge-proximity measures from raw
//! edge pairs. Neighborhoods are plain string sets and every formula is
//! evaluated literally, so the optimized index-based implementation has an
//! independent yardstick to agree with.

use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Und,
    In,
    Out,
}

/// Neighborhood of `v` under `dir`, read straight off the edge pairs.
pub fn neighbor_set(edges: &[(String, String)], v: &str, dir: Dir) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    for (a, b) in edges {
        match dir {
            Dir::Und => {
                if a == v && b != v {
                    set.insert(b.clone());
                }
                if b == v && a != v {
                    set.insert(a.clone());
                }
            }
            Dir::In => {
                if b == v && a != v {
                    set.insert(a.clone());
                }
            }
            Dir::Out => {
                if a == v && b != v {
                    set.insert(b.clone());
                }
            }
        }
    }
    set
}

/// Per-node neighbor sets for one edge list, so repeated lookups do not
/// rescan the edges.
pub struct OracleNet {
    directed: bool,
    sets: BTreeMap<&'static str, BTreeMap<String, BTreeSet<String>>>,
}

impl OracleNet {
    pub fn new(edges: &[(String, String)], directed: bool) -> OracleNet {
        let mut nodes: BTreeSet<&str> = BTreeSet::new();
        for (a, b) in edges {
            nodes.insert(a);
            nodes.insert(b);
        }
        let dirs: &[(&'static str, Dir)] = if directed {
            &[("in", Dir::In), ("out", Dir::Out)]
        } else {
            &[("und", Dir::Und)]
        };
        let sets = dirs
            .iter()
            .map(|&(name, dir)| {
                let by_node = nodes
                    .iter()
                    .map(|&v| (v.to_owned(), neighbor_set(edges, v, dir)))
                    .collect();
                (name, by_node)
            })
            .collect();
        OracleNet { directed, sets }
    }

    fn lambda(&self, v: &str, dir: Dir) -> BTreeSet<String> {
        let key = match dir {
            Dir::Und => "und",
            Dir::In => "in",
            Dir::Out => "out",
        };
        self.sets[key].get(v).cloned().unwrap_or_default()
    }

    /// The nine measures for `(v, w)` under one neighborhood kind, in
    /// schema order: cn, ra, aac, ji, pa, sd, hpi, hdi, car. Degenerate
    /// denominators contribute 0.
    pub fn measures(&self, v: &str, w: &str, dir: Dir) -> [f64; 9] {
        let nv = self.lambda(v, dir);
        let nw = self.lambda(w, dir);
        let dv = nv.len() as f64;
        let dw = nw.len() as f64;
        let common: BTreeSet<String> = nv.intersection(&nw).cloned().collect();
        let union = nv.union(&nw).count() as f64;
        let cn = common.len() as f64;

        let mut ra = 0.0;
        let mut aac = 0.0;
        for z in &common {
            let dz = self.lambda(z, dir).len() as f64;
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

        let mut ordered_links = 0usize;
        for z in &common {
            let nz = self.lambda(z, dir);
            for y in &common {
                if y != z && nz.contains(y) {
                    ordered_links += 1;
                }
            }
        }
        let car = cn * ordered_links as f64 / 2.0;

        [cn, ra, aac, ji, pa, sd, hpi, hdi, car]
    }

    /// Full feature vector for one pair: 9 values undirected, 18 directed
    /// with the in-neighborhood block first.
    pub fn pair(&self, v: &str, w: &str) -> Vec<f64> {
        if self.directed {
            let mut out = self.measures(v, w, Dir::In).to_vec();
            out.extend_from_slice(&self.measures(v, w, Dir::Out));
            out
        } else {
            self.measures(v, w, Dir::Und).to_vec()
        }
    }
}

/// Edge pairs of a network as owned strings, for feeding the oracle.
pub fn owned_edges(net: &linkassay::graph::Network) -> Vec<(String, String)> {
    net.edges()
        .into_iter()
        .map(|(a, b)| (a.to_owned(), b.to_owned()))
        .collect()
}
