//! Regenerates the committed synthetic dataset under fixtures/rg-synthetic.
//!
//! Five undirected networks over a 60-node population: a planted-partition
//! interaction backbone rewired at increasing rates, plus one small
//! uncorrelated network. All seeds are fixed, so reruns are byte-identical.

use std::fs;
use std::path::Path;

use linkassay::graph::{random_graph_named, Network};
use linkassay::synthetic::{planted_partition, rewire_fraction, PlantedOptions};

fn edge_lines(net: &Network) -> String {
    let mut out = String::new();
    let mut isolated: Vec<bool> = vec![true; net.node_count()];
    for (u, v) in net.edges() {
        isolated[net.node_index(u).expect("own edge")] = false;
        isolated[net.node_index(v).expect("own edge")] = false;
        out.push_str(u);
        out.push(' ');
        out.push_str(v);
        out.push('\n');
    }
    // A self-loop line registers the node and is dropped as an edge, so
    // isolated nodes survive the file round trip.
    for (i, lonely) in isolated.iter().enumerate() {
        if *lonely {
            let label = net.label(i);
            out.push_str(label);
            out.push(' ');
            out.push_str(label);
            out.push('\n');
        }
    }
    out
}

const MANIFEST: &str = r#"name = "rg-synthetic"

[sn]
id = "facebook"
path = "facebook.edges"
directed = false

[[exogenous]]
id = "work"
path = "work.edges"
directed = false

[[exogenous]]
id = "lunch"
path = "lunch.edges"
directed = false

[[exogenous]]
id = "leisure"
path = "leisure.edges"
directed = false

[[exogenous]]
id = "coauthor"
path = "coauthor.edges"
directed = false

[defaults]
model = "svm_rbf"
kfold_k = 10
seed = 7
"#;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rg-synthetic");
    fs::create_dir_all(&dir).expect("create fixture directory");

    let base = planted_partition("base", &PlantedOptions::default(), 90).expect("base network");
    let nets = [
        ("facebook", rewire_fraction(&base, "facebook", 0.05, 91).expect("rewire")),
        ("work", rewire_fraction(&base, "work", 0.10, 92).expect("rewire")),
        ("lunch", rewire_fraction(&base, "lunch", 0.15, 93).expect("rewire")),
        ("leisure", rewire_fraction(&base, "leisure", 0.40, 94).expect("rewire")),
        ("coauthor", random_graph_named("coauthor", 25, 42, 95, false).expect("random graph")),
    ];
    for (name, net) in &nets {
        let path = dir.join(format!("{name}.edges"));
        fs::write(&path, edge_lines(net)).expect("write edge list");
        println!("{}: n={} m={}", path.display(), net.node_count(), net.edge_count());
    }
    fs::write(dir.join("manifest.toml"), MANIFEST).expect("write manifest");
    println!("{}", dir.join("manifest.toml").display());
}
