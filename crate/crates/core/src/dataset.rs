//! Dataset manifests: a social network plus exogenous interaction networks
//! over the same population, declared in a TOML file and loaded as a unit.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::classify::ModelSpec;
use crate::error::{Error, Result};
use crate::graph::{edge_overlap, load_edge_list, Network, NetworkStats};

/// Run defaults carried by a manifest's optional `[defaults]` table.
#[derive(Debug, Clone, PartialEq)]
pub struct Defaults {
    pub model: Option<ModelSpec>,
    pub kfold_k: Option<usize>,
    pub seed: Option<u64>,
}

/// A loaded dataset: the social network under assessment plus the
/// exogenous interaction networks.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub sn: Network,
    pub exogenous: Vec<Network>,
    pub defaults: Defaults,
    /// Ingestion notes (dropped self-loops/duplicates), for diagnostics.
    pub warnings: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: String,
    sn: RawDescriptor,
    #[serde(default)]
    exogenous: Vec<RawDescriptor>,
    defaults: Option<RawDefaults>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    id: String,
    path: String,
    directed: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefaults {
    model: Option<String>,
    kfold_k: Option<usize>,
    seed: Option<u64>,
}

impl Dataset {
    /// Assembles a dataset from in-memory networks, enforcing the manifest
    /// invariants: unique ids, at least one exogenous network, homogeneous
    /// directedness.
    pub fn from_networks(name: &str, sn: Network, exogenous: Vec<Network>) -> Result<Dataset> {
        if exogenous.is_empty() {
            return Err(Error::Manifest(format!(
                "dataset `{name}` declares no exogenous networks"
            )));
        }
        let mut ids = vec![sn.id().to_owned()];
        for net in &exogenous {
            if net.directed() != sn.directed() {
                return Err(Error::DirectednessMismatch);
            }
            ids.push(net.id().to_owned());
        }
        ids.sort_unstable();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::Manifest(format!(
                    "duplicate network id `{}` in dataset `{name}`",
                    pair[0]
                )));
            }
        }
        Ok(Dataset {
            name: name.to_owned(),
            sn,
            exogenous,
            defaults: Defaults {
                model: None,
                kfold_k: None,
                seed: None,
            },
            warnings: Vec::new(),
        })
    }

    /// Exogenous network by id.
    pub fn exogenous_by_id(&self, id: &str) -> Result<&Network> {
        self.exogenous
            .iter()
            .find(|net| net.id() == id)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "no exogenous network `{id}` in dataset `{}` (available: {})",
                    self.name,
                    self.exogenous
                        .iter()
                        .map(Network::id)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }

    /// All networks, social network first.
    pub fn all_networks(&self) -> Vec<&Network> {
        std::iter::once(&self.sn).chain(self.exogenous.iter()).collect()
    }
}

/// One row of the dataset summary: per-network statistics plus the edge
/// overlap with the social network.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub id: String,
    pub directed: bool,
    pub stats: NetworkStats,
    pub overlap_with_sn: usize,
}

/// Summary statistics for every network of the dataset, social network
/// first (whose overlap with itself equals its edge count).
pub fn summarize(ds: &Dataset) -> Result<Vec<SummaryRow>> {
    ds.all_networks()
        .into_iter()
        .map(|net| {
            Ok(SummaryRow {
                id: net.id().to_owned(),
                directed: net.directed(),
                stats: net.stats(),
                overlap_with_sn: edge_overlap(net, &ds.sn)?,
            })
        })
        .collect()
}

/// Loads a TOML manifest and every edge list it references. Paths are
/// resolved relative to the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: RawManifest = toml::from_str(&text)
        .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut warnings = Vec::new();
    let mut load = |desc: &RawDescriptor| -> Result<Network> {
        let file: PathBuf = base.join(&desc.path);
        let ingest = load_edge_list(&file, desc.directed, &desc.id)?;
        if ingest.self_loops_dropped > 0 || ingest.duplicates_dropped > 0 {
            warnings.push(format!(
                "{}: dropped {} self-loops and {} duplicate edges",
                desc.id, ingest.self_loops_dropped, ingest.duplicates_dropped
            ));
        }
        Ok(ingest.network)
    };

    let sn = load(&raw.sn)?;
    let exogenous: Vec<Network> = raw.exogenous.iter().map(&mut load).collect::<Result<_>>()?;
    let defaults = match raw.defaults {
        Some(d) => Defaults {
            model: d.model.as_deref().map(ModelSpec::parse_config).transpose()?,
            kfold_k: d.kfold_k,
            seed: d.seed,
        },
        None => Defaults {
            model: None,
            kfold_k: None,
            seed: None,
        },
    };

    let mut ds = Dataset::from_networks(&raw.name, sn, exogenous)?;
    ds.defaults = defaults;
    ds.warnings = warnings;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_edges(dir: &Path, name: &str, text: &str) -> String {
        std::fs::write(dir.join(name), text).unwrap();
        name.to_owned()
    }

    fn manifest_text(nets: &[(&str, &str, bool)], sn: usize, defaults: &str) -> String {
        let mut out = String::from("name = \"test\"\n");
        for (i, (id, path, directed)) in nets.iter().enumerate() {
            let table = if i == sn { "[sn]".to_owned() } else { "[[exogenous]]".to_owned() };
            out.push_str(&format!(
                "{table}\nid = \"{id}\"\npath = \"{path}\"\ndirected = {directed}\n\n"
            ));
        }
        out.push_str(defaults);
        out
    }

    #[test]
    fn loads_networks_and_defaults() {
        let dir = tempfile::tempdir().unwrap();
        write_edges(dir.path(), "sn.edges", "a b\nb c\n");
        write_edges(dir.path(), "g1.edges", "a b\na c\n");
        let text = manifest_text(
            &[("sn", "sn.edges", false), ("g1", "g1.edges", false)],
            0,
            "[defaults]\nmodel = \"knn k=3\"\nkfold_k = 5\nseed = 7\n",
        );
        let path = dir.path().join("manifest.toml");
        std::fs::write(&path, text).unwrap();
        let ds = load_manifest(&path).unwrap();
        assert_eq!(ds.name, "test");
        assert_eq!(ds.sn.id(), "sn");
        assert_eq!(ds.exogenous.len(), 1);
        assert_eq!(ds.defaults.kfold_k, Some(5));
        assert_eq!(ds.defaults.seed, Some(7));
        assert_eq!(ds.defaults.model.as_ref().unwrap().knn_k, 3);
        assert!(ds.warnings.is_empty());

        assert!(ds.exogenous_by_id("g1").is_ok());
        assert!(ds.exogenous_by_id("nope").is_err());
    }

    #[test]
    fn ingestion_warnings_are_collected() {
        let dir = tempfile::tempdir().unwrap();
        write_edges(dir.path(), "sn.edges", "a b\nb a\na a\n");
        write_edges(dir.path(), "g1.edges", "a b\n");
        let text = manifest_text(
            &[("sn", "sn.edges", false), ("g1", "g1.edges", false)],
            0,
            "",
        );
        let path = dir.path().join("manifest.toml");
        std::fs::write(&path, text).unwrap();
        let ds = load_manifest(&path).unwrap();
        assert_eq!(ds.warnings.len(), 1);
        assert!(ds.warnings[0].contains("sn"));
    }

    #[test]
    fn mixed_directedness_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_edges(dir.path(), "sn.edges", "a b\n");
        write_edges(dir.path(), "g1.edges", "a b\n");
        let text = manifest_text(
            &[("sn", "sn.edges", false), ("g1", "g1.edges", true)],
            0,
            "",
        );
        let path = dir.path().join("manifest.toml");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            load_manifest(&path),
            Err(Error::DirectednessMismatch)
        ));
    }

    #[test]
    fn duplicate_ids_and_missing_files_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        write_edges(dir.path(), "sn.edges", "a b\n");
        let dup = manifest_text(
            &[("sn", "sn.edges", false), ("sn", "sn.edges", false)],
            0,
            "",
        );
        let path = dir.path().join("manifest.toml");
        std::fs::write(&path, dup).unwrap();
        assert!(matches!(load_manifest(&path), Err(Error::Manifest(_))));

        let missing = manifest_text(
            &[("sn", "sn.edges", false), ("g1", "missing.edges", false)],
            0,
            "",
        );
        std::fs::write(&path, missing).unwrap();
        assert!(matches!(load_manifest(&path), Err(Error::Io { .. })));
    }

    #[test]
    fn summary_rows_include_overlap() {
        let sn = Network::from_edges("sn", false, &[("a", "b"), ("b", "c")]);
        let g1 = Network::from_edges("g1", false, &[("b", "c"), ("c", "d")]);
        let ds = Dataset::from_networks("t", sn, vec![g1]).unwrap();
        let rows = summarize(&ds).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].id, "sn");
        assert_eq!(rows[0].overlap_with_sn, 2);
        assert_eq!(rows[1].overlap_with_sn, 1);
        assert_eq!(rows[1].stats.n, 3);
    }

    #[test]
    fn datasets_need_an_exogenous_network() {
        let sn = Network::from_edges("sn", false, &[("a", "b")]);
        assert!(Dataset::from_networks("t", sn, vec![]).is_err());
    }
}
