//! Graph inputs: single graphs, input lists and labeled corpus manifests.
//!
//! A corpus manifest is a JSON object with exactly one of these keys:
//!
//! ```json
//! {"graphs": [{"path": "a.txt", "label": "x"}, {"named": "K4", "label": "y"}]}
//! {"synthetic": {"settings": [{"nv": 200, "ne": 2000, "rho": 0.1}], "per_setting": 15, "seed": 0}}
//! {"sampled": {"sources": [{"path": "big.txt", "label": "x"}], "size": 100, "per_source": 10, "seed": 0}}
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use momentdist::graph::{parse_edge_list_str, parse_named, sample_subgraph, EdgeListOptions, Indexing};
use momentdist::learn::{LabeledCorpus, Setting};
use momentdist::Graph;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::manifest::Recorder;

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CorpusSpec {
    Graphs(Vec<GraphEntry>),
    Synthetic {
        settings: Vec<Setting>,
        per_setting: usize,
        seed: u64,
    },
    Sampled {
        sources: Vec<GraphEntry>,
        size: usize,
        per_source: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEntry {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub named: Option<String>,
    pub label: String,
}

pub fn load_edge_list(rec: &mut Recorder, path: &Path, indexing: Indexing) -> CliResult<Graph> {
    let text = rec.read_string(path)?;
    parse_edge_list_str(&text, EdgeListOptions::with_indexing(indexing))
        .map_err(|e| CliError::from(e).context(path.display()))
}

pub fn load_named(spec: &str) -> CliResult<Graph> {
    Ok(parse_named(spec)?)
}

/// Expands directories (sorted, non-recursive, hidden files skipped) and
/// keeps files as given.
pub fn expand_inputs(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| CliError::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file())
                .filter(|f| !file_label(f).starts_with('.'))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_entry(rec: &mut Recorder, entry: &GraphEntry, base: &Path, indexing: Indexing) -> CliResult<(Graph, String)> {
    match (&entry.path, &entry.named) {
        (Some(p), None) => {
            let full = if p.is_absolute() { p.clone() } else { base.join(p) };
            Ok((load_edge_list(rec, &full, indexing)?, file_label(p)))
        }
        (None, Some(n)) => Ok((load_named(n)?, n.clone())),
        _ => Err(CliError::input(format!(
            "corpus entry labeled `{}` needs exactly one of `path` or `named`",
            entry.label
        ))),
    }
}

/// Maps string labels to class indices in order of first appearance.
fn index_labels(labels: &[String]) -> Vec<usize> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l.as_str()).or_insert(next)
        })
        .collect()
}

pub fn load_corpus(rec: &mut Recorder, manifest: &Path, indexing: Indexing) -> CliResult<LabeledCorpus> {
    let text = rec.read_string(manifest)?;
    let spec: CorpusSpec =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let corpus = match spec {
        CorpusSpec::Graphs(entries) => {
            let mut graphs = Vec::new();
            let mut names = Vec::new();
            let mut labels = Vec::new();
            for e in &entries {
                let (g, name) = load_entry(rec, e, &base, indexing)?;
                graphs.push(g);
                names.push(name);
                labels.push(e.label.clone());
            }
            LabeledCorpus::new(graphs, index_labels(&labels), names)?
        }
        CorpusSpec::Synthetic {
            settings,
            per_setting,
            seed,
        } => {
            rec.seed(seed);
            LabeledCorpus::synthetic(&settings, per_setting, seed)?
        }
        CorpusSpec::Sampled {
            sources,
            size,
            per_source,
            seed,
        } => {
            rec.seed(seed);
            let mut graphs = Vec::new();
            let mut names = Vec::new();
            let mut labels = Vec::new();
            for e in &sources {
                let (g, name) = load_entry(rec, e, &base, indexing)?;
                for r in 0..per_source {
                    let s = seed.wrapping_add(graphs.len() as u64);
                    graphs.push(sample_subgraph(&g, size, s)?);
                    names.push(format!("{name}_{r}"));
                    labels.push(e.label.clone());
                }
            }
            LabeledCorpus::new(graphs, index_labels(&labels), names)?
        }
    };
    if corpus.len() < 2 {
        return Err(CliError::input("corpus needs at least two graphs"));
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_indexed_by_first_appearance() {
        let l: Vec<String> = ["b", "a", "b", "c", "a"].iter().map(|s| s.to_string()).collect();
        assert_eq!(index_labels(&l), vec![0, 1, 0, 2, 1]);
    }

    #[test]
    fn manifest_forms_parse() {
        let g: CorpusSpec = serde_json::from_str(r#"{"graphs":[{"named":"K4","label":"x"}]}"#).unwrap();
        assert!(matches!(g, CorpusSpec::Graphs(ref v) if v.len() == 1));
        let s: CorpusSpec = serde_json::from_str(
            r#"{"synthetic":{"settings":[{"nv":10,"ne":20,"rho":0.5}],"per_setting":3,"seed":1}}"#,
        )
        .unwrap();
        assert!(matches!(s, CorpusSpec::Synthetic { per_setting: 3, .. }));
        assert!(serde_json::from_str::<CorpusSpec>(r#"{"other":[]}"#).is_err());
    }

    #[test]
    fn entry_needs_one_source() {
        let mut rec = Recorder::new("t", &serde_json::json!({})).unwrap();
        let e = GraphEntry {
            path: None,
            named: None,
            label: "x".into(),
        };
        let err = load_entry(&mut rec, &e, Path::new("."), Indexing::Auto).unwrap_err();
        assert_eq!(err.code(), 2);
    }
}
