//! Edge-list and label-file ingestion.
//!
//! Edge lists are UTF-8 text with one edge per line given as two
//! whitespace-separated node ids; anything after `#` is a comment. Node ids
//! are arbitrary strings, indexed in order of first appearance. Direction is
//! ignored, duplicate edges collapse and self-loops are dropped.
//!
//! Label files hold `node_id label` pairs. Distinct label strings become
//! clusters `0..r` in order of first appearance; nodes without a label are
//! treated as outliers.

use std::collections::{HashMap, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gsbm::{Graph, GroundTruth};

#[derive(Clone, Debug, Default)]
pub struct EdgeListOptions {
    /// Keep only the largest connected component.
    pub largest_component: bool,
    pub labels_path: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub truth: Option<GroundTruth>,
    /// `node_ids[i]` is the original id of node `i`.
    pub node_ids: Vec<String>,
    /// Label strings, indexed by cluster.
    pub label_names: Vec<String>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

fn two_fields<'a>(path: &Path, lineno: usize, line: &'a str) -> Result<Option<(&'a str, &'a str)>> {
    let mut it = line.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (None, _, _) => Ok(None),
        (Some(a), Some(b), None) => Ok(Some((a, b))),
        _ => Err(Error::Parse {
            path: path.to_owned(),
            line: lineno,
            msg: format!("expected two whitespace-separated fields, got `{}`", line.trim()),
        }),
    }
}

pub fn load_edge_list(path: impl AsRef<Path>, options: &EdgeListOptions) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ids: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |id: &str, index: &mut HashMap<String, usize>| -> usize {
        *index.entry(id.to_owned()).or_insert_with(|| {
            ids.push(id.to_owned());
            ids.len() - 1
        })
    };
    for (k, line) in text.lines().enumerate() {
        if let Some((a, b)) = two_fields(path, k + 1, strip_comment(line))? {
            let i = intern(a, &mut index);
            let j = intern(b, &mut index);
            if i != j {
                edges.push((i, j));
            }
        }
    }
    if ids.is_empty() {
        return Err(Error::Parse { path: path.to_owned(), line: 0, msg: "no edges found".into() });
    }
    let mut graph = Graph::from_edges(ids.len(), &edges)?;

    let mut keep: Vec<usize> = (0..ids.len()).collect();
    if options.largest_component {
        keep = largest_component(&graph);
        graph = graph.induced(&keep)?;
    }
    let node_ids: Vec<String> = keep.iter().map(|&i| ids[i].clone()).collect();

    let (truth, label_names) = match &options.labels_path {
        Some(lp) => {
            let mut position = vec![None; ids.len()];
            for (new, &old) in keep.iter().enumerate() {
                position[old] = Some(new);
            }
            let (t, names) = load_labels(lp, &index, &position)?;
            (Some(t), names)
        }
        None => (None, Vec::new()),
    };
    Ok(LoadedGraph { graph, truth, node_ids, label_names })
}

fn load_labels(
    path: &Path,
    index: &HashMap<String, usize>,
    position: &[Option<usize>],
) -> Result<(GroundTruth, Vec<String>)> {
    let text = read(path)?;
    let kept = position.iter().flatten().count();
    let mut raw: Vec<Option<usize>> = vec![None; kept];
    let mut names: Vec<String> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let Some((node, label)) = two_fields(path, k + 1, strip_comment(line))? else {
            continue;
        };
        let &old = index.get(node).ok_or_else(|| Error::UnknownNode {
            path: path.to_owned(),
            line: k + 1,
            node: node.to_owned(),
        })?;
        // labelled nodes outside the kept component are ignored
        let Some(new) = position[old] else { continue };
        let c = match names.iter().position(|n| n == label) {
            Some(c) => c,
            None => {
                names.push(label.to_owned());
                names.len() - 1
            }
        };
        if raw[new].replace(c).is_some_and(|prev| prev != c) {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: k + 1,
                msg: format!("conflicting labels for node `{node}`"),
            });
        }
    }
    let r = names.len();
    let labels = raw.into_iter().map(|l| l.unwrap_or(r)).collect();
    Ok((GroundTruth::new(labels, r)?, names))
}

/// Nodes of the largest connected component in increasing order. Ties go to
/// the component holding the lowest node index.
pub fn largest_component(g: &Graph) -> Vec<usize> {
    let n = g.n_nodes();
    let mut comp = vec![usize::MAX; n];
    let mut best: (usize, usize) = (0, 0);
    let mut queue = VecDeque::new();
    let mut c = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = c;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for v in g.neighbors(u) {
                if comp[v] == usize::MAX {
                    comp[v] = c;
                    queue.push_back(v);
                }
            }
        }
        if size > best.1 {
            best = (c, size);
        }
        c += 1;
    }
    (0..n).filter(|&i| comp[i] == best.0).collect()
}

/// Writes `node_id label` lines, labels shifted to start at 1.
pub fn write_labels(path: impl AsRef<Path>, node_ids: &[String], labels: &[usize]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (id, &l) in node_ids.iter().zip(labels) {
        out.push_str(&format!("{id} {}\n", l + 1));
    }
    fs::write(path, out).map_err(|source| Error::Io { path: path.to_owned(), source })
}
