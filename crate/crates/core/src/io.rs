//! Text file formats.
//!
//! Edge list: one `u<TAB>v` line per edge with `u < v`, 0-indexed. Lines
//! starting with `#` are comments; the first comment line holds the
//! [`GraphSpec`] as `key=value` tokens:
//!
//! ```text
//! # n_bridge=4 bridge_degree=5 n_structures=4 kind=lattice-diag diagonals=1 k=8 seed=1
//! ```
//!
//! Roles file: `node<TAB>role` with role `S<i>` (1-based structure) or `B`.
//!
//! Split directory: `observed.edges`, `heldout.edges`, `negatives.edges`, each
//! an edge list whose second comment line is `split=<part> fraction=<f> seed=<s>`.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graphgen::{GraphSpec, NodePair, NodeRole, StructureKind, SyntheticGraph};
use crate::split::EvalSet;

pub const OBSERVED_FILE: &str = "observed.edges";
pub const HELDOUT_FILE: &str = "heldout.edges";
pub const NEGATIVES_FILE: &str = "negatives.edges";

pub fn spec_header(spec: &GraphSpec) -> String {
    let kind = match spec.kind.diagonals() {
        Some(m) => format!("kind={} diagonals={m}", spec.kind.family()),
        None => format!("kind={}", spec.kind.family()),
    };
    format!(
        "n_bridge={} bridge_degree={} n_structures={} {kind} k={} seed={}",
        spec.n_bridge, spec.bridge_degree, spec.n_structures, spec.k, spec.seed
    )
}

fn key_values(line: &str) -> BTreeMap<&str, &str> {
    line.split_whitespace()
        .filter_map(|t| t.split_once('='))
        .collect()
}

/// Parses the `key=value` form written by [`spec_header`]. Returns `None` if
/// the line carries no spec keys at all.
pub fn parse_spec_header(line: &str) -> Result<Option<GraphSpec>> {
    let kv = key_values(line.trim_start_matches('#'));
    if !kv.contains_key("n_structures") {
        return Ok(None);
    }
    fn get<T: std::str::FromStr>(kv: &BTreeMap<&str, &str>, key: &str) -> Result<T> {
        let raw = kv
            .get(key)
            .ok_or_else(|| Error::Data(format!("graph header is missing '{key}'")))?;
        raw.parse()
            .map_err(|_| Error::Data(format!("graph header has invalid {key}='{raw}'")))
    }
    let diagonals = match kv.get("diagonals") {
        Some(_) => Some(get::<u8>(&kv, "diagonals")?),
        None => None,
    };
    let kind = StructureKind::parse(kv.get("kind").copied().unwrap_or(""), diagonals)
        .map_err(|e| Error::Data(e.to_string()))?;
    Ok(Some(GraphSpec::new(
        get(&kv, "n_bridge")?,
        get(&kv, "bridge_degree")?,
        get(&kv, "n_structures")?,
        kind,
        get(&kv, "k")?,
        get(&kv, "seed")?,
    )))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn write_edge_list(
    path: &Path,
    spec: &GraphSpec,
    comments: &[String],
    edges: &[NodePair],
) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = create(path)?;
    writeln!(w, "# {}", spec_header(spec)).map_err(io)?;
    for c in comments {
        writeln!(w, "# {c}").map_err(io)?;
    }
    for e in edges {
        writeln!(w, "{}\t{}", e.u, e.v).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListFile {
    pub spec: Option<GraphSpec>,
    /// Comment lines without the leading `#`, trimmed.
    pub comments: Vec<String>,
    pub edges: Vec<NodePair>,
}

pub fn read_edge_list(path: &Path) -> Result<EdgeListFile> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), &path.display().to_string())
}

pub fn parse_edge_list(reader: impl BufRead, source: &str) -> Result<EdgeListFile> {
    let err = |line: usize, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let mut out = EdgeListFile {
        spec: None,
        comments: Vec::new(),
        edges: Vec::new(),
    };
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if out.comments.is_empty() {
                out.spec = parse_spec_header(c).map_err(|e| err(lineno, e.to_string()))?;
            }
            out.comments.push(c.to_string());
            continue;
        }
        let mut it = line.split('\t');
        let (a, b) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(err(lineno, "expected 'u<TAB>v'".into())),
        };
        let node = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| err(lineno, format!("bad node id '{s}': {e}")))
        };
        let pair = NodePair::try_new(node(a)?, node(b)?).map_err(|e| err(lineno, e.to_string()))?;
        out.edges.push(pair);
    }
    Ok(out)
}

/// Reads an edge list and rebuilds the graph from its spec header.
pub fn read_graph(path: &Path) -> Result<SyntheticGraph> {
    let file = read_edge_list(path)?;
    let spec = file.spec.ok_or_else(|| {
        Error::Data(format!(
            "{}: first comment line holds no graph spec",
            path.display()
        ))
    })?;
    SyntheticGraph::from_edges(spec, file.edges)
}

pub fn write_roles(path: &Path, graph: &SyntheticGraph, comments: &[String]) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = create(path)?;
    writeln!(w, "# {}", spec_header(graph.spec())).map_err(io)?;
    for c in comments {
        writeln!(w, "# {c}").map_err(io)?;
    }
    for (i, role) in graph.roles().enumerate() {
        writeln!(w, "{i}\t{role}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a roles file into a dense vector indexed by node.
pub fn read_roles(path: &Path) -> Result<Vec<NodeRole>> {
    let source = path.display().to_string();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, msg: String| Error::Parse {
        path: source.clone(),
        line,
        msg,
    };
    let mut roles = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (node, role) = line
            .split_once('\t')
            .ok_or_else(|| err(lineno, "expected 'node<TAB>role'".into()))?;
        let node: usize = node
            .parse()
            .map_err(|e| err(lineno, format!("bad node id '{node}': {e}")))?;
        if node != roles.len() {
            return Err(err(
                lineno,
                format!("expected node {}, found {node}", roles.len()),
            ));
        }
        roles.push(
            role.parse()
                .map_err(|e: Error| err(lineno, e.to_string()))?,
        );
    }
    Ok(roles)
}

/// Writes the three split files into `dir`.
pub fn write_split(dir: &Path, spec: &GraphSpec, set: &EvalSet, comments: &[String]) -> Result<()> {
    let parts = [
        ("observed", OBSERVED_FILE, &set.observed),
        ("heldout", HELDOUT_FILE, &set.heldout),
        ("negatives", NEGATIVES_FILE, &set.negatives),
    ];
    for (name, file, edges) in parts {
        let mut lines = vec![format!(
            "split={name} fraction={} seed={}",
            set.holdout_fraction, set.seed
        )];
        lines.extend(comments.iter().cloned());
        write_edge_list(&dir.join(file), spec, &lines, edges)?;
    }
    Ok(())
}

/// Reads a split directory written by [`write_split`].
pub fn read_split(dir: &Path) -> Result<(GraphSpec, EvalSet)> {
    let mut spec = None;
    let mut meta = None;
    let mut read = |file: &str, expected: &str| -> Result<Vec<NodePair>> {
        let path: PathBuf = dir.join(file);
        let f = read_edge_list(&path)?;
        let this_spec = f
            .spec
            .ok_or_else(|| Error::Data(format!("{}: missing graph spec header", path.display())))?;
        match spec {
            None => spec = Some(this_spec),
            Some(s) if s != this_spec => {
                return Err(Error::Data(format!(
                    "{}: graph spec differs from the other split files",
                    path.display()
                )))
            }
            _ => {}
        }
        let kv_line = f.comments.get(1).cloned().unwrap_or_default();
        let kv = key_values(&kv_line);
        if kv.get("split").copied() != Some(expected) {
            return Err(Error::Data(format!(
                "{}: expected a 'split={expected}' header line",
                path.display()
            )));
        }
        let fraction: f64 = kv
            .get("fraction")
            .and_then(|v| v.parse().ok())
            .unwrap_or(f64::NAN);
        let seed: u64 = kv.get("seed").and_then(|v| v.parse().ok()).unwrap_or(0);
        meta.get_or_insert((fraction, seed));
        Ok(f.edges)
    };
    let observed = read(OBSERVED_FILE, "observed")?;
    let heldout = read(HELDOUT_FILE, "heldout")?;
    let negatives = read(NEGATIVES_FILE, "negatives")?;
    let (holdout_fraction, seed) = meta.unwrap_or((f64::NAN, 0));
    let spec = spec.expect("spec read with the observed file");
    Ok((
        spec,
        EvalSet {
            observed,
            heldout,
            negatives,
            holdout_fraction,
            seed,
        },
    ))
}
