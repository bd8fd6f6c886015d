//! Link scorers.
//!
//! Native similarity indices see only the observed graph. Oracle scorers
//! (`oracle-ideal`, `planted-sbm`) read the generator parameters instead and
//! are labelled as such. Scores from external tools come in through
//! [`import_scores`].

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use crate::analytic::{planted_probabilities, PlantedProbabilities};
use crate::error::{Error, Result};
use crate::graphgen::{structural_link, GraphSpec, NodePair, NodeRole};
use crate::seed;

/// Adjacency lists of the observed (training) graph.
#[derive(Debug, Clone)]
pub struct ObservedGraph {
    neighbors: Vec<Vec<u32>>,
}

impl ObservedGraph {
    pub fn new(n_nodes: usize, edges: &[NodePair]) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n_nodes];
        for e in edges {
            if e.v as usize >= n_nodes {
                return Err(Error::Data(format!("edge {e} outside {n_nodes} nodes")));
            }
            neighbors[e.u as usize].push(e.v);
            neighbors[e.v as usize].push(e.u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ObservedGraph { neighbors })
    }

    pub fn n_nodes(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, node: u32) -> &[u32] {
        self.neighbors
            .get(node as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn degree(&self, node: u32) -> usize {
        self.neighbors(node).len()
    }

    /// Calls `f` on every common neighbour of the pair (sorted merge).
    fn for_each_common(&self, pair: NodePair, mut f: impl FnMut(u32)) {
        let (a, b) = (self.neighbors(pair.u), self.neighbors(pair.v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    f(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

pub fn common_neighbors(graph: &ObservedGraph, pair: NodePair) -> f64 {
    let mut n = 0usize;
    graph.for_each_common(pair, |_| n += 1);
    n as f64
}

/// `|Γ(u) ∩ Γ(v)| / |Γ(u) ∪ Γ(v)|`, 0 when both neighbourhoods are empty.
pub fn jaccard(graph: &ObservedGraph, pair: NodePair) -> f64 {
    let common = common_neighbors(graph, pair);
    let union = (graph.degree(pair.u) + graph.degree(pair.v)) as f64 - common;
    if union == 0.0 {
        0.0
    } else {
        common / union
    }
}

/// `Σ 1/ln(deg w)` over common neighbours `w`, natural log.
pub fn adamic_adar(graph: &ObservedGraph, pair: NodePair) -> f64 {
    let mut score = 0.0;
    // a common neighbour is adjacent to both endpoints, so its degree is >= 2
    graph.for_each_common(pair, |w| score += 1.0 / (graph.degree(w) as f64).ln());
    score
}

/// Ideal scorer: 1 for a structural link, `D_B/N_S` for a structure–bridge
/// pair, 0 for everything else.
pub fn oracle_ideal(spec: &GraphSpec, pair: NodePair) -> f64 {
    if structural_link(spec, pair) {
        return 1.0;
    }
    match pair_roles(spec, pair) {
        (NodeRole::Structure(_), NodeRole::Bridge) | (NodeRole::Bridge, NodeRole::Structure(_)) => {
            spec.bridge_probability()
        }
        _ => 0.0,
    }
}

/// Planted-SBM scorer: `q` within a structure, `p` between structure and bridge, 0 otherwise.
pub fn planted_sbm_score(spec: &GraphSpec, probs: &PlantedProbabilities, pair: NodePair) -> f64 {
    match pair_roles(spec, pair) {
        (NodeRole::Structure(a), NodeRole::Structure(b)) if a == b => probs.q,
        (NodeRole::Structure(_), NodeRole::Bridge) | (NodeRole::Bridge, NodeRole::Structure(_)) => {
            probs.p
        }
        _ => 0.0,
    }
}

/// Pseudo-random score in `[0, 1)`, a pure function of `(seed, pair)`.
pub fn random_baseline(seed: u64, pair: NodePair) -> f64 {
    let h = seed::mix64(seed::mix64(seed ^ seed::stream::RANDOM_SCORES) ^ pair.key());
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn pair_roles(spec: &GraphSpec, pair: NodePair) -> (NodeRole, NodeRole) {
    (
        spec.role_unchecked(pair.u as usize),
        spec.role_unchecked(pair.v as usize),
    )
}

/// Built-in predictors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredictorKind {
    AdamicAdar,
    CommonNeighbors,
    Jaccard,
    OracleIdeal,
    PlantedSbm,
    Random,
}

impl PredictorKind {
    pub const ALL: [PredictorKind; 6] = [
        PredictorKind::AdamicAdar,
        PredictorKind::CommonNeighbors,
        PredictorKind::Jaccard,
        PredictorKind::OracleIdeal,
        PredictorKind::PlantedSbm,
        PredictorKind::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PredictorKind::AdamicAdar => "adamic-adar",
            PredictorKind::CommonNeighbors => "common-neighbors",
            PredictorKind::Jaccard => "jaccard",
            PredictorKind::OracleIdeal => "oracle-ideal",
            PredictorKind::PlantedSbm => "planted-sbm",
            PredictorKind::Random => "random",
        }
    }

    /// Whether the predictor reads generation metadata rather than the observed graph.
    pub fn is_oracle(&self) -> bool {
        matches!(self, PredictorKind::OracleIdeal | PredictorKind::PlantedSbm)
    }

    /// Binds the predictor to its inputs. Oracles need `metadata`.
    pub fn bind<'a>(
        &self,
        observed: &'a ObservedGraph,
        metadata: Option<&'a GraphSpec>,
        seed: u64,
    ) -> Result<Scorer<'a>> {
        let need_meta = || {
            metadata
                .ok_or_else(|| Error::Data(format!("predictor '{self}' needs generation metadata")))
        };
        Ok(match self {
            PredictorKind::AdamicAdar => Scorer::AdamicAdar(observed),
            PredictorKind::CommonNeighbors => Scorer::CommonNeighbors(observed),
            PredictorKind::Jaccard => Scorer::Jaccard(observed),
            PredictorKind::OracleIdeal => Scorer::OracleIdeal(need_meta()?),
            PredictorKind::PlantedSbm => {
                let spec = need_meta()?;
                Scorer::PlantedSbm(spec, planted_probabilities(spec)?)
            }
            PredictorKind::Random => Scorer::Random(seed),
        })
    }
}

impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredictorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('_', "-").to_ascii_lowercase();
        PredictorKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| {
                let known: Vec<_> = PredictorKind::ALL.iter().map(|k| k.name()).collect();
                Error::Config(format!(
                    "unknown predictor '{s}' (known: {})",
                    known.join(", ")
                ))
            })
    }
}

/// A predictor bound to the data it is allowed to see.
#[derive(Debug, Clone)]
pub enum Scorer<'a> {
    AdamicAdar(&'a ObservedGraph),
    CommonNeighbors(&'a ObservedGraph),
    Jaccard(&'a ObservedGraph),
    OracleIdeal(&'a GraphSpec),
    PlantedSbm(&'a GraphSpec, PlantedProbabilities),
    Random(u64),
}

impl Scorer<'_> {
    pub fn score(&self, pair: NodePair) -> f64 {
        match self {
            Scorer::AdamicAdar(g) => adamic_adar(g, pair),
            Scorer::CommonNeighbors(g) => common_neighbors(g, pair),
            Scorer::Jaccard(g) => jaccard(g, pair),
            Scorer::OracleIdeal(spec) => oracle_ideal(spec, pair),
            Scorer::PlantedSbm(spec, probs) => planted_sbm_score(spec, probs, pair),
            Scorer::Random(seed) => random_baseline(*seed, pair),
        }
    }
}

/// Scores attached to node pairs, as produced by a predictor or read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPairs {
    pub predictor_name: String,
    pub entries: Vec<(NodePair, f64)>,
}

impl ScoredPairs {
    pub fn from_scorer(
        name: impl Into<String>,
        scorer: &Scorer<'_>,
        pairs: impl IntoIterator<Item = NodePair>,
    ) -> Self {
        ScoredPairs {
            predictor_name: name.into(),
            entries: pairs.into_iter().map(|p| (p, scorer.score(p))).collect(),
        }
    }

    pub fn to_map(&self) -> HashMap<NodePair, f64> {
        self.entries.iter().copied().collect()
    }

    /// Looks up the score of every pair, failing on the first one not present.
    pub fn scores_for(&self, pairs: &[NodePair]) -> Result<Vec<f64>> {
        let map = self.to_map();
        pairs
            .iter()
            .map(|p| {
                map.get(p).copied().ok_or_else(|| {
                    Error::Data(format!(
                        "score table '{}' has no entry for pair {p}",
                        self.predictor_name
                    ))
                })
            })
            .collect()
    }
}

/// Reads a `u<TAB>v<TAB>score` file. The predictor name is taken from a
/// `# predictor=<name>` comment if present, else the file stem.
pub fn import_scores(path: impl AsRef<Path>) -> Result<ScoredPairs> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "imported".into());
    parse_scores(BufReader::new(file), &path.display().to_string(), &fallback)
}

pub fn parse_scores(reader: impl BufRead, source: &str, default_name: &str) -> Result<ScoredPairs> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let mut name = None;
    let mut entries = Vec::new();
    let mut seen: HashMap<NodePair, usize> = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some(n) = token.strip_prefix("predictor=") {
                    name.get_or_insert_with(|| n.to_string());
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let node = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| parse_err(lineno, format!("bad node id '{s}': {e}")))
        };
        let (a, b) = (node(fields[0])?, node(fields[1])?);
        let score: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|e| parse_err(lineno, format!("bad score '{}': {e}", fields[2])))?;
        if !score.is_finite() {
            return Err(parse_err(lineno, format!("non-finite score {score}")));
        }
        let pair = NodePair::try_new(a, b).map_err(|e| parse_err(lineno, e.to_string()))?;
        if let Some(first) = seen.insert(pair, lineno) {
            return Err(parse_err(
                lineno,
                format!("duplicate pair {pair} (first seen on line {first})"),
            ));
        }
        entries.push((pair, score));
    }
    Ok(ScoredPairs {
        predictor_name: name.unwrap_or_else(|| default_name.to_string()),
        entries,
    })
}
