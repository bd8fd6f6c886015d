//! Synthetic bridge+structure graphs.
//!
//! A graph has `M` structures of `ω` nodes each, laid out in contiguous index
//! blocks (`structure s` owns `s·ω .. (s+1)·ω`), followed by `N_B` bridge
//! nodes. Inside a structure the links are fixed by the structure kind; each
//! (bridge, structure node) pair is linked independently with probability
//! `D_B / N_S`. Bridges never link to bridges and structures never link to
//! each other.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

/// Deterministic connectivity pattern inside one structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    /// `k` nodes, all pairs linked.
    Clique,
    /// `k × k` square grid, row-major local indices, no wrap-around.
    Lattice,
    /// Square grid with 1 (main) or 2 (both) diagonals closed in every unit cell.
    LatticeDiag(u8),
}

impl StructureKind {
    pub fn lattice_diag(diagonals: u8) -> Result<Self> {
        match diagonals {
            1 | 2 => Ok(StructureKind::LatticeDiag(diagonals)),
            m => Err(Error::Config(format!(
                "lattice-diag needs 1 or 2 diagonal directions, got {m}"
            ))),
        }
    }

    /// Parses the CLI/config spelling; `diagonals` is only consulted for `lattice-diag`.
    pub fn parse(name: &str, diagonals: Option<u8>) -> Result<Self> {
        match name {
            "clique" => Ok(StructureKind::Clique),
            "lattice" => Ok(StructureKind::Lattice),
            "lattice-diag" | "lattice_diag" => Self::lattice_diag(diagonals.unwrap_or(1)),
            "lattice-diag1" => Ok(StructureKind::LatticeDiag(1)),
            "lattice-diag2" => Ok(StructureKind::LatticeDiag(2)),
            other => Err(Error::Config(format!(
                "unknown structure '{other}' (expected clique, lattice or lattice-diag)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StructureKind::LatticeDiag(m) => Self::lattice_diag(m).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Base name without the diagonal count.
    pub fn family(&self) -> &'static str {
        match self {
            StructureKind::Clique => "clique",
            StructureKind::Lattice => "lattice",
            StructureKind::LatticeDiag(_) => "lattice-diag",
        }
    }

    pub fn diagonals(&self) -> Option<u8> {
        match *self {
            StructureKind::LatticeDiag(m) => Some(m),
            _ => None,
        }
    }

    /// Node count `ω` of one structure.
    pub fn structure_size(&self, k: usize) -> usize {
        match self {
            StructureKind::Clique => k,
            StructureKind::Lattice | StructureKind::LatticeDiag(_) => k * k,
        }
    }

    /// Number of links inside one structure.
    pub fn structure_edge_count(&self, k: usize) -> usize {
        let k1 = k.saturating_sub(1);
        match *self {
            StructureKind::Clique => k * k1 / 2,
            StructureKind::Lattice => 2 * k * k1,
            StructureKind::LatticeDiag(m) => 2 * k * k1 + m as usize * k1 * k1,
        }
    }

    /// The link function between two local indices of the same structure.
    pub fn structure_link(&self, k: usize, a: usize, b: usize) -> Result<bool> {
        let size = self.structure_size(k);
        if a >= size || b >= size {
            return Err(Error::Domain(format!(
                "local index out of range: ({a}, {b}) with structure size {size}"
            )));
        }
        if a == b {
            return Err(Error::Domain(format!(
                "self pair ({a}, {a}) has no link value"
            )));
        }
        Ok(self.link_unchecked(k, a, b))
    }

    fn link_unchecked(&self, k: usize, a: usize, b: usize) -> bool {
        if let StructureKind::Clique = self {
            return true;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let (ra, ca) = (a / k, a % k);
        let (rb, cb) = (b / k, b % k);
        // b > a in row-major order, so rb >= ra.
        let dr = rb - ra;
        let horizontal = dr == 0 && cb == ca + 1;
        let vertical = dr == 1 && cb == ca;
        if horizontal || vertical {
            return true;
        }
        match *self {
            StructureKind::LatticeDiag(m) if dr == 1 => {
                let main = cb == ca + 1;
                let anti = m == 2 && ca == cb + 1;
                main || anti
            }
            _ => false,
        }
    }

    /// All links of one structure as `(a, b)` local pairs with `a < b`,
    /// enumerated from the grid geometry.
    pub fn local_edges(&self, k: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.structure_edge_count(k));
        match *self {
            StructureKind::Clique => {
                for a in 0..k {
                    for b in a + 1..k {
                        out.push((a, b));
                    }
                }
            }
            StructureKind::Lattice | StructureKind::LatticeDiag(_) => {
                let diagonals = self.diagonals().unwrap_or(0);
                for r in 0..k {
                    for c in 0..k {
                        let a = r * k + c;
                        if c + 1 < k {
                            out.push((a, a + 1));
                        }
                        if r + 1 < k {
                            out.push((a, a + k));
                            if diagonals >= 1 && c + 1 < k {
                                out.push((a, a + k + 1));
                            }
                            if diagonals >= 2 && c + 1 < k {
                                // anti-diagonal of the cell whose top-left is (r, c)
                                out.push((a + 1, a + k));
                            }
                        }
                    }
                }
                out.sort_unstable();
            }
        }
        out
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureKind::LatticeDiag(m) => write!(f, "lattice-diag{m}"),
            other => f.write_str(other.family()),
        }
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StructureKind::parse(s, None)
    }
}

/// Generator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSpec {
    /// `N_B`
    pub n_bridge: usize,
    /// `D_B`, expected bridge degree.
    pub bridge_degree: f64,
    /// `M`
    pub n_structures: usize,
    pub kind: StructureKind,
    /// Clique size, or lattice side length.
    pub k: usize,
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(
        n_bridge: usize,
        bridge_degree: f64,
        n_structures: usize,
        kind: StructureKind,
        k: usize,
        seed: u64,
    ) -> Self {
        GraphSpec {
            n_bridge,
            bridge_degree,
            n_structures,
            kind,
            k,
            seed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `ω`
    pub fn structure_size(&self) -> usize {
        self.kind.structure_size(self.k)
    }

    /// `N_S = M·ω`
    pub fn n_structure_nodes(&self) -> usize {
        self.n_structures * self.structure_size()
    }

    /// `N = N_S + N_B`
    pub fn n_nodes(&self) -> usize {
        self.n_structure_nodes() + self.n_bridge
    }

    /// Link probability of each (bridge, structure node) pair, `D_B / N_S`.
    pub fn bridge_probability(&self) -> f64 {
        self.bridge_degree / self.n_structure_nodes() as f64
    }

    /// `C_S = N_S / N`
    pub fn structure_fraction(&self) -> f64 {
        self.n_structure_nodes() as f64 / self.n_nodes() as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if self.n_structures == 0 {
            return Err(Error::Config(
                "M (number of structures) must be >= 1".into(),
            ));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be >= 1".into()));
        }
        if !self.bridge_degree.is_finite() || self.bridge_degree < 0.0 {
            return Err(Error::Config(format!(
                "D_B must be a finite non-negative number, got {}",
                self.bridge_degree
            )));
        }
        let p = self.bridge_probability();
        if p > 1.0 {
            return Err(Error::Config(format!(
                "bridge link probability D_B/N_S = {}/{} = {p} exceeds 1",
                self.bridge_degree,
                self.n_structure_nodes()
            )));
        }
        if self.n_nodes() > u32::MAX as usize {
            return Err(Error::Config(format!(
                "graph with {} nodes exceeds the 32-bit node index range",
                self.n_nodes()
            )));
        }
        Ok(())
    }

    /// Allocation function: role of `node`.
    pub fn role_of(&self, node: usize) -> Result<NodeRole> {
        let n = self.n_nodes();
        if node >= n {
            return Err(Error::Domain(format!("node {node} out of range (N = {n})")));
        }
        Ok(self.role_unchecked(node))
    }

    #[inline]
    pub(crate) fn role_unchecked(&self, node: usize) -> NodeRole {
        if node < self.n_structure_nodes() {
            NodeRole::Structure(node / self.structure_size() + 1)
        } else {
            NodeRole::Bridge
        }
    }
}

/// Role of a node: its 1-based structure index, or bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRole {
    Structure(usize),
    Bridge,
}

impl fmt::Display for NodeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRole::Structure(s) => write!(f, "S{s}"),
            NodeRole::Bridge => f.write_str("B"),
        }
    }
}

impl FromStr for NodeRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "B" {
            return Ok(NodeRole::Bridge);
        }
        s.strip_prefix('S')
            .and_then(|i| i.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .map(NodeRole::Structure)
            .ok_or_else(|| Error::Data(format!("invalid role '{s}' (expected S<index> or B)")))
    }
}

/// Unordered node pair stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePair {
    pub u: u32,
    pub v: u32,
}

impl NodePair {
    /// Normalizes the order. Panics on a self pair.
    pub fn new(a: u32, b: u32) -> Self {
        assert_ne!(a, b, "self pair ({a}, {a})");
        if a < b {
            NodePair { u: a, v: b }
        } else {
            NodePair { u: b, v: a }
        }
    }

    pub fn try_new(a: u32, b: u32) -> Result<Self> {
        if a == b {
            return Err(Error::Data(format!("self pair ({a}, {a})")));
        }
        Ok(NodePair::new(a, b))
    }

    #[inline]
    pub fn key(&self) -> u64 {
        ((self.u as u64) << 32) | self.v as u64
    }
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// A generated instance. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SyntheticGraph {
    spec: GraphSpec,
    edges: Vec<NodePair>,
    edge_keys: HashSet<u64>,
}

/// Builds the graph described by `spec`, drawing bridge links from a
/// `ChaCha8Rng` seeded with `spec.seed`.
pub fn generate(spec: &GraphSpec) -> Result<SyntheticGraph> {
    spec.validate()?;
    let omega = spec.structure_size();
    let n_s = spec.n_structure_nodes();
    let local = spec.kind.local_edges(spec.k);

    let expected_bridge = (spec.bridge_degree * spec.n_bridge as f64).ceil() as usize;
    let mut edges = Vec::with_capacity(local.len() * spec.n_structures + expected_bridge);
    for s in 0..spec.n_structures {
        let base = s * omega;
        edges.extend(
            local
                .iter()
                .map(|&(a, b)| NodePair::new((base + a) as u32, (base + b) as u32)),
        );
    }

    let p = spec.bridge_probability();
    let mut rng = seed::rng(seed::derive(spec.seed, &[seed::stream::GRAPH]));
    for bridge in n_s..spec.n_nodes() {
        for node in 0..n_s {
            if rng.gen_bool(p) {
                edges.push(NodePair::new(node as u32, bridge as u32));
            }
        }
    }
    edges.sort_unstable();
    let edge_keys = edges.iter().map(NodePair::key).collect();
    Ok(SyntheticGraph {
        spec: *spec,
        edges,
        edge_keys,
    })
}

impl SyntheticGraph {
    /// Reassembles a graph from a spec and an edge list, e.g. after reading
    /// it from disk. Checks ranges, self loops and duplicates only; model
    /// consistency is the census's job.
    pub fn from_edges(spec: GraphSpec, mut edges: Vec<NodePair>) -> Result<Self> {
        spec.validate()?;
        let n = spec.n_nodes() as u32;
        if let Some(bad) = edges.iter().find(|e| e.v >= n) {
            return Err(Error::Data(format!(
                "edge {bad} references a node >= N = {n}"
            )));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Data(format!("duplicate edge {}", w[0])));
        }
        let edge_keys = edges.iter().map(NodePair::key).collect();
        Ok(SyntheticGraph {
            spec,
            edges,
            edge_keys,
        })
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn n_nodes(&self) -> usize {
        self.spec.n_nodes()
    }

    /// Sorted, unique edges.
    pub fn edges(&self) -> &[NodePair] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, pair: NodePair) -> bool {
        self.edge_keys.contains(&pair.key())
    }

    pub fn role_of(&self, node: usize) -> Result<NodeRole> {
        self.spec.role_of(node)
    }

    pub fn roles(&self) -> impl Iterator<Item = NodeRole> + '_ {
        (0..self.n_nodes()).map(|i| self.spec.role_unchecked(i))
    }

    /// Whether both endpoints sit in the same structure and the structure's
    /// link function connects them.
    pub fn is_structural_pair(&self, pair: NodePair) -> bool {
        structural_link(&self.spec, pair)
    }
}

/// Link function evaluated on global indices; false for any pair that is not
/// inside a single structure.
pub(crate) fn structural_link(spec: &GraphSpec, pair: NodePair) -> bool {
    let (u, v) = (pair.u as usize, pair.v as usize);
    match (spec.role_unchecked(u), spec.role_unchecked(v)) {
        (NodeRole::Structure(a), NodeRole::Structure(b)) if a == b => {
            let omega = spec.structure_size();
            spec.kind.link_unchecked(spec.k, u % omega, v % omega)
        }
        _ => false,
    }
}
