//! Edge-class bookkeeping.
//!
//! Every unordered node pair falls in exactly one class:
//!
//! | class | pairs                                   | may exist |
//! |-------|-----------------------------------------|-----------|
//! | SS    | two nodes of the same structure         | yes       |
//! | SB    | one structure node, one bridge          | yes       |
//! | BL    | nodes of two different structures       | never     |
//! | BB    | two bridges                             | never     |
//!
//! The census records possible / existing / missing counts per class. In the
//! analytic census `e_sb_existing` (and so `e_sb_missing` and
//! `e_total_existing`) are expectations; every other field is exact.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphgen::{GraphSpec, NodeRole, SyntheticGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCensus {
    pub e_ss_possible: f64,
    pub e_ss_existing: f64,
    pub e_ss_missing: f64,
    pub e_sb_possible: f64,
    pub e_sb_existing: f64,
    pub e_sb_missing: f64,
    pub e_bl_missing: f64,
    pub e_bb_missing: f64,
    /// `Ẽ = Ẽ_BL + Ẽ_BB`, pairs that can never be links.
    pub e_impossible: f64,
    pub e_total_existing: f64,
    pub n_nodes: f64,
}

fn pairs(n: f64) -> f64 {
    n * (n - 1.0) / 2.0
}

impl EdgeCensus {
    /// Fills in derived fields from the primary counts.
    fn from_counts(
        n_nodes: f64,
        e_ss_possible: f64,
        e_ss_existing: f64,
        e_sb_possible: f64,
        e_sb_existing: f64,
        e_bl_missing: f64,
        e_bb_missing: f64,
    ) -> Self {
        EdgeCensus {
            e_ss_possible,
            e_ss_existing,
            e_ss_missing: e_ss_possible - e_ss_existing,
            e_sb_possible,
            e_sb_existing,
            e_sb_missing: e_sb_possible - e_sb_existing,
            e_bl_missing,
            e_bb_missing,
            e_impossible: e_bl_missing + e_bb_missing,
            e_total_existing: e_ss_existing + e_sb_existing,
            n_nodes,
        }
    }

    /// `N(N−1)/2`
    pub fn total_pairs(&self) -> f64 {
        pairs(self.n_nodes)
    }

    /// All non-existing pairs, `N(N−1)/2 − E`.
    pub fn total_missing(&self) -> f64 {
        self.total_pairs() - self.e_total_existing
    }

    /// `ē_SS = Ē_SS / (Ē_SS + Ē_SB)`: share of existing links that are structural.
    pub fn existing_ss_fraction(&self) -> Option<f64> {
        let denom = self.e_ss_existing + self.e_sb_existing;
        (denom > 0.0).then(|| self.e_ss_existing / denom)
    }

    /// `ẽ_SB = Ẽ_SB / (N(N−1)/2 − E)`: share of non-links that are structure–bridge pairs.
    pub fn missing_sb_fraction(&self) -> Option<f64> {
        let denom = self.total_missing();
        (denom > 0.0).then(|| self.e_sb_missing / denom)
    }

    /// `Ẽ_SS / (N(N−1)/2 − E)`.
    pub fn missing_ss_fraction(&self) -> Option<f64> {
        let denom = self.total_missing();
        (denom > 0.0).then(|| self.e_ss_missing / denom)
    }

    /// Sum of the four per-class possible counts; equals `N(N−1)/2`.
    pub fn class_pair_sum(&self) -> f64 {
        self.e_ss_possible + self.e_sb_possible + self.e_bl_missing + self.e_bb_missing
    }

    /// Multiplies every count by `factor` (node count included). Used to check
    /// that AUC formulas depend on ratios only.
    pub fn scaled(&self, factor: f64) -> Self {
        EdgeCensus {
            e_ss_possible: self.e_ss_possible * factor,
            e_ss_existing: self.e_ss_existing * factor,
            e_ss_missing: self.e_ss_missing * factor,
            e_sb_possible: self.e_sb_possible * factor,
            e_sb_existing: self.e_sb_existing * factor,
            e_sb_missing: self.e_sb_missing * factor,
            e_bl_missing: self.e_bl_missing * factor,
            e_bb_missing: self.e_bb_missing * factor,
            e_impossible: self.e_impossible * factor,
            e_total_existing: self.e_total_existing * factor,
            n_nodes: self.n_nodes * factor,
        }
    }

    /// `(name, value)` for every field, in a fixed order.
    pub fn fields(&self) -> [(&'static str, f64); 11] {
        [
            ("n_nodes", self.n_nodes),
            ("e_ss_possible", self.e_ss_possible),
            ("e_ss_existing", self.e_ss_existing),
            ("e_ss_missing", self.e_ss_missing),
            ("e_sb_possible", self.e_sb_possible),
            ("e_sb_existing", self.e_sb_existing),
            ("e_sb_missing", self.e_sb_missing),
            ("e_bl_missing", self.e_bl_missing),
            ("e_bb_missing", self.e_bb_missing),
            ("e_impossible", self.e_impossible),
            ("e_total_existing", self.e_total_existing),
        ]
    }

    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.fields() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let fields = self.fields();
        let header: Vec<_> = fields.iter().map(|(k, _)| *k).collect();
        let row: Vec<_> = fields.iter().map(|(_, v)| v.to_string()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

/// Census implied by the generator parameters, with `Ē_SB = D_B·N_B`.
pub fn analytic_census(spec: &GraphSpec) -> EdgeCensus {
    let m = spec.n_structures as f64;
    let omega = spec.structure_size() as f64;
    let n_s = spec.n_structure_nodes() as f64;
    let n_b = spec.n_bridge as f64;
    let e_ss_possible = m * pairs(omega);
    EdgeCensus::from_counts(
        n_s + n_b,
        e_ss_possible,
        m * spec.kind.structure_edge_count(spec.k) as f64,
        n_s * n_b,
        spec.bridge_degree * n_b,
        pairs(n_s) - e_ss_possible,
        pairs(n_b),
    )
}

/// Exact counts obtained by classifying every node and edge of `graph` by role.
pub fn empirical_census(graph: &SyntheticGraph) -> Result<EdgeCensus> {
    let mut block_sizes: Vec<u64> = Vec::new();
    let mut n_bridge = 0u64;
    for role in graph.roles() {
        match role {
            NodeRole::Structure(s) => {
                if block_sizes.len() < s {
                    block_sizes.resize(s, 0);
                }
                block_sizes[s - 1] += 1;
            }
            NodeRole::Bridge => n_bridge += 1,
        }
    }
    let n_structure: u64 = block_sizes.iter().sum();
    let ss_possible: u64 = block_sizes
        .iter()
        .map(|&w| w * w.saturating_sub(1) / 2)
        .sum();
    let all_structure_pairs = n_structure * n_structure.saturating_sub(1) / 2;

    let mut ss_existing = 0u64;
    let mut sb_existing = 0u64;
    for &e in graph.edges() {
        let ru = graph.role_of(e.u as usize)?;
        let rv = graph.role_of(e.v as usize)?;
        match (ru, rv) {
            (NodeRole::Structure(a), NodeRole::Structure(b)) if a == b => ss_existing += 1,
            (NodeRole::Structure(_), NodeRole::Bridge)
            | (NodeRole::Bridge, NodeRole::Structure(_)) => sb_existing += 1,
            (NodeRole::Bridge, NodeRole::Bridge) => {
                return Err(Error::Data(format!("edge {e} joins two bridge nodes")))
            }
            (NodeRole::Structure(a), NodeRole::Structure(b)) => {
                return Err(Error::Data(format!(
                    "edge {e} joins structures S{a} and S{b}"
                )))
            }
        }
    }

    Ok(EdgeCensus::from_counts(
        (n_structure + n_bridge) as f64,
        ss_possible as f64,
        ss_existing as f64,
        (n_structure * n_bridge) as f64,
        sb_existing as f64,
        (all_structure_pairs - ss_possible) as f64,
        (n_bridge * n_bridge.saturating_sub(1) / 2) as f64,
    ))
}
