//! Observed / held-out edge partition and balanced negative sampling.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphgen::{NodePair, SyntheticGraph};
use crate::seed;

pub const DEFAULT_HOLDOUT_FRACTION: f64 = 0.1;

/// One evaluation instance: training edges, positives and an equal number of negatives.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSet {
    pub observed: Vec<NodePair>,
    pub heldout: Vec<NodePair>,
    pub negatives: Vec<NodePair>,
    pub holdout_fraction: f64,
    pub seed: u64,
}

impl EvalSet {
    /// Splits `graph` and draws `|heldout|` negatives. The two random streams
    /// are derived from `seed`, so the result is a pure function of its inputs.
    pub fn build(graph: &SyntheticGraph, holdout_fraction: f64, seed: u64) -> Result<Self> {
        let (observed, heldout) = split_edges(
            graph,
            holdout_fraction,
            seed::derive(seed, &[seed::stream::HOLDOUT]),
        )?;
        let negatives = sample_negatives(
            graph,
            heldout.len(),
            seed::derive(seed, &[seed::stream::NEGATIVES]),
        )?;
        Ok(EvalSet {
            observed,
            heldout,
            negatives,
            holdout_fraction,
            seed,
        })
    }

    /// Held-out pairs followed by negatives; the pairs every predictor must score.
    pub fn candidates(&self) -> impl Iterator<Item = NodePair> + '_ {
        self.heldout.iter().chain(&self.negatives).copied()
    }

    /// Order-sensitive digest of the candidate pairs.
    pub fn digest(&self) -> u64 {
        let mut h = seed::mix64(self.heldout.len() as u64);
        for p in self.candidates() {
            h = seed::mix64(h ^ p.key());
        }
        h
    }
}

/// `round(fraction · n_edges)` with halves rounded up.
pub fn heldout_count(holdout_fraction: f64, n_edges: usize) -> usize {
    (holdout_fraction * n_edges as f64 + 0.5).floor() as usize
}

/// Partitions the edges into `(observed, heldout)`; `heldout` is a uniform
/// sample without replacement. Both lists come back sorted.
pub fn split_edges(
    graph: &SyntheticGraph,
    holdout_fraction: f64,
    seed: u64,
) -> Result<(Vec<NodePair>, Vec<NodePair>)> {
    if !(holdout_fraction > 0.0 && holdout_fraction < 1.0) {
        return Err(Error::Config(format!(
            "hold-out fraction must lie strictly between 0 and 1, got {holdout_fraction}"
        )));
    }
    let edges = graph.edges();
    if edges.is_empty() {
        return Err(Error::Domain("cannot split a graph without edges".into()));
    }
    let n_heldout = heldout_count(holdout_fraction, edges.len());
    let mut rng = seed::rng(seed);
    let mut chosen = vec![false; edges.len()];
    for i in index::sample(&mut rng, edges.len(), n_heldout) {
        chosen[i] = true;
    }
    let mut observed = Vec::with_capacity(edges.len() - n_heldout);
    let mut heldout = Vec::with_capacity(n_heldout);
    for (&e, held) in edges.iter().zip(chosen) {
        if held {
            heldout.push(e);
        } else {
            observed.push(e);
        }
    }
    Ok((observed, heldout))
}

/// Uniform sample of `count` distinct non-edges of `graph`, sorted.
///
/// Draws pairs at random and rejects edges and repeats. When non-edges are
/// scarce (fewer than ten times `count`) it enumerates them instead.
pub fn sample_negatives(graph: &SyntheticGraph, count: usize, seed: u64) -> Result<Vec<NodePair>> {
    let n = graph.n_nodes() as u64;
    let total_pairs = n * n.saturating_sub(1) / 2;
    let available = total_pairs - graph.n_edges() as u64;
    if count as u64 > available {
        return Err(Error::Domain(format!(
            "requested {count} negatives but the graph has only {available} non-edges"
        )));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut rng = seed::rng(seed);
    let mut out = if available < 10 * count as u64 {
        let mut non_edges = Vec::with_capacity(available as usize);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                let p = NodePair::new(u, v);
                if !graph.has_edge(p) {
                    non_edges.push(p);
                }
            }
        }
        index::sample(&mut rng, non_edges.len(), count)
            .into_iter()
            .map(|i| non_edges[i])
            .collect::<Vec<_>>()
    } else {
        let mut seen = HashSet::with_capacity(count);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let a = rng.gen_range(0..n) as u32;
            let b = rng.gen_range(0..n) as u32;
            if a == b {
                continue;
            }
            let p = NodePair::new(a, b);
            if graph.has_edge(p) || !seen.insert(p.key()) {
                continue;
            }
            out.push(p);
        }
        out
    };
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{generate, GraphSpec, StructureKind};

    fn ten_edge_graph() -> SyntheticGraph {
        // clique on 5 nodes has 10 edges; add 3 isolated bridges
        generate(&GraphSpec::new(3, 0.0, 1, StructureKind::Clique, 5, 0)).unwrap()
    }

    #[test]
    fn rounding_and_sizes() {
        assert_eq!(heldout_count(0.1, 32960), 3296);
        assert_eq!(heldout_count(0.1, 10), 1);
        assert_eq!(heldout_count(0.25, 10), 3); // 2.5 rounds up
        let g = ten_edge_graph();
        let (obs, held) = split_edges(&g, 0.1, 3).unwrap();
        assert_eq!(held.len(), 1);
        assert_eq!(obs.len(), 9);
    }

    #[test]
    fn split_is_a_partition_and_deterministic() {
        let g = generate(&GraphSpec::new(40, 3.0, 4, StructureKind::Lattice, 4, 5)).unwrap();
        let (obs, held) = split_edges(&g, 0.3, 11).unwrap();
        let mut all: Vec<_> = obs.iter().chain(&held).copied().collect();
        all.sort();
        assert_eq!(all, g.edges());
        assert_eq!(split_edges(&g, 0.3, 11).unwrap(), (obs, held));
    }

    #[test]
    fn bad_fraction_and_empty_graph() {
        let g = ten_edge_graph();
        assert!(matches!(split_edges(&g, 0.0, 0), Err(Error::Config(_))));
        assert!(matches!(split_edges(&g, 1.0, 0), Err(Error::Config(_))));
        let empty = generate(&GraphSpec::new(2, 0.0, 3, StructureKind::Clique, 1, 0)).unwrap();
        assert!(matches!(split_edges(&empty, 0.1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn negatives_avoid_edges() {
        let g = ten_edge_graph();
        assert!(sample_negatives(&g, 0, 1).unwrap().is_empty());
        // 8 nodes -> 28 pairs, 10 edges, 18 non-edges: forces the enumeration path
        let neg = sample_negatives(&g, 18, 1).unwrap();
        assert_eq!(neg.len(), 18);
        assert!(neg.iter().all(|&p| !g.has_edge(p)));
        assert!(sample_negatives(&g, 19, 1).is_err());
    }

    #[test]
    fn complete_graph_has_no_negatives() {
        let k5 = generate(&GraphSpec::new(0, 0.0, 1, StructureKind::Clique, 5, 0)).unwrap();
        assert!(matches!(sample_negatives(&k5, 1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_set_is_balanced() {
        let g = generate(&GraphSpec::new(
            60,
            4.0,
            3,
            StructureKind::LatticeDiag(1),
            5,
            2,
        ))
        .unwrap();
        let es = EvalSet::build(&g, 0.1, 9).unwrap();
        assert_eq!(es.negatives.len(), es.heldout.len());
        assert_eq!(es.observed.len() + es.heldout.len(), g.n_edges());
        assert_eq!(es, EvalSet::build(&g, 0.1, 9).unwrap());
        assert_ne!(es.digest(), EvalSet::build(&g, 0.1, 10).unwrap().digest());
    }
}
