//! Generator, census and closed-form checks against independent routes:
//! full pair enumeration, brute-force link functions and Monte-Carlo runs.

use linkbench::analytic::{
    ideal_auc, ideal_roc_points, planted_probabilities, planted_roc_points, planted_sbm_auc,
    PlantedBranch, PlantedProbabilities,
};
use linkbench::census::{analytic_census, empirical_census};
use linkbench::eval::{auc, roc_curve};
use linkbench::graphgen::{generate, GraphSpec, NodePair, NodeRole, StructureKind};
use linkbench::predict::{oracle_ideal, planted_sbm_score};
use linkbench::split::EvalSet;
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = StructureKind> {
    prop_oneof![
        Just(StructureKind::Clique),
        Just(StructureKind::Lattice),
        Just(StructureKind::LatticeDiag(1)),
        Just(StructureKind::LatticeDiag(2)),
    ]
}

/// Scores every pair of the graph, split into (edges, non-edges).
fn score_all_pairs(
    graph: &linkbench::SyntheticGraph,
    score: impl Fn(NodePair) -> f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = graph.n_nodes() as u32;
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for u in 0..n {
        for v in u + 1..n {
            let p = NodePair::new(u, v);
            if graph.has_edge(p) {
                pos.push(score(p));
            } else {
                neg.push(score(p));
            }
        }
    }
    (pos, neg)
}

#[test]
fn structure_edges_equal_link_function_by_enumeration() {
    for kind in [
        StructureKind::Clique,
        StructureKind::Lattice,
        StructureKind::LatticeDiag(1),
        StructureKind::LatticeDiag(2),
    ] {
        for k in 1..=8 {
            let spec = GraphSpec::new(
                5,
                2.0_f64.min((3 * kind.structure_size(k)) as f64),
                3,
                kind,
                k,
                11,
            );
            let g = generate(&spec).unwrap();
            let omega = spec.structure_size();
            for s in 0..3 {
                for a in 0..omega {
                    for b in a + 1..omega {
                        let pair = NodePair::new((s * omega + a) as u32, (s * omega + b) as u32);
                        assert_eq!(
                            g.has_edge(pair),
                            kind.structure_link(k, a, b).unwrap(),
                            "{kind} k={k} structure {s} ({a},{b})"
                        );
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_graphs_respect_roles(
        kind in kind_strategy(),
        k in 1usize..6,
        m in 1usize..5,
        n_bridge in 0usize..20,
        frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let n_s = m * kind.structure_size(k);
        let spec = GraphSpec::new(n_bridge, frac * n_s as f64, m, kind, k, seed);
        let g = generate(&spec).unwrap();
        prop_assert_eq!(g.n_nodes(), n_s + n_bridge);
        for e in g.edges() {
            prop_assert!(e.u < e.v);
            match (g.role_of(e.u as usize).unwrap(), g.role_of(e.v as usize).unwrap()) {
                (NodeRole::Bridge, NodeRole::Bridge) => prop_assert!(false, "bridge-bridge edge {}", e),
                (NodeRole::Structure(a), NodeRole::Structure(b)) => {
                    prop_assert_eq!(a, b);
                    prop_assert!(g.is_structural_pair(*e));
                }
                _ => {}
            }
        }
        // determinism
        let again = generate(&spec).unwrap();
        prop_assert_eq!(again.edges(), g.edges());

        let emp = empirical_census(&g).unwrap();
        let ana = analytic_census(&spec);
        prop_assert_eq!(emp.class_pair_sum(), emp.total_pairs());
        prop_assert_eq!(ana.class_pair_sum(), ana.total_pairs());
        prop_assert_eq!(emp.e_ss_possible, ana.e_ss_possible);
        prop_assert_eq!(emp.e_ss_existing, ana.e_ss_existing);
        prop_assert_eq!(emp.e_ss_missing, ana.e_ss_missing);
        prop_assert_eq!(emp.e_sb_possible, ana.e_sb_possible);
        prop_assert_eq!(emp.e_bl_missing, ana.e_bl_missing);
        prop_assert_eq!(emp.e_bb_missing, ana.e_bb_missing);
        prop_assert_eq!(emp.e_total_existing, g.n_edges() as f64);
        if kind == StructureKind::Clique {
            prop_assert_eq!(emp.e_ss_missing, 0.0);
        }
    }

    /// The closed forms evaluated on the exact census equal the tie-aware AUC
    /// of the corresponding scorer over every pair of the graph.
    #[test]
    fn closed_forms_equal_full_enumeration(
        kind in kind_strategy(),
        k in 2usize..5,
        m in 1usize..4,
        n_bridge in 1usize..12,
        frac in 0.05f64..0.9,
        seed in any::<u64>(),
    ) {
        let n_s = m * kind.structure_size(k);
        let spec = GraphSpec::new(n_bridge, frac * n_s as f64, m, kind, k, seed);
        let g = generate(&spec).unwrap();
        let census = empirical_census(&g).unwrap();
        prop_assume!(census.e_total_existing > 0.0 && census.total_missing() > 0.0);

        let (pos, neg) = score_all_pairs(&g, |p| oracle_ideal(&spec, p));
        let enumerated = auc(&pos, &neg).unwrap();
        prop_assert!((enumerated - ideal_auc(&census).unwrap()).abs() < 1e-12);

        let probs = planted_probabilities(&spec).unwrap();
        let (pos, neg) = score_all_pairs(&g, |p| planted_sbm_score(&spec, &probs, p));
        let enumerated = auc(&pos, &neg).unwrap();
        let closed = planted_sbm_auc(&census, &probs).unwrap();
        prop_assert!((enumerated - closed).abs() < 1e-12, "{:?}: {} vs {}", probs.branch(), enumerated, closed);
        prop_assert!(closed <= ideal_auc(&census).unwrap() + 1e-12);
    }

    #[test]
    fn closed_forms_are_scale_free(
        kind in kind_strategy(),
        k in 2usize..9,
        m in 1usize..50,
        n_bridge in 1usize..500,
        frac in 0.0f64..1.0,
        factor in 0.01f64..100.0,
    ) {
        let n_s = m * kind.structure_size(k);
        let spec = GraphSpec::new(n_bridge, frac * n_s as f64, m, kind, k, 0);
        let c = analytic_census(&spec);
        prop_assume!(c.e_total_existing > 0.0);
        let probs = planted_probabilities(&spec).unwrap();
        // node count scales too, so rebuild the pair total from the scaled classes
        let mut scaled = c.scaled(factor);
        let target_pairs = scaled.class_pair_sum();
        scaled.n_nodes = (1.0 + (1.0 + 8.0 * target_pairs).sqrt()) / 2.0;
        let d_ideal = ideal_auc(&scaled).unwrap() - ideal_auc(&c).unwrap();
        let d_planted = planted_sbm_auc(&scaled, &probs).unwrap() - planted_sbm_auc(&c, &probs).unwrap();
        prop_assert!(d_ideal.abs() < 1e-9);
        prop_assert!(d_planted.abs() < 1e-9);
    }
}

#[test]
fn tied_branch_matches_brute_force() {
    // k = 2 lattice: 4 nodes, 4 links, q = 2/3; D_B = 8/3 over N_S = 4 gives p = 2/3
    let spec = GraphSpec::new(6, 8.0 / 3.0, 1, StructureKind::Lattice, 2, 3);
    let probs = planted_probabilities(&spec).unwrap();
    assert_eq!(probs.branch(), PlantedBranch::Tied);
    let g = generate(&spec).unwrap();
    let census = empirical_census(&g).unwrap();
    let (pos, neg) = score_all_pairs(&g, |p| planted_sbm_score(&spec, &probs, p));

    let mut credit = 0.0;
    for &a in &pos {
        for &b in &neg {
            credit += if a > b {
                1.0
            } else if a == b {
                0.5
            } else {
                0.0
            };
        }
    }
    let brute = credit / (pos.len() * neg.len()) as f64;
    let s = census.missing_ss_fraction().unwrap();
    let b = census.missing_sb_fraction().unwrap();
    assert!((brute - (1.0 - 0.5 * (s + b))).abs() < 1e-12);
    assert!((brute - planted_sbm_auc(&census, &probs).unwrap()).abs() < 1e-12);
}

#[test]
fn explicit_tie_probabilities() {
    let spec = GraphSpec::new(40, 6.0, 2, StructureKind::Lattice, 3, 0);
    let c = analytic_census(&spec);
    let tied = PlantedProbabilities { p: 0.3, q: 0.3 };
    let [a, b, cpt, d] = planted_roc_points(&c, &tied).unwrap();
    assert_eq!(a.fpr, 0.0);
    assert_eq!(b, cpt);
    assert_eq!(d.tpr, 1.0);
}

#[test]
fn bridge_edge_count_is_binomial() {
    let spec = GraphSpec::new(300, 6.0, 5, StructureKind::Lattice, 4, 0);
    let replicates = 40;
    let p = spec.bridge_probability();
    let trials = (spec.n_bridge * spec.n_structure_nodes()) as f64;
    let mut total = 0.0;
    for r in 0..replicates {
        let g = generate(&spec.with_seed(r)).unwrap();
        total += empirical_census(&g).unwrap().e_sb_existing;
    }
    let mean = total / replicates as f64;
    let stderr = (trials * p * (1.0 - p)).sqrt() / (replicates as f64).sqrt();
    let expected = spec.bridge_degree * spec.n_bridge as f64;
    assert!(
        (mean - expected).abs() < 4.0 * stderr,
        "{mean} vs {expected} ± {stderr}"
    );
}

#[test]
fn oracle_roc_tracks_analytic_breakpoints() {
    let spec = GraphSpec::new(2560, 12.0, 10, StructureKind::Lattice, 8, 21);
    let g = generate(&spec).unwrap();
    let set = EvalSet::build(&g, 0.1, 5).unwrap();
    let pos: Vec<f64> = set
        .heldout
        .iter()
        .map(|&p| oracle_ideal(&spec, p))
        .collect();
    let neg: Vec<f64> = set
        .negatives
        .iter()
        .map(|&p| oracle_ideal(&spec, p))
        .collect();
    let curve = roc_curve(&pos, &neg).unwrap();
    // thresholds: +inf, 1, p, 0
    assert_eq!(curve.points.len(), 4);
    let [a, b, c] = ideal_roc_points(&analytic_census(&spec)).unwrap();
    let (ea, eb) = (curve.points[1], curve.points[2]);
    assert_eq!(ea.fpr, 0.0);
    assert!((ea.tpr - a.tpr).abs() < 0.015, "{ea:?} vs {a:?}");
    assert!((eb.fpr - b.fpr).abs() < 0.03, "{eb:?} vs {b:?}");
    assert_eq!(eb.tpr, 1.0);
    assert_eq!(*curve.points.last().unwrap(), c);
}

#[test]
fn clique_row_point_b_is_sb_share_of_non_links() {
    let spec = GraphSpec::new(2560, 12.0, 80, StructureKind::Clique, 8, 0);
    let c = analytic_census(&spec);
    let [_, b, _] = ideal_roc_points(&c).unwrap();
    let direct = (640.0 * 2560.0 - 30720.0) / (3200.0 * 3199.0 / 2.0 - 32960.0);
    assert!((b.fpr - direct).abs() < 1e-15);
}
