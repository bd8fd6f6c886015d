//! Closed-form ROC-AUC ceilings.
//!
//! Both scorers here emit at most three distinct values, so their ROC curves
//! are polylines with a handful of breakpoints and the AUC is their
//! trapezoidal area. Shorthand used below, with `T = N(N−1)/2 − E`:
//!
//! - `a = Ē_SS / (Ē_SS + Ē_SB)`, the share of links that are structural;
//! - `b = Ẽ_SB / T`, the share of non-links that are structure–bridge pairs;
//! - `s = Ẽ_SS / T`, the share of non-links inside a structure.
//!
//! The ideal scorer knows the link function, so it ranks structural links
//! first, then every structure–bridge pair at `D_B/N_S`, then the rest:
//! `AUC = 1 − ½·b·(1 − a)`.
//!
//! The planted SBM gives every same-structure pair probability `q` and every
//! structure–bridge pair probability `p`:
//!
//! - `q > p`: `AUC = 1 − ½b + ½ab + ½as − s`
//! - `p > q`: `AUC = 1 − ½b − ½ab − ½as`
//! - `p = q`: both classes tie, `AUC = 1 − ½(s + b)`

use crate::census::EdgeCensus;
use crate::error::{Error, Result};
use crate::graphgen::GraphSpec;

/// Tolerance under which `p` and `q` are treated as equal scores.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

impl RocPoint {
    pub const fn new(fpr: f64, tpr: f64) -> Self {
        RocPoint { fpr, tpr }
    }
}

/// Trapezoidal area under a polyline, starting from `(0, 0)` if the first
/// point is not already there.
pub fn trapezoid_area(points: &[RocPoint]) -> f64 {
    let mut prev = RocPoint::new(0.0, 0.0);
    let mut area = 0.0;
    for &p in points {
        area += (p.fpr - prev.fpr) * (p.tpr + prev.tpr) / 2.0;
        prev = p;
    }
    area
}

struct Shares {
    a: f64,
    b: f64,
    s: f64,
}

fn shares(census: &EdgeCensus) -> Result<Shares> {
    let a = census
        .existing_ss_fraction()
        .ok_or_else(|| Error::Domain("census has no existing links".into()))?;
    let total_missing = census.total_missing();
    if total_missing <= 0.0 {
        return Err(Error::Domain("census has no non-existing pairs".into()));
    }
    Ok(Shares {
        a,
        b: census.e_sb_missing / total_missing,
        s: census.e_ss_missing / total_missing,
    })
}

/// AUC of the scorer that knows roles and the structure link function.
pub fn ideal_auc(census: &EdgeCensus) -> Result<f64> {
    let Shares { a, b, .. } = shares(census)?;
    Ok(1.0 - 0.5 * b * (1.0 - a))
}

/// Breakpoints `A = (0, a)`, `B = (b, 1)`, `C = (1, 1)` of the ideal ROC curve.
pub fn ideal_roc_points(census: &EdgeCensus) -> Result<[RocPoint; 3]> {
    let Shares { a, b, .. } = shares(census)?;
    Ok([
        RocPoint::new(0.0, a),
        RocPoint::new(b, 1.0),
        RocPoint::new(1.0, 1.0),
    ])
}

/// Block probabilities of the planted SBM with one block per structure plus one bridge block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedProbabilities {
    /// Structure–bridge link probability.
    pub p: f64,
    /// Within-structure link density.
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedBranch {
    BridgeFirst,
    StructureFirst,
    Tied,
}

impl PlantedProbabilities {
    pub fn branch(&self) -> PlantedBranch {
        if (self.p - self.q).abs() <= TIE_TOLERANCE {
            PlantedBranch::Tied
        } else if self.p > self.q {
            PlantedBranch::BridgeFirst
        } else {
            PlantedBranch::StructureFirst
        }
    }
}

/// `p = D_B/N_S`, `q = 2·|φ| / (ω(ω−1))`.
pub fn planted_probabilities(spec: &GraphSpec) -> Result<PlantedProbabilities> {
    let omega = spec.structure_size();
    if omega <= 1 {
        return Err(Error::Domain(format!(
            "structure of {omega} node(s) has no internal pairs, q is undefined"
        )));
    }
    let links = spec.kind.structure_edge_count(spec.k) as f64;
    let omega = omega as f64;
    Ok(PlantedProbabilities {
        p: spec.bridge_probability(),
        q: 2.0 * links / (omega * (omega - 1.0)),
    })
}

/// AUC of the planted-SBM scorer.
pub fn planted_sbm_auc(census: &EdgeCensus, probs: &PlantedProbabilities) -> Result<f64> {
    let Shares { a, b, s } = shares(census)?;
    Ok(match probs.branch() {
        PlantedBranch::StructureFirst => 1.0 - 0.5 * b + 0.5 * a * b + 0.5 * a * s - s,
        PlantedBranch::BridgeFirst => 1.0 - 0.5 * b - 0.5 * a * b - 0.5 * a * s,
        PlantedBranch::Tied => 1.0 - 0.5 * (s + b),
    })
}

/// Breakpoints `A = (0, 0)`, `B`, `C = (s + b, 1)`, `D = (1, 1)` of the
/// planted-SBM ROC curve. `B` is where the higher-probability class has been
/// fully admitted; in the tied branch it coincides with `C`.
pub fn planted_roc_points(
    census: &EdgeCensus,
    probs: &PlantedProbabilities,
) -> Result<[RocPoint; 4]> {
    let Shares { a, b, s } = shares(census)?;
    let pt_b = match probs.branch() {
        PlantedBranch::StructureFirst => RocPoint::new(s, a),
        PlantedBranch::BridgeFirst => RocPoint::new(b, 1.0 - a),
        PlantedBranch::Tied => RocPoint::new(s + b, 1.0),
    };
    Ok([
        RocPoint::new(0.0, 0.0),
        pt_b,
        RocPoint::new(s + b, 1.0),
        RocPoint::new(1.0, 1.0),
    ])
}
