//! Tie-aware ROC/AUC and replicate aggregation.

use crate::analytic::{trapezoid_area, RocPoint};
use crate::error::{Error, Result};

fn check(positives: &[f64], negatives: &[f64]) -> Result<()> {
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::Domain(format!(
            "AUC needs at least one positive and one negative (got {} and {})",
            positives.len(),
            negatives.len()
        )));
    }
    if let Some(s) = positives.iter().chain(negatives).find(|s| !s.is_finite()) {
        return Err(Error::Domain(format!("non-finite score {s}")));
    }
    Ok(())
}

/// Groups of equal scores in descending order: `(score, positives, negatives)`.
fn tie_groups(positives: &[f64], negatives: &[f64]) -> Vec<(f64, usize, usize)> {
    let mut all: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    all.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    for (s, pos) in all {
        // -0.0 and 0.0 are the same threshold
        match groups.last_mut() {
            Some(g) if g.0 == s => {
                if pos {
                    g.1 += 1
                } else {
                    g.2 += 1
                }
            }
            _ => groups.push((s, pos as usize, (!pos) as usize)),
        }
    }
    groups
}

/// `P(s⁺ > s⁻) + ½·P(s⁺ = s⁻)` over all positive × negative pairs.
pub fn auc(positives: &[f64], negatives: &[f64]) -> Result<f64> {
    check(positives, negatives)?;
    let mut negatives_below = negatives.len() as f64;
    let mut credit = 0.0;
    for (_, p, n) in tie_groups(positives, negatives) {
        negatives_below -= n as f64;
        credit += p as f64 * (negatives_below + 0.5 * n as f64);
    }
    Ok(credit / (positives.len() as f64 * negatives.len() as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// From `(0, 0)` to `(1, 1)`, non-decreasing in both coordinates.
    pub points: Vec<RocPoint>,
    /// Score threshold at each point; the first is `+∞` (nothing predicted).
    pub thresholds: Vec<f64>,
}

impl RocCurve {
    pub fn area(&self) -> f64 {
        trapezoid_area(&self.points)
    }
}

/// Sweeps every distinct score from high to low, predicting a link for
/// scores `>=` the threshold.
pub fn roc_curve(positives: &[f64], negatives: &[f64]) -> Result<RocCurve> {
    check(positives, negatives)?;
    let (np, nn) = (positives.len() as f64, negatives.len() as f64);
    let mut points = vec![RocPoint::new(0.0, 0.0)];
    let mut thresholds = vec![f64::INFINITY];
    let (mut tp, mut fp) = (0usize, 0usize);
    for (s, p, n) in tie_groups(positives, negatives) {
        tp += p;
        fp += n;
        points.push(RocPoint::new(fp as f64 / nn, tp as f64 / np));
        thresholds.push(s);
    }
    Ok(RocCurve { points, thresholds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AucSummary {
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single replicate.
    pub variance: f64,
    pub n_replicates: usize,
    pub per_replicate: Vec<f64>,
}

impl AucSummary {
    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance / self.n_replicates as f64).sqrt()
    }
}

pub fn aggregate(aucs: &[f64]) -> Result<AucSummary> {
    if aucs.is_empty() {
        return Err(Error::Domain("cannot aggregate zero replicates".into()));
    }
    let n = aucs.len() as f64;
    let mean = aucs.iter().sum::<f64>() / n;
    let variance = if aucs.len() > 1 {
        aucs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(AucSummary {
        mean,
        variance,
        n_replicates: aucs.len(),
        per_replicate: aucs.to_vec(),
    })
}
