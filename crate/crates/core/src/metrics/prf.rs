//! Precision / recall / F-measure over mask pixels and mask boundaries.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mask::BitMask;

use super::hungarian::Matching;

/// Objects whose matched overlap F exceeds this count toward F@.75.
pub const F_AT_THRESHOLD: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl Prf {
    pub const ZERO: Prf = Prf {
        precision: 0.0,
        recall: 0.0,
        f_measure: 0.0,
    };

    /// Harmonic mean of `precision` and `recall`, zero when both are zero.
    pub fn new(precision: f64, recall: f64) -> Self {
        let f_measure = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf {
            precision,
            recall,
            f_measure,
        }
    }

    /// `hit_p / total_p`, `hit_r / total_r`; an empty denominator yields 0.
    fn from_counts(hit_p: u64, total_p: u64, hit_r: u64, total_r: u64) -> Self {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        Prf::new(ratio(hit_p, total_p), ratio(hit_r, total_r))
    }
}

/// Scores one prediction against one ground-truth mask. An empty prediction
/// has precision 0; an empty ground truth has recall 0.
pub fn pair_f(pred: &BitMask, gt: &BitMask) -> Result<Prf> {
    pred.check_same_dims(gt)?;
    let inter = pred.intersection_count(gt);
    Ok(Prf::from_counts(inter, pred.count(), inter, gt.count()))
}

/// Pooled overlap P/R/F. Unmatched predictions add to the precision
/// denominator, unmatched ground truths to the recall denominator. `None`
/// when neither side has any pixels.
pub fn overlap_prf(matching: &Matching, preds: &[BitMask], gts: &[BitMask]) -> Option<Prf> {
    let total_p: u64 = preds.iter().map(BitMask::count).sum();
    let total_r: u64 = gts.iter().map(BitMask::count).sum();
    if total_p == 0 && total_r == 0 {
        return None;
    }
    let hit: u64 = matching
        .pairs
        .iter()
        .map(|&(g, p)| preds[p].intersection_count(&gts[g]))
        .sum();
    Some(Prf::from_counts(hit, total_p, hit, total_r))
}

/// Default boundary tolerance: 0.75% of the image diagonal, at least 1 px.
pub fn default_dilation_radius(width: u32, height: u32) -> u32 {
    let diag = (width as f64).hypot(height as f64);
    ((0.0075 * diag).round() as u32).max(1)
}

/// Pooled boundary P/R/F. A predicted contour pixel counts toward precision
/// when it lies within `dilation_radius` of the matched ground-truth contour,
/// and symmetrically for recall. `None` when neither side has any pixels.
pub fn boundary_prf(
    matching: &Matching,
    preds: &[BitMask],
    gts: &[BitMask],
    dilation_radius: u32,
) -> Option<Prf> {
    let pred_b: Vec<BitMask> = preds.iter().map(BitMask::boundary).collect();
    let gt_b: Vec<BitMask> = gts.iter().map(BitMask::boundary).collect();
    let total_p: u64 = pred_b.iter().map(BitMask::count).sum();
    let total_r: u64 = gt_b.iter().map(BitMask::count).sum();
    if total_p == 0 && total_r == 0 {
        return None;
    }
    let (mut hit_p, mut hit_r) = (0u64, 0u64);
    for &(g, p) in &matching.pairs {
        hit_p += pred_b[p].intersection_count(&gt_b[g].dilate(dilation_radius));
        hit_r += pred_b[p].dilate(dilation_radius).intersection_count(&gt_b[g]);
    }
    Some(Prf::from_counts(hit_p, total_p, hit_r, total_r))
}

/// Fraction of non-empty ground-truth masks whose matched prediction has an
/// overlap F strictly above 0.75. Unmatched ground truths count as F = 0.
/// `None` when there is no non-empty ground truth.
pub fn f_at_75(matching: &Matching, preds: &[BitMask], gts: &[BitMask]) -> Option<f64> {
    let scored: Vec<f64> = gts
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(gi, g)| {
            matching
                .pred_for(gi)
                .map_or(0.0, |p| pair_f(&preds[p], g).map_or(0.0, |s| s.f_measure))
        })
        .collect();
    fraction_above(&scored, F_AT_THRESHOLD)
}

/// Share of `scores` strictly greater than `threshold`.
pub fn fraction_above(scores: &[f64], threshold: f64) -> Option<f64> {
    if scores.is_empty() {
        return None;
    }
    Some(scores.iter().filter(|&&f| f > threshold).count() as f64 / scores.len() as f64)
}
