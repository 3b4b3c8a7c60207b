//! Occlusion classification and occlusion order accuracy.

use serde::{Deserialize, Serialize};

use crate::annotate::{generate_ooam, Ooam};
use crate::error::Result;
use crate::mask::BitMask;

use super::hungarian::{hungarian_match, Matching};

/// Counts over matched instances. An instance is "occluded" when its
/// occlusion mask has at least one pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OcclusionClsStats {
    /// Matched instances.
    pub alpha: u64,
    /// Matched instances predicted occluded.
    pub beta: u64,
    /// Matched instances occluded in the ground truth.
    pub gamma: u64,
    /// Matched instances predicted occluded that are occluded.
    pub delta: u64,
    /// Matched instances whose occluded flag agrees, occluded or not.
    pub correct: u64,
}

impl OcclusionClsStats {
    /// Classification accuracy over matched instances; `None` without matches.
    pub fn accuracy(&self) -> Option<f64> {
        (self.alpha > 0).then(|| self.correct as f64 / self.alpha as f64)
    }

    /// F-measure of the occluded class. `None` when nothing is occluded on
    /// either side; 0 when only one side has occlusions.
    pub fn f_measure(&self) -> Option<f64> {
        if self.beta == 0 && self.gamma == 0 {
            return None;
        }
        if self.beta == 0 || self.gamma == 0 || self.delta == 0 {
            return Some(0.0);
        }
        let p = self.delta as f64 / self.beta as f64;
        let r = self.delta as f64 / self.gamma as f64;
        Some(2.0 * p * r / (p + r))
    }
}

pub fn occlusion_cls(matching: &Matching, pred_occ: &[BitMask], gt_occ: &[BitMask]) -> OcclusionClsStats {
    let mut s = OcclusionClsStats::default();
    for &(g, p) in &matching.pairs {
        let pred = !pred_occ[p].is_empty();
        let gt = !gt_occ[g].is_empty();
        s.alpha += 1;
        s.beta += pred as u64;
        s.gamma += gt as u64;
        s.delta += (pred && gt) as u64;
        s.correct += (pred == gt) as u64;
    }
    s
}

/// Fraction of off-diagonal entries on which two OOAMs agree.
///
/// A single-object matrix has no off-diagonal entries; it scores 1 when
/// `single_matched` is set and 0 otherwise. `None` for an empty matrix.
pub fn ooam_agreement(gt: &Ooam, pred: &Ooam, single_matched: bool) -> Option<f64> {
    assert_eq!(gt.size(), pred.size(), "OOAM sizes differ");
    let m = gt.size();
    match m {
        0 => None,
        1 => Some(if single_matched { 1.0 } else { 0.0 }),
        _ => {
            let equal = (0..m)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .filter(|&(i, j)| gt.get(i, j) == pred.get(i, j))
                .count();
            let size = m * m;
            Some((equal - m) as f64 / (size - m) as f64)
        }
    }
}

/// Predicted OOAM laid out in ground-truth order. Ground truths without a
/// matched prediction get empty masks.
pub fn aligned_pred_ooam(
    matching: &Matching,
    n_gt: usize,
    pred_vis: &[BitMask],
    pred_occ: &[BitMask],
    dims: (u32, u32),
) -> Result<Ooam> {
    let empty = BitMask::new(dims.0, dims.1);
    let pick = |masks: &[BitMask], g: usize| match matching.pred_for(g) {
        Some(p) => masks[p].clone(),
        None => empty.clone(),
    };
    let vis: Vec<BitMask> = (0..n_gt).map(|g| pick(pred_vis, g)).collect();
    let occ: Vec<BitMask> = (0..n_gt).map(|g| pick(pred_occ, g)).collect();
    generate_ooam(&vis, &occ)
}

/// Occlusion order accuracy using an existing matching.
pub fn occlusion_order_accuracy_with(
    matching: &Matching,
    gt_vis: &[BitMask],
    gt_occ: &[BitMask],
    pred_vis: &[BitMask],
    pred_occ: &[BitMask],
) -> Result<Option<f64>> {
    let Some(first) = gt_vis.first() else {
        return Ok(None);
    };
    let gt = generate_ooam(gt_vis, gt_occ)?;
    let pred = aligned_pred_ooam(matching, gt_vis.len(), pred_vis, pred_occ, first.dims())?;
    Ok(ooam_agreement(&gt, &pred, !matching.pairs.is_empty()))
}

/// Builds both OOAMs from masks, matching predictions to ground truth on
/// their visible masks, and scores the off-diagonal agreement.
pub fn occlusion_order_accuracy(
    gt_vis: &[BitMask],
    gt_occ: &[BitMask],
    pred_vis: &[BitMask],
    pred_occ: &[BitMask],
) -> Result<Option<f64>> {
    let matching = hungarian_match(pred_vis, gt_vis)?;
    occlusion_order_accuracy_with(&matching, gt_vis, gt_occ, pred_vis, pred_occ)
}
