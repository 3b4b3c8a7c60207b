//! Optimal assignment (Kuhn–Munkres with potentials, O(n³)).

use crate::error::Result;
use crate::mask::BitMask;

use super::prf::pair_f;

/// Ground-truth/prediction pairing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matching {
    /// `(gt index, pred index)`, sorted by gt index.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_gt: Vec<usize>,
    pub unmatched_pred: Vec<usize>,
}

impl Matching {
    /// Prediction matched to ground truth `gt`, if any.
    pub fn pred_for(&self, gt: usize) -> Option<usize> {
        self.pairs.iter().find(|(g, _)| *g == gt).map(|&(_, p)| p)
    }
}

/// Assignment of rows to columns maximizing the summed weight. Returns, for
/// each row, its column (`None` if the row is left unassigned because there
/// are more rows than columns). Weights must be finite.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    let n = rows.max(cols);
    if n == 0 {
        return vec![None; rows];
    }
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            -weights[i][j]
        } else {
            0.0
        }
    };

    // 1-based arrays; index 0 is a sentinel column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut out = vec![None; rows];
    for (j, &i) in row_of_col.iter().enumerate().skip(1) {
        if i >= 1 && i <= rows && j <= cols {
            out[i - 1] = Some(j - 1);
        }
    }
    out
}

/// Pairwise overlap F-measure, `scores[gt][pred]`.
pub fn pairwise_f(preds: &[BitMask], gts: &[BitMask]) -> Result<Vec<Vec<f64>>> {
    gts.iter()
        .map(|g| preds.iter().map(|p| pair_f(p, g).map(|s| s.f_measure)).collect())
        .collect()
}

/// Matching from a `scores[gt][pred]` table. Pairs with zero score are left
/// unmatched since they add nothing to the total.
pub fn match_scores(scores: &[Vec<f64>], n_preds: usize) -> Matching {
    let assignment = max_weight_assignment(scores);
    let mut pairs = Vec::new();
    let mut pred_used = vec![false; n_preds];
    for (g, p) in assignment.iter().enumerate() {
        if let Some(p) = *p {
            if scores[g][p] > 0.0 {
                pairs.push((g, p));
                pred_used[p] = true;
            }
        }
    }
    let matched_gt: Vec<bool> = {
        let mut m = vec![false; scores.len()];
        for &(g, _) in &pairs {
            m[g] = true;
        }
        m
    };
    Matching {
        unmatched_gt: (0..scores.len()).filter(|&g| !matched_gt[g]).collect(),
        unmatched_pred: (0..n_preds).filter(|&p| !pred_used[p]).collect(),
        pairs,
    }
}

/// Matches predictions to ground truth maximizing total pairwise F-measure.
pub fn hungarian_match(preds: &[BitMask], gts: &[BitMask]) -> Result<Matching> {
    let scores = pairwise_f(preds, gts)?;
    Ok(match_scores(&scores, preds.len()))
}
