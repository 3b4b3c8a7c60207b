//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's codecs or matrix builders.

#![allow(dead_code)]

use serde_json::Value;

/// Row-major boolean image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plain {
    pub w: usize,
    pub h: usize,
    pub px: Vec<bool>,
}

impl Plain {
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.px[y * self.w + x]
    }

    pub fn count(&self) -> usize {
        self.px.iter().filter(|&&b| b).count()
    }
}

/// Decodes COCO uncompressed RLE (`size = [h, w]`, column-major, 0-run first).
pub fn decode_rle(v: &Value) -> Plain {
    let h = v["size"][0].as_u64().unwrap() as usize;
    let w = v["size"][1].as_u64().unwrap() as usize;
    let mut col_major = Vec::with_capacity(w * h);
    for (k, c) in v["counts"].as_array().unwrap().iter().enumerate() {
        let bit = k % 2 == 1;
        col_major.extend(std::iter::repeat_n(bit, c.as_u64().unwrap() as usize));
    }
    assert_eq!(col_major.len(), w * h, "RLE length");
    let mut px = vec![false; w * h];
    for x in 0..w {
        for y in 0..h {
            px[y * w + x] = col_major[x * h + y];
        }
    }
    Plain { w, h, px }
}

/// `out[i][j] = 1` iff some pixel is visible for `i` and occluded for `j`, `i != j`.
pub fn brute_force_ooam(visible: &[Plain], occlusion: &[Plain]) -> Vec<Vec<u8>> {
    let m = visible.len();
    let mut out = vec![vec![0u8; m]; m];
    if m == 0 {
        return out;
    }
    let (w, h) = (visible[0].w, visible[0].h);
    for y in 0..h {
        for x in 0..w {
            for i in 0..m {
                if !visible[i].get(x, y) {
                    continue;
                }
                for j in 0..m {
                    if i != j && occlusion[j].get(x, y) {
                        out[i][j] = 1;
                    }
                }
            }
        }
    }
    out
}

pub fn ooam_rows(v: &Value) -> Vec<Vec<u8>> {
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u8).collect())
        .collect()
}

/// Number of differing off-diagonal entries.
pub fn off_diagonal_diff(a: &[Vec<u8>], b: &[Vec<u8>]) -> usize {
    let m = a.len();
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && a[i][j] != b[i][j])
        .count()
}

/// Best total weight over all partial one-to-one assignments.
pub fn exhaustive_max(weights: &[Vec<f64>], n_cols: usize) -> f64 {
    fn go(weights: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
        if row == weights.len() {
            return 0.0;
        }
        let mut best = go(weights, row + 1, used);
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.max(weights[row][c] + go(weights, row + 1, used));
                used[c] = false;
            }
        }
        best
    }
    go(weights, 0, &mut vec![false; n_cols])
}

/// `F = 2PR / (P + R)` of one predicted mask against one ground-truth mask.
pub fn plain_f(pred: &Plain, gt: &Plain) -> f64 {
    let tp = pred.px.iter().zip(&gt.px).filter(|(a, b)| **a && **b).count() as f64;
    let (np, ng) = (pred.count() as f64, gt.count() as f64);
    if tp == 0.0 {
        return 0.0;
    }
    let (p, r) = (tp / np, tp / ng);
    2.0 * p * r / (p + r)
}
