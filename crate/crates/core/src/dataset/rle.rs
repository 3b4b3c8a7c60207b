//! COCO-style uncompressed run-length encoding.
//!
//! Pixels are visited column by column (Fortran order). `counts` alternates
//! background and foreground runs and always starts with a background run,
//! which is zero-length when the first pixel is set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::BitMask;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RleMask {
    /// `[height, width]`.
    pub size: [u32; 2],
    pub counts: Vec<u64>,
}

impl RleMask {
    pub fn height(&self) -> u32 {
        self.size[0]
    }

    pub fn width(&self) -> u32 {
        self.size[1]
    }

    /// No zero-length runs except possibly the first.
    pub fn is_canonical(&self) -> bool {
        self.counts.iter().skip(1).all(|&c| c > 0)
    }
}

pub fn rle_encode(mask: &BitMask) -> RleMask {
    let (w, h) = mask.dims();
    let mut counts = Vec::new();
    let mut current = false;
    let mut run = 0u64;
    for x in 0..w {
        for y in 0..h {
            let bit = mask.get(x, y);
            if bit != current {
                counts.push(run);
                current = bit;
                run = 0;
            }
            run += 1;
        }
    }
    if run > 0 || counts.is_empty() {
        counts.push(run);
    }
    RleMask {
        size: [h, w],
        counts,
    }
}

pub fn rle_decode(rle: &RleMask) -> Result<BitMask> {
    let (h, w) = (rle.height(), rle.width());
    let total = h as u64 * w as u64;
    let sum = rle
        .counts
        .iter()
        .try_fold(0u64, |acc, &c| acc.checked_add(c))
        .ok_or_else(|| Error::RleFormat("run lengths overflow".into()))?;
    if sum != total {
        return Err(Error::RleFormat(format!(
            "run lengths sum to {sum}, expected {h}x{w} = {total}"
        )));
    }
    let mut mask = BitMask::new(w, h);
    let mut pos = 0u64;
    for (k, &c) in rle.counts.iter().enumerate() {
        if k % 2 == 1 {
            for p in pos..pos + c {
                let (x, y) = ((p / h as u64) as u32, (p % h as u64) as u32);
                mask.set(x, y, true);
            }
        }
        pos += c;
    }
    Ok(mask)
}
