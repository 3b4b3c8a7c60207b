//! Packed binary image masks.

use std::fmt;

use crate::error::{Error, Result};

/// A `width × height` binary mask stored row-major, 64 pixels per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMask {
    width: u32,
    height: u32,
    words: Vec<u64>,
}

impl fmt::Debug for BitMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMask({}x{}, {} set)", self.width, self.height, self.count())
    }
}

impl BitMask {
    pub fn new(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        BitMask {
            width,
            height,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut m = BitMask::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    m.set(x, y, true);
                }
            }
        }
        m
    }

    /// Builds a mask from row-major booleans.
    pub fn from_row_major(width: u32, height: u32, bits: &[bool]) -> Result<Self> {
        if bits.len() != width as usize * height as usize {
            return Err(Error::DimensionMismatch {
                expected: (width, height),
                found: (bits.len() as u32, 1),
            });
        }
        let mut m = BitMask::new(width, height);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                m.words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(m)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.width as usize * self.height as usize
    }

    fn index(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y as usize * self.width as usize + x as usize
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.get_index(self.index(x, y))
    }

    /// Row-major linear index access.
    pub fn get_index(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        let i = self.index(x, y);
        self.set_index(i, value);
    }

    pub fn set_index(&mut self, i: usize, value: bool) {
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn check_same_dims(&self, other: &BitMask) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &BitMask, op: impl Fn(u64, u64) -> u64) -> BitMask {
        assert_eq!(self.dims(), other.dims(), "mask dimensions differ");
        BitMask {
            width: self.width,
            height: self.height,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// Panics if dimensions differ; use [`check_same_dims`](Self::check_same_dims) first
    /// for untrusted inputs.
    pub fn and(&self, other: &BitMask) -> BitMask {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BitMask) -> BitMask {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn and_not(&self, other: &BitMask) -> BitMask {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_count(&self, other: &BitMask) -> u64 {
        assert_eq!(self.dims(), other.dims(), "mask dimensions differ");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & b).count_ones() as u64)
            .sum()
    }

    pub fn intersects(&self, other: &BitMask) -> bool {
        assert_eq!(self.dims(), other.dims(), "mask dimensions differ");
        self.words.iter().zip(&other.words).any(|(&a, &b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        assert_eq!(self.dims(), other.dims(), "mask dimensions differ");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    /// Set pixels as `(x, y)` in row-major order.
    pub fn iter_set(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.words.iter().enumerate().flat_map(move |(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let i = wi * 64 + b;
                Some(((i % w) as u32, (i / w) as u32))
            })
        })
    }

    /// Tight `(x_min, y_min, width, height)` box, or `None` for an empty mask.
    pub fn bbox(&self) -> Option<[u32; 4]> {
        let mut it = self.iter_set();
        let (x0, y0) = it.next()?;
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (x0, y0, x0, y0);
        for (x, y) in it {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        Some([xmin, ymin, xmax - xmin + 1, ymax - ymin + 1])
    }

    /// Pixels of the mask with at least one 4-neighbour outside the mask.
    /// Pixels on the image border count as boundary. The result is an
    /// 8-connected one-pixel contour.
    pub fn boundary(&self) -> BitMask {
        let (w, h) = self.dims();
        let mut out = BitMask::new(w, h);
        for (x, y) in self.iter_set() {
            let edge = x == 0
                || y == 0
                || x + 1 == w
                || y + 1 == h
                || !self.get(x - 1, y)
                || !self.get(x + 1, y)
                || !self.get(x, y - 1)
                || !self.get(x, y + 1);
            if edge {
                out.set(x, y, true);
            }
        }
        out
    }

    /// Morphological dilation by a disk of the given pixel radius.
    /// Radius 0 returns a copy.
    pub fn dilate(&self, radius: u32) -> BitMask {
        if radius == 0 {
            return self.clone();
        }
        let r = radius as i64;
        let offsets: Vec<(i64, i64)> = (-r..=r)
            .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
            .filter(|(dx, dy)| dx * dx + dy * dy <= r * r)
            .collect();
        let (w, h) = (self.width as i64, self.height as i64);
        let mut out = BitMask::new(self.width, self.height);
        for (x, y) in self.iter_set() {
            for &(dx, dy) in &offsets {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx >= 0 && ny >= 0 && nx < w && ny < h {
                    out.set(nx as u32, ny as u32, true);
                }
            }
        }
        out
    }

    /// Morphological erosion by the 3×3 square; border pixels are removed.
    pub fn erode_once(&self) -> BitMask {
        let (w, h) = self.dims();
        BitMask::from_fn(w, h, |x, y| {
            if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
                return false;
            }
            (y - 1..=y + 1).all(|yy| (x - 1..=x + 1).all(|xx| self.get(xx, yy)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(w: u32, h: u32, x0: u32, y0: u32, x1: u32, y1: u32) -> BitMask {
        BitMask::from_fn(w, h, |x, y| x >= x0 && x < x1 && y >= y0 && y < y1)
    }

    #[test]
    fn set_get_count() {
        let mut m = BitMask::new(70, 3);
        m.set(69, 2, true);
        m.set(0, 1, true);
        assert!(m.get(69, 2) && m.get(0, 1) && !m.get(1, 1));
        assert_eq!(m.count(), 2);
        m.set(0, 1, false);
        assert_eq!(m.count(), 1);
    }

    #[test]
    fn algebra() {
        let a = rect(10, 10, 0, 0, 5, 5);
        let b = rect(10, 10, 3, 3, 8, 8);
        assert_eq!(a.and(&b).count(), 4);
        assert_eq!(a.or(&b).count(), 46);
        assert_eq!(a.and_not(&b).count(), 21);
        assert_eq!(a.intersection_count(&b), 4);
        assert!(a.and(&b).is_subset_of(&a));
    }

    #[test]
    fn bbox_is_tight() {
        let m = rect(20, 20, 3, 4, 9, 7);
        assert_eq!(m.bbox(), Some([3, 4, 6, 3]));
        assert_eq!(BitMask::new(4, 4).bbox(), None);
    }

    #[test]
    fn boundary_of_square() {
        let m = rect(10, 10, 2, 2, 7, 7);
        let b = m.boundary();
        assert_eq!(b.count(), 16);
        assert!(!b.get(4, 4));
        assert!(b.get(2, 2) && b.get(6, 4));
    }

    #[test]
    fn disk_dilation() {
        let mut m = BitMask::new(11, 11);
        m.set(5, 5, true);
        assert_eq!(m.dilate(1).count(), 5);
        assert_eq!(m.dilate(2).count(), 13);
        assert_eq!(m.dilate(0), m);
    }

    #[test]
    fn erosion_shrinks_by_one() {
        let m = rect(10, 10, 2, 2, 7, 7);
        assert_eq!(m.erode_once(), rect(10, 10, 3, 3, 6, 6));
    }

    #[test]
    fn iter_set_matches_get() {
        let m = BitMask::from_fn(13, 7, |x, y| (x * 3 + y * 5) % 4 == 0);
        let listed: Vec<_> = m.iter_set().collect();
        let expect: Vec<_> = (0..7)
            .flat_map(|y| (0..13).map(move |x| (x, y)))
            .filter(|&(x, y)| m.get(x, y))
            .collect();
        assert_eq!(listed, expect);
    }
}
