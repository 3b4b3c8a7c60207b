use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::BitMask;

/// Occlusion order adjacency matrix: `get(i, j)` is true when object `i`
/// occludes object `j`. Serialized as `{"m": M, "rows": [[0,1,...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OoamRepr", into = "OoamRepr")]
pub struct Ooam {
    m: usize,
    bits: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct OoamRepr {
    m: usize,
    rows: Vec<Vec<u8>>,
}

impl TryFrom<OoamRepr> for Ooam {
    type Error = String;

    fn try_from(r: OoamRepr) -> std::result::Result<Self, String> {
        if r.rows.len() != r.m {
            return Err(format!("expected {} rows, found {}", r.m, r.rows.len()));
        }
        let mut out = Ooam::zeros(r.m);
        for (i, row) in r.rows.iter().enumerate() {
            if row.len() != r.m {
                return Err(format!("row {i} has {} entries, expected {}", row.len(), r.m));
            }
            for (j, &v) in row.iter().enumerate() {
                match (v, i == j) {
                    (0, _) => {}
                    (1, false) => out.set(i, j, true),
                    (1, true) => return Err(format!("diagonal entry ({i}, {i}) is set")),
                    _ => return Err(format!("entry ({i}, {j}) is {v}, expected 0 or 1")),
                }
            }
        }
        Ok(out)
    }
}

impl From<Ooam> for OoamRepr {
    fn from(o: Ooam) -> Self {
        OoamRepr {
            m: o.m,
            rows: (0..o.m)
                .map(|i| (0..o.m).map(|j| o.get(i, j) as u8).collect())
                .collect(),
        }
    }
}

impl Ooam {
    pub fn zeros(m: usize) -> Self {
        Ooam {
            m,
            bits: vec![false; m * m],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        Ooam::try_from(OoamRepr {
            m: rows.len(),
            rows: rows.to_vec(),
        })
        .map_err(|e| Error::load("OOAM", e))
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.m + j]
    }

    /// Diagonal writes are ignored: an object cannot occlude itself.
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if i != j {
            self.bits[i * self.m + j] = value;
        }
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        OoamRepr::from(self.clone()).rows
    }

    /// All `(i, j)` with `i` occluding `j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m).flat_map(move |i| (0..self.m).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("OOAM serialization is infallible")
    }
}

/// Object `i` occludes object `j` when `i`'s visible pixels overlap `j`'s
/// occluded pixels.
pub fn generate_ooam(visible_masks: &[BitMask], occlusion_masks: &[BitMask]) -> Result<Ooam> {
    if visible_masks.len() != occlusion_masks.len() {
        return Err(Error::LengthMismatch(visible_masks.len(), occlusion_masks.len()));
    }
    if let Some(first) = visible_masks.first() {
        for m in visible_masks.iter().chain(occlusion_masks) {
            first.check_same_dims(m)?;
        }
    }
    let m = visible_masks.len();
    let mut ooam = Ooam::zeros(m);
    for (i, vis) in visible_masks.iter().enumerate() {
        for (j, occ) in occlusion_masks.iter().enumerate() {
            if i != j && vis.intersects(occ) {
                ooam.set(i, j, true);
            }
        }
    }
    Ok(ooam)
}
