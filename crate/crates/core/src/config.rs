//! Generation configuration, loaded from YAML.
//!
//! Every field has a default, so an empty YAML document is a valid config.
//! Defaults follow the reference tabletop setup: 1 to 40 objects per scene,
//! 0 to 2 point lights per view, lights at 2000–6500 K and 100–20000 lx, and
//! the L515-like camera (apertures 2.63 × 1.96, focal length 1.88).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{CameraIntrinsics, TableSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub num_scenes: u32,
    pub n_lower: u32,
    pub n_upper: u32,
    pub v_views: u32,
    pub l_lower: u32,
    pub l_upper: u32,
    /// Kept so configs written for a physics-based settler still load.
    /// The deterministic settler ignores it.
    pub settle_time: f64,
    pub master_seed: u64,
    pub image_width: u32,
    pub image_height: u32,

    pub focal_length: f64,
    pub horizontal_aperture: f64,
    pub vertical_aperture: f64,

    /// Fixed camera shell radii; `None` derives them from the table size.
    pub r_view_lower: Option<f64>,
    pub r_view_upper: Option<f64>,
    /// Fixed light shell radii; `None` derives them from the camera shell.
    pub r_light_lower: Option<f64>,
    pub r_light_upper: Option<f64>,

    pub temperature_lower: f64,
    pub temperature_upper: f64,
    pub intensity_lower: f64,
    pub intensity_upper: f64,

    /// Candidate tables, one picked uniformly per scene.
    pub tables: Vec<TableDims>,
    /// Directory of `.obj` meshes. `None` uses the built-in primitive set.
    pub catalog_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableDims {
    pub width: f64,
    pub length: f64,
    pub height: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            num_scenes: 1,
            n_lower: 1,
            n_upper: 40,
            v_views: 50,
            l_lower: 0,
            l_upper: 2,
            settle_time: 5.0,
            master_seed: 0,
            image_width: 640,
            image_height: 480,
            focal_length: 1.88,
            horizontal_aperture: 2.63,
            vertical_aperture: 1.96,
            r_view_lower: None,
            r_view_upper: None,
            r_light_lower: None,
            r_light_upper: None,
            temperature_lower: 2000.0,
            temperature_upper: 6500.0,
            intensity_lower: 100.0,
            intensity_upper: 20000.0,
            tables: vec![
                TableDims {
                    width: 1.2,
                    length: 0.8,
                    height: 0.75,
                },
                TableDims {
                    width: 1.0,
                    length: 1.0,
                    height: 0.72,
                },
                TableDims {
                    width: 1.6,
                    length: 0.9,
                    height: 0.76,
                },
            ],
            catalog_dir: None,
        }
    }
}

impl SceneConfig {
    pub fn from_yaml_str(s: &str) -> Result<Self> {
        // An empty document deserializes to unit, not a map.
        let cfg: SceneConfig = if s.trim().is_empty() {
            SceneConfig::default()
        } else {
            serde_yaml::from_str(s)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_yaml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_yaml_str(&text)?;
        // Relative catalog paths resolve against the config file's directory.
        if let (Some(dir), Some(parent)) = (cfg.catalog_dir.as_ref(), path.parent()) {
            if dir.is_relative() {
                cfg.catalog_dir = Some(parent.join(dir));
            }
        }
        Ok(cfg)
    }

    pub fn to_yaml(&self) -> Result<String> {
        Ok(serde_yaml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.n_lower < 1 || self.n_lower > self.n_upper {
            return fail("object counts must satisfy 1 <= n_lower <= n_upper");
        }
        if self.v_views < 1 {
            return fail("v_views must be at least 1");
        }
        if self.l_lower > self.l_upper {
            return fail("light counts must satisfy l_lower <= l_upper");
        }
        if self.image_width == 0 || self.image_height == 0 {
            return fail("image dimensions must be positive");
        }
        if !(self.focal_length > 0.0 && self.horizontal_aperture > 0.0 && self.vertical_aperture > 0.0)
        {
            return fail("focal length and apertures must be positive");
        }
        if !(self.temperature_lower > 0.0 && self.temperature_lower <= self.temperature_upper) {
            return fail("temperature bounds must satisfy 0 < lower <= upper");
        }
        if !(self.intensity_lower >= 0.0 && self.intensity_lower <= self.intensity_upper) {
            return fail("intensity bounds must satisfy 0 <= lower <= upper");
        }
        for (lo, hi, what) in [
            (self.r_view_lower, self.r_view_upper, "r_view"),
            (self.r_light_lower, self.r_light_upper, "r_light"),
        ] {
            if let Some(lo) = lo {
                if lo <= 0.0 {
                    return Err(Error::Config(format!("{what}_lower must be positive")));
                }
            }
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Err(Error::Config(format!("{what}_lower exceeds {what}_upper")));
                }
            }
        }
        if self.tables.is_empty() {
            return fail("at least one table must be configured");
        }
        for t in &self.tables {
            TableSpec::new(t.width, t.length, t.height)?;
        }
        Ok(())
    }

    pub fn intrinsics(&self) -> CameraIntrinsics {
        CameraIntrinsics {
            focal_length: self.focal_length,
            horizontal_aperture: self.horizontal_aperture,
            vertical_aperture: self.vertical_aperture,
            image_width: self.image_width,
            image_height: self.image_height,
        }
    }
}
