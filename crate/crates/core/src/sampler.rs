//! Seeded sampling of tables, object sets, initial poses, camera viewpoints
//! and lights.
//!
//! All randomness comes from [`RngStreams`], which hands out independent
//! ChaCha8 streams keyed by `(master_seed, scene, view)`. A scene or view
//! therefore samples the same values no matter which thread handles it or
//! in what order.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::SceneConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::raster::camera::CameraFrame;

/// Identifier of the stream-derivation scheme. Bump when the mapping from
/// `(seed, scene, view)` to random values changes.
pub const RNG_SCHEME: &str = "chacha8-splitmix64-v1";

/// Height of the pose-initialization box above the tabletop.
pub const DROP_BOX_OFFSET: f64 = 0.2;
/// Vertical extent of the pose-initialization box.
pub const DROP_BOX_HEIGHT: f64 = 0.5;
/// Camera and light shells are centered this far above the tabletop center.
pub const HEMISPHERE_Z_OFFSET: f64 = 0.2;
/// Ratio between the outer and inner camera shell radii.
pub const VIEW_RADIUS_RATIO: f64 = 1.7;
/// Gap between the outer camera shell and the inner light shell.
pub const LIGHT_SHELL_GAP: f64 = 0.1;
/// Thickness of the light shell.
pub const LIGHT_SHELL_THICKNESS: f64 = 1.0;

pub type SceneRng = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Factory for per-scene and per-view random streams.
#[derive(Debug, Clone, Copy)]
pub struct RngStreams {
    key: [u8; 32],
}

impl RngStreams {
    pub fn new(master_seed: u64) -> Self {
        let mut state = master_seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        RngStreams { key }
    }

    fn stream(&self, words: &[u64]) -> SceneRng {
        let mut state = 0x5EED_0F5C_E7E5_u64;
        let mut id = 0u64;
        for &w in words {
            state ^= w;
            id = splitmix64(&mut state) ^ id.rotate_left(17);
        }
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(id);
        rng
    }

    /// Stream for scene-level draws: table, object set, initial poses.
    pub fn scene(&self, scene_index: u32) -> SceneRng {
        self.stream(&[1, scene_index as u64])
    }

    /// Stream for view-level draws: camera position and lights.
    pub fn view(&self, scene_index: u32, view_index: u32) -> SceneRng {
        self.stream(&[2, scene_index as u64, view_index as u64])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub width: f64,
    pub length: f64,
    pub height: f64,
}

impl TableSpec {
    pub fn new(width: f64, length: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && length > 0.0 && height > 0.0) {
            return Err(Error::Config(format!(
                "table dimensions must be positive, got {width} x {length} x {height}"
            )));
        }
        Ok(TableSpec {
            width,
            length,
            height,
        })
    }

    pub fn top_center(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, self.height)
    }

    /// Whether `(x, y)` lies within the tabletop extent (inclusive).
    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        x.abs() <= self.width / 2.0 && y.abs() <= self.length / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec3,
    /// Roll, pitch, yaw in radians, each in `[0, 2π)`.
    pub orientation: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub focal_length: f64,
    pub horizontal_aperture: f64,
    pub vertical_aperture: f64,
    pub image_width: u32,
    pub image_height: u32,
}

impl CameraIntrinsics {
    /// Horizontal focal length in pixels.
    pub fn fx(&self) -> f64 {
        self.image_width as f64 * self.focal_length / self.horizontal_aperture
    }

    /// Vertical focal length in pixels.
    pub fn fy(&self) -> f64 {
        self.image_height as f64 * self.focal_length / self.vertical_aperture
    }

    pub fn principal_point(&self) -> (f64, f64) {
        (self.image_width as f64 / 2.0, self.image_height as f64 / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightSource {
    pub position: Vec3,
    /// Lux.
    pub intensity: f64,
    /// Kelvin.
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Viewpoint {
    pub position: Vec3,
    pub look_target: Vec3,
    pub intrinsics: CameraIntrinsics,
    pub lights: Vec<LightSource>,
}

impl Viewpoint {
    pub fn frame(&self) -> CameraFrame {
        CameraFrame::look_at(self.position, self.look_target)
    }
}

pub fn sample_table(cfg: &SceneConfig, rng: &mut impl Rng) -> Result<TableSpec> {
    if cfg.tables.is_empty() {
        return Err(Error::Config("table catalog is empty".into()));
    }
    let t = cfg.tables[rng.gen_range(0..cfg.tables.len())];
    TableSpec::new(t.width, t.length, t.height)
}

/// Draws between `n_lower` and `n_upper` mesh ids from `catalog`, with replacement.
pub fn sample_object_set(
    catalog: &[String],
    cfg: &SceneConfig,
    rng: &mut impl Rng,
) -> Result<Vec<String>> {
    if catalog.is_empty() {
        return Err(Error::Config("object catalog is empty".into()));
    }
    if cfg.n_lower > cfg.n_upper {
        return Err(Error::Config("n_lower exceeds n_upper".into()));
    }
    let k = rng.gen_range(cfg.n_lower..=cfg.n_upper);
    Ok((0..k)
        .map(|_| catalog[rng.gen_range(0..catalog.len())].clone())
        .collect())
}

/// Uniform position inside the drop box above the table, uniform orientation.
pub fn sample_initial_pose(table: &TableSpec, rng: &mut impl Rng) -> Pose {
    let half_w = table.width / 2.0;
    let half_l = table.length / 2.0;
    let z0 = table.height + DROP_BOX_OFFSET;
    let position = Vec3::new(
        rng.gen_range(-half_w..=half_w),
        rng.gen_range(-half_l..=half_l),
        rng.gen_range(z0..=z0 + DROP_BOX_HEIGHT),
    );
    let orientation = [
        rng.gen_range(0.0..TAU),
        rng.gen_range(0.0..TAU),
        rng.gen_range(0.0..TAU),
    ];
    Pose {
        position,
        orientation,
    }
}

/// Inner and outer camera shell radii derived from the table footprint.
pub fn view_radius_bounds(table: &TableSpec) -> (f64, f64) {
    let lower = (table.width / 2.0).max(table.length / 2.0);
    (lower, VIEW_RADIUS_RATIO * lower)
}

/// Camera shell radii, honoring fixed overrides from the config.
pub fn view_radii(table: &TableSpec, cfg: &SceneConfig) -> (f64, f64) {
    let (lo, hi) = view_radius_bounds(table);
    let lo = cfg.r_view_lower.unwrap_or(lo);
    let hi = cfg.r_view_upper.unwrap_or(hi).max(lo);
    (lo, hi)
}

/// Light shell radii placed just outside the camera shell, honoring overrides.
pub fn light_radii(table: &TableSpec, cfg: &SceneConfig) -> (f64, f64) {
    let (_, view_hi) = view_radii(table, cfg);
    let lo = cfg.r_light_lower.unwrap_or(view_hi + LIGHT_SHELL_GAP);
    let hi = cfg
        .r_light_upper
        .unwrap_or(lo + LIGHT_SHELL_THICKNESS)
        .max(lo);
    (lo, hi)
}

/// Offset on the upper hemisphere of radius `r` for parameters `u, v ∈ [0, 1]`.
pub fn hemisphere_offset(r: f64, u: f64, v: f64) -> Vec3 {
    let polar = (1.0 - v).acos();
    Vec3::new(
        r * polar.sin() * (TAU * u).cos(),
        r * polar.sin() * (TAU * u).sin(),
        r * polar.cos(),
    )
}

pub fn sample_hemisphere_point(
    r_lower: f64,
    r_upper: f64,
    origin: Vec3,
    rng: &mut impl Rng,
) -> Vec3 {
    let r = if r_upper > r_lower {
        rng.gen_range(r_lower..=r_upper)
    } else {
        r_lower
    };
    let u: f64 = rng.gen_range(0.0..=1.0);
    let v: f64 = rng.gen_range(0.0..=1.0);
    origin + hemisphere_offset(r, u, v)
}

pub fn hemisphere_origin(table: &TableSpec) -> Vec3 {
    table.top_center() + Vec3::new(0.0, 0.0, HEMISPHERE_Z_OFFSET)
}

pub fn sample_lights(table: &TableSpec, cfg: &SceneConfig, rng: &mut impl Rng) -> Vec<LightSource> {
    let count = rng.gen_range(cfg.l_lower..=cfg.l_upper);
    let (lo, hi) = light_radii(table, cfg);
    let origin = hemisphere_origin(table);
    (0..count)
        .map(|_| {
            let position = sample_hemisphere_point(lo, hi, origin, rng);
            let temperature = rng.gen_range(cfg.temperature_lower..=cfg.temperature_upper);
            let intensity = rng.gen_range(cfg.intensity_lower..=cfg.intensity_upper);
            LightSource {
                position,
                intensity,
                temperature,
            }
        })
        .collect()
}

/// One camera position looking at the tabletop center, with its own lights.
pub fn sample_viewpoint(table: &TableSpec, cfg: &SceneConfig, rng: &mut impl Rng) -> Viewpoint {
    let (lo, hi) = view_radii(table, cfg);
    let position = sample_hemisphere_point(lo, hi, hemisphere_origin(table), rng);
    let lights = sample_lights(table, cfg, rng);
    Viewpoint {
        position,
        look_target: table.top_center(),
        intrinsics: cfg.intrinsics(),
        lights,
    }
}

pub fn sample_viewpoints(table: &TableSpec, cfg: &SceneConfig, rng: &mut impl Rng) -> Vec<Viewpoint> {
    (0..cfg.v_views)
        .map(|_| sample_viewpoint(table, cfg, rng))
        .collect()
}
