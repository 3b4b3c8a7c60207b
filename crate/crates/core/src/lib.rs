//! Synthetic cluttered-tabletop datasets for amodal instance segmentation.
//!
//! The pipeline for each scene:
//!
//! 1. **Sample** a table, a multiset of object meshes and initial poses
//!    ([`sampler`]).
//! 2. **Settle** the objects onto the tabletop and drop the ones that end up
//!    off the table ([`settler`]).
//! 3. For each of `V` **viewpoints** on a hemisphere shell around the table,
//!    sample point lights, **render** the scene with a software rasterizer
//!    ([`raster`]), and **annotate** visible, amodal and occlusion masks plus
//!    the occlusion order matrix ([`annotate`]).
//! 4. **Write** RGB and 16-bit depth PNGs, OOAM files, and a COCO-style JSON
//!    with RLE masks ([`dataset`]).
//!
//! Predictions in the same JSON schema are scored by [`metrics`]: overlap and
//! boundary P/R/F, F@.75, occlusion classification, and occlusion order
//! accuracy.

pub mod annotate;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod geometry;
pub mod mask;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod sampler;
pub mod settler;

pub use config::SceneConfig;
pub use error::{Error, Result};
pub use geometry::Vec3;
pub use mask::BitMask;
