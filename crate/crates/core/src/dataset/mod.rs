//! On-disk dataset layout.
//!
//! ```text
//! <root>/annotations.json
//! <root>/scene_0000/view_0000.rgb.png     8-bit RGB
//! <root>/scene_0000/view_0000.depth.png   16-bit gray, millimeters
//! <root>/scene_0000/view_0000.ooam.json   {"m":M,"rows":[[..],..]}
//! ```

pub mod reader;
pub mod rle;
pub mod schema;
pub mod writer;

use std::path::{Path, PathBuf};

use crate::annotate::Ooam;
use crate::error::{Error, Result};
use crate::mask::BitMask;

pub use reader::{read_dataset, read_depth_png, read_predictions};
pub use rle::{rle_decode, rle_encode, RleMask};
pub use schema::{AnnotationsFile, CameraEntry, ImageEntry, ANNOTATIONS_FILE, SCHEMA_VERSION};
pub use writer::{depth_to_millimeters, write_view, DatasetWriter, ViewEntry};

/// One annotated object as held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectRecord {
    pub instance_id: u32,
    pub object_name: String,
    pub visible: BitMask,
    pub amodal: BitMask,
    pub occlusion: BitMask,
    pub occlusion_rate: f64,
    pub bbox: [u32; 4],
    pub confidence: Option<f64>,
    /// The source omitted the amodal mask; `amodal` is empty.
    pub amodal_missing: bool,
    /// The source omitted the occlusion mask; `occlusion` is empty.
    pub occlusion_missing: bool,
}

/// One image with its annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub image_id: u64,
    pub scene_id: u32,
    pub view_id: u32,
    pub width: u32,
    pub height: u32,
    pub rgb_path: Option<PathBuf>,
    pub depth_path: Option<PathBuf>,
    pub ooam_path: Option<PathBuf>,
    pub camera: Option<CameraEntry>,
    /// Indexed like the OOAM rows.
    pub objects: Vec<ObjectRecord>,
    pub ooam: Option<Ooam>,
}

pub fn scene_dir_name(scene_id: u32) -> String {
    format!("scene_{scene_id:04}")
}

pub fn view_stem(view_id: u32) -> String {
    format!("view_{view_id:04}")
}

/// Writes via a temporary sibling and rename so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
