//! JSON layout of `annotations.json` and prediction files.

use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;
use crate::sampler::{CameraIntrinsics, LightSource};

use super::rle::RleMask;

pub const SCHEMA_VERSION: &str = "tabletop-amodal-coco/1";
pub const ANNOTATIONS_FILE: &str = "annotations.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationsFile {
    pub info: Info,
    pub images: Vec<ImageEntry>,
    pub annotations: Vec<AnnotationEntry>,
    #[serde(default = "default_categories")]
    pub categories: Vec<Category>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Info {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl Default for Info {
    fn default() -> Self {
        Info {
            schema_version: SCHEMA_VERSION.to_string(),
            description: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Category {
    pub id: u32,
    pub name: String,
}

pub fn default_categories() -> Vec<Category> {
    vec![Category {
        id: 1,
        name: "object".to_string(),
    }]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraEntry {
    pub intrinsics: CameraIntrinsics,
    pub position: Vec3,
    pub look_target: Vec3,
    #[serde(default)]
    pub lights: Vec<LightSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageEntry {
    pub id: u64,
    pub scene_id: u32,
    pub view_id: u32,
    pub width: u32,
    pub height: u32,
    /// RGB image path relative to the dataset root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_file_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ooam_file_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationEntry {
    pub id: u64,
    pub image_id: u64,
    pub instance_id: u32,
    pub object_name: String,
    #[serde(default = "one")]
    pub category_id: u32,
    /// `[x, y, width, height]` of the visible mask.
    #[serde(default)]
    pub bbox: [u32; 4],
    /// Visible pixel count.
    #[serde(default)]
    pub area: u64,
    #[serde(default)]
    pub occlusion_rate: f64,
    pub visible_mask: RleMask,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amodal_mask: Option<RleMask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occlusion_mask: Option<RleMask>,
    /// Prediction score; ignored by every metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
}

fn one() -> u32 {
    1
}
