use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::{ImageBuffer, Luma, Rgb};

use crate::annotate::CapturedView;
use crate::error::{Error, Result};
use crate::raster::RenderOutput;
use crate::sampler::Viewpoint;

use super::rle::rle_encode;
use super::schema::{AnnotationEntry, AnnotationsFile, CameraEntry, ImageEntry, Info, ANNOTATIONS_FILE};
use super::{scene_dir_name, view_stem, write_atomic, DatasetRecord, ObjectRecord};

/// Quantizes meters to millimeters, saturating at `u16::MAX`.
pub fn depth_to_millimeters(depth_m: f64) -> u16 {
    let mm = (depth_m * 1000.0).round();
    if mm.is_nan() || mm <= 0.0 {
        0
    } else if mm >= u16::MAX as f64 {
        u16::MAX
    } else {
        mm as u16
    }
}

/// Everything `annotations.json` needs from one written view. Annotation ids
/// are assigned when the dataset is finished.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewEntry {
    pub image: ImageEntry,
    pub annotations: Vec<AnnotationEntry>,
}

fn save_rgb(path: &Path, render: &RenderOutput) -> Result<()> {
    let img: ImageBuffer<Rgb<u8>, Vec<u8>> = ImageBuffer::from_raw(
        render.width,
        render.height,
        render.color.iter().flatten().copied().collect(),
    )
    .expect("color buffer matches image size");
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

fn save_depth(path: &Path, render: &RenderOutput) -> Result<()> {
    let img: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_raw(
        render.width,
        render.height,
        render.depth_map.iter().map(|&d| depth_to_millimeters(d)).collect(),
    )
    .expect("depth buffer matches image size");
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the RGB, depth and OOAM files of one view under `root` and returns
/// its JSON entry together with the in-memory record.
pub fn write_view(
    root: &Path,
    scene_id: u32,
    view_id: u32,
    image_id: u64,
    view: &Viewpoint,
    captured: &CapturedView,
) -> Result<(ViewEntry, DatasetRecord)> {
    let dir_name = scene_dir_name(scene_id);
    let dir = root.join(&dir_name);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let stem = view_stem(view_id);
    let rel = |suffix: &str| format!("{dir_name}/{stem}.{suffix}");
    let (rgb_rel, depth_rel, ooam_rel) = (rel("rgb.png"), rel("depth.png"), rel("ooam.json"));

    save_rgb(&root.join(&rgb_rel), &captured.render)?;
    save_depth(&root.join(&depth_rel), &captured.render)?;
    write_atomic(&root.join(&ooam_rel), captured.ooam.to_json().as_bytes())?;

    let camera = CameraEntry {
        intrinsics: view.intrinsics,
        position: view.position,
        look_target: view.look_target,
        lights: view.lights.clone(),
    };
    let image = ImageEntry {
        id: image_id,
        scene_id,
        view_id,
        width: captured.render.width,
        height: captured.render.height,
        file_name: Some(rgb_rel.clone()),
        depth_file_name: Some(depth_rel.clone()),
        ooam_file_name: Some(ooam_rel.clone()),
        camera: Some(camera.clone()),
    };
    let annotations = captured
        .annotations
        .iter()
        .map(|a| AnnotationEntry {
            id: 0,
            image_id,
            instance_id: a.instance_id,
            object_name: a.object_name.clone(),
            category_id: 1,
            bbox: a.bbox,
            area: a.visible.count(),
            occlusion_rate: a.occlusion_rate,
            visible_mask: rle_encode(&a.visible),
            amodal_mask: Some(rle_encode(&a.amodal)),
            occlusion_mask: Some(rle_encode(&a.occlusion)),
            confidence: None,
        })
        .collect();
    let record = DatasetRecord {
        image_id,
        scene_id,
        view_id,
        width: image.width,
        height: image.height,
        rgb_path: Some(root.join(rgb_rel)),
        depth_path: Some(root.join(depth_rel)),
        ooam_path: Some(root.join(ooam_rel)),
        camera: Some(camera),
        objects: captured
            .annotations
            .iter()
            .map(|a| ObjectRecord {
                instance_id: a.instance_id,
                object_name: a.object_name.clone(),
                visible: a.visible.clone(),
                amodal: a.amodal.clone(),
                occlusion: a.occlusion.clone(),
                occlusion_rate: a.occlusion_rate,
                bbox: a.bbox,
                confidence: None,
                amodal_missing: false,
                occlusion_missing: false,
            })
            .collect(),
        ooam: Some(captured.ooam.clone()),
    };
    Ok((ViewEntry { image, annotations }, record))
}

/// Collects view entries and writes `annotations.json` in image-id order.
#[derive(Debug)]
pub struct DatasetWriter {
    root: PathBuf,
    views: BTreeMap<(u32, u32), ViewEntry>,
}

impl DatasetWriter {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        std::fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        Ok(DatasetWriter {
            root,
            views: BTreeMap::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn check_new(&self, scene: u32, view: u32) -> Result<()> {
        if self.views.contains_key(&(scene, view)) {
            return Err(Error::DuplicateView { scene, view });
        }
        Ok(())
    }

    /// Registers an entry produced by [`write_view`].
    pub fn add(&mut self, entry: ViewEntry) -> Result<()> {
        let key = (entry.image.scene_id, entry.image.view_id);
        self.check_new(key.0, key.1)?;
        self.views.insert(key, entry);
        Ok(())
    }

    /// Writes one view's files and registers it.
    pub fn write_view(
        &mut self,
        scene_id: u32,
        view_id: u32,
        image_id: u64,
        view: &Viewpoint,
        captured: &CapturedView,
    ) -> Result<DatasetRecord> {
        self.check_new(scene_id, view_id)?;
        let (entry, record) = write_view(&self.root, scene_id, view_id, image_id, view, captured)?;
        self.add(entry)?;
        Ok(record)
    }

    /// Builds the annotations document without writing it.
    pub fn document(&self) -> AnnotationsFile {
        let mut entries: Vec<&ViewEntry> = self.views.values().collect();
        entries.sort_by_key(|e| (e.image.id, e.image.scene_id, e.image.view_id));
        let mut next_id = 1u64;
        let mut annotations = Vec::new();
        for e in &entries {
            for a in &e.annotations {
                annotations.push(AnnotationEntry { id: next_id, ..a.clone() });
                next_id += 1;
            }
        }
        AnnotationsFile {
            info: Info::default(),
            images: entries.iter().map(|e| e.image.clone()).collect(),
            annotations,
            categories: super::schema::default_categories(),
        }
    }

    /// Writes `annotations.json` and returns its path.
    pub fn finish(self) -> Result<PathBuf> {
        let doc = self.document();
        let path = self.root.join(ANNOTATIONS_FILE);
        let bytes = serde_json::to_vec(&doc)?;
        write_atomic(&path, &bytes)?;
        Ok(path)
    }
}
