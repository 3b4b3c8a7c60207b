use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::annotate::Ooam;
use crate::error::{Error, Result};
use crate::mask::BitMask;

use super::rle::{rle_decode, RleMask};
use super::schema::{AnnotationEntry, AnnotationsFile, ImageEntry, ANNOTATIONS_FILE, SCHEMA_VERSION};
use super::{DatasetRecord, ObjectRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Generated ground truth: files must exist, full mask algebra holds.
    GroundTruth,
    /// Model output: only the visible mask is required.
    Prediction,
}

/// Loads a dataset written by [`DatasetWriter`](super::DatasetWriter),
/// re-validating every mask and referenced file.
pub fn read_dataset(root: &Path) -> Result<Vec<DatasetRecord>> {
    let doc = load_document(&root.join(ANNOTATIONS_FILE))?;
    build_records(doc, Some(root), Mode::GroundTruth)
}

/// Loads a prediction file in the annotations schema. Missing amodal or
/// occlusion masks are accepted as empty and flagged on the record.
pub fn read_predictions(path: &Path) -> Result<Vec<DatasetRecord>> {
    let doc = load_document(path)?;
    build_records(doc, path.parent(), Mode::Prediction)
}

fn load_document(path: &Path) -> Result<AnnotationsFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: AnnotationsFile = serde_json::from_str(&text)
        .map_err(|e| Error::load(path.display().to_string(), format!("schema violation: {e}")))?;
    if doc.info.schema_version != SCHEMA_VERSION {
        return Err(Error::load(
            path.display().to_string(),
            format!(
                "unsupported schema version `{}` (expected `{SCHEMA_VERSION}`)",
                doc.info.schema_version
            ),
        ));
    }
    Ok(doc)
}

/// Reads a 16-bit depth PNG back as millimeters, row-major.
pub fn read_depth_png(path: &Path) -> Result<(u32, u32, Vec<u16>)> {
    let img = image::open(path)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?
        .into_luma16();
    Ok((img.width(), img.height(), img.into_raw()))
}

fn decode(rle: &RleMask, image: &ImageEntry, what: &str, record: &str) -> Result<BitMask> {
    if rle.size != [image.height, image.width] {
        return Err(Error::load(
            record,
            format!(
                "{what} mask size {:?} does not match image {}x{}",
                rle.size, image.height, image.width
            ),
        ));
    }
    rle_decode(rle).map_err(|e| Error::load(record, format!("{what} mask: {e}")))
}

fn resolve(base: Option<&Path>, rel: &Option<String>, record: &str, what: &str, must_exist: bool) -> Result<Option<PathBuf>> {
    let Some(rel) = rel else {
        if must_exist {
            return Err(Error::load(record, format!("missing {what} file name")));
        }
        return Ok(None);
    };
    let path = base.map(|b| b.join(rel)).unwrap_or_else(|| PathBuf::from(rel));
    if must_exist && !path.is_file() {
        return Err(Error::load(record, format!("{what} file {} does not exist", path.display())));
    }
    Ok(Some(path))
}

fn build_object(a: &AnnotationEntry, image: &ImageEntry, mode: Mode) -> Result<ObjectRecord> {
    let record = format!("annotation {} (image {})", a.id, a.image_id);
    let visible = decode(&a.visible_mask, image, "visible", &record)?;
    let empty = || BitMask::new(image.width, image.height);
    let (amodal, amodal_missing) = match &a.amodal_mask {
        Some(r) => (decode(r, image, "amodal", &record)?, false),
        None if mode == Mode::Prediction => (empty(), true),
        None => return Err(Error::load(&record, "missing amodal mask")),
    };
    let (occlusion, occlusion_missing) = match &a.occlusion_mask {
        Some(r) => (decode(r, image, "occlusion", &record)?, false),
        None if mode == Mode::Prediction => (empty(), true),
        None => return Err(Error::load(&record, "missing occlusion mask")),
    };
    if !(0.0..=1.0).contains(&a.occlusion_rate) {
        return Err(Error::load(&record, format!("occlusion rate {} outside [0, 1]", a.occlusion_rate)));
    }
    if mode == Mode::GroundTruth {
        let fail = |m: &str| Err(Error::load(&record, m.to_string()));
        if !visible.is_subset_of(&amodal) {
            return fail("visible mask is not contained in the amodal mask");
        }
        if occlusion != amodal.and_not(&visible) {
            return fail("occlusion mask differs from amodal minus visible");
        }
        if amodal.is_empty() {
            return fail("amodal mask is empty");
        }
        let rate = occlusion.count() as f64 / amodal.count() as f64;
        if (rate - a.occlusion_rate).abs() > 1e-9 || rate >= 1.0 {
            return fail("occlusion rate does not match the masks");
        }
        if visible.bbox() != Some(a.bbox) {
            return fail("bbox does not match the visible mask");
        }
        if visible.count() != a.area {
            return fail("area does not match the visible mask");
        }
    }
    Ok(ObjectRecord {
        instance_id: a.instance_id,
        object_name: a.object_name.clone(),
        visible,
        amodal,
        occlusion,
        occlusion_rate: a.occlusion_rate,
        bbox: a.bbox,
        confidence: a.confidence,
        amodal_missing,
        occlusion_missing,
    })
}

fn build_records(doc: AnnotationsFile, base: Option<&Path>, mode: Mode) -> Result<Vec<DatasetRecord>> {
    let mut by_image: BTreeMap<u64, Vec<&AnnotationEntry>> = BTreeMap::new();
    for a in &doc.annotations {
        by_image.entry(a.image_id).or_default().push(a);
    }
    let mut seen = BTreeMap::new();
    for img in &doc.images {
        if seen.insert(img.id, ()).is_some() {
            return Err(Error::load(format!("image {}", img.id), "duplicate image id"));
        }
    }
    if let Some(orphan) = by_image.keys().find(|id| !seen.contains_key(id)) {
        return Err(Error::load(
            format!("image {orphan}"),
            "annotations reference an image that is not listed",
        ));
    }

    let strict = mode == Mode::GroundTruth;
    let mut records = Vec::with_capacity(doc.images.len());
    for image in &doc.images {
        let record = format!("image {}", image.id);
        let mut anns = by_image.remove(&image.id).unwrap_or_default();
        anns.sort_by_key(|a| a.id);
        let objects = anns
            .iter()
            .map(|a| build_object(a, image, mode))
            .collect::<Result<Vec<_>>>()?;

        let rgb_path = resolve(base, &image.file_name, &record, "RGB", strict)?;
        let depth_path = resolve(base, &image.depth_file_name, &record, "depth", strict)?;
        let ooam_path = resolve(base, &image.ooam_file_name, &record, "OOAM", strict)?;
        let ooam = match (&ooam_path, strict) {
            (Some(p), true) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                let o: Ooam = serde_json::from_str(&text)
                    .map_err(|e| Error::load(&record, format!("OOAM file: {e}")))?;
                if o.size() != objects.len() {
                    return Err(Error::load(
                        &record,
                        format!("OOAM is {0}x{0} but the image has {1} objects", o.size(), objects.len()),
                    ));
                }
                Some(o)
            }
            _ => None,
        };
        if strict && image.camera.is_none() {
            return Err(Error::load(&record, "missing camera"));
        }
        records.push(DatasetRecord {
            image_id: image.id,
            scene_id: image.scene_id,
            view_id: image.view_id,
            width: image.width,
            height: image.height,
            rgb_path,
            depth_path,
            ooam_path,
            camera: image.camera.clone(),
            objects,
            ooam,
        });
    }
    records.sort_by_key(|r| r.image_id);
    Ok(records)
}
