//! Per-view ground truth: visible, amodal and occlusion masks, occlusion
//! rates, and the occlusion order between objects.

pub mod graph;
pub mod ooam;

use std::collections::BTreeSet;

use crate::error::Result;
use crate::mask::BitMask;
use crate::raster::{rasterize, MeshLibrary, RenderOutput};
use crate::sampler::Viewpoint;
use crate::settler::SceneState;

pub use graph::{build_oodag, build_oodag_with_ids, classify_layers, grasp_order, CyclicGraph, Layer, Oodag};
pub use ooam::{generate_ooam, Ooam};

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceAnnotation {
    pub instance_id: u32,
    pub object_name: String,
    pub visible: BitMask,
    pub amodal: BitMask,
    /// `amodal` minus `visible`.
    pub occlusion: BitMask,
    /// `|occlusion| / |amodal|`, always below 1.
    pub occlusion_rate: f64,
    /// `(x_min, y_min, width, height)` of the visible mask.
    pub bbox: [u32; 4],
}

impl InstanceAnnotation {
    /// Derives the occlusion mask and rate. Returns `None` when the object
    /// would not be annotated: nothing of it projects into the image, or it
    /// is completely hidden.
    pub fn from_masks(
        instance_id: u32,
        object_name: impl Into<String>,
        visible: BitMask,
        amodal: BitMask,
    ) -> Option<Self> {
        let amodal_px = amodal.count();
        if amodal_px == 0 {
            return None;
        }
        let occlusion = amodal.and_not(&visible);
        let occlusion_rate = occlusion.count() as f64 / amodal_px as f64;
        if occlusion_rate >= 1.0 {
            return None;
        }
        let bbox = visible.bbox()?;
        Some(InstanceAnnotation {
            instance_id,
            object_name: object_name.into(),
            visible,
            amodal,
            occlusion,
            occlusion_rate,
            bbox,
        })
    }
}

/// Everything captured for one viewpoint.
#[derive(Debug, Clone)]
pub struct CapturedView {
    /// Render with every object present.
    pub render: RenderOutput,
    pub annotations: Vec<InstanceAnnotation>,
    /// Indexed like `annotations`.
    pub ooam: Ooam,
}

/// Renders the full scene and every object in isolation, then derives the
/// annotations and OOAM.
pub fn capture_view(scene: &SceneState, view: &Viewpoint, meshes: &MeshLibrary) -> Result<CapturedView> {
    let all: BTreeSet<u32> = scene.objects.iter().map(|o| o.instance_id).collect();
    let render = rasterize(scene, view, &all, meshes)?;
    let mut annotations = Vec::new();
    for obj in &scene.objects {
        let visible = render.mask_of(obj.instance_id);
        let isolated = rasterize(scene, view, &BTreeSet::from([obj.instance_id]), meshes)?;
        let amodal = isolated.mask_of(obj.instance_id);
        if let Some(a) = InstanceAnnotation::from_masks(obj.instance_id, obj.mesh_id.clone(), visible, amodal) {
            annotations.push(a);
        }
    }
    let visible: Vec<BitMask> = annotations.iter().map(|a| a.visible.clone()).collect();
    let occlusion: Vec<BitMask> = annotations.iter().map(|a| a.occlusion.clone()).collect();
    let ooam = generate_ooam(&visible, &occlusion)?;
    Ok(CapturedView {
        render,
        annotations,
        ooam,
    })
}

pub fn annotate_view(
    scene: &SceneState,
    view: &Viewpoint,
    meshes: &MeshLibrary,
) -> Result<(Vec<InstanceAnnotation>, Ooam)> {
    let c = capture_view(scene, view, meshes)?;
    Ok((c.annotations, c.ooam))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occlusion_rate_arithmetic() {
        let amodal = BitMask::from_fn(4, 3, |_, _| true);
        let visible = BitMask::from_fn(4, 3, |x, _| x < 3);
        let a = InstanceAnnotation::from_masks(0, "obj", visible.clone(), amodal.clone()).unwrap();
        assert_eq!(a.amodal.count(), 12);
        assert_eq!(a.visible.count(), 9);
        assert_eq!(a.occlusion.count(), 3);
        assert_eq!(a.occlusion_rate, 0.25);
        assert_eq!(a.bbox, [0, 0, 3, 3]);
    }

    #[test]
    fn fully_hidden_or_absent_objects_are_dropped() {
        let amodal = BitMask::from_fn(4, 3, |_, _| true);
        let nothing = BitMask::new(4, 3);
        assert!(InstanceAnnotation::from_masks(0, "o", nothing.clone(), amodal).is_none());
        assert!(InstanceAnnotation::from_masks(0, "o", nothing.clone(), nothing).is_none());
    }

    #[test]
    fn unoccluded_object_has_empty_occlusion() {
        let m = BitMask::from_fn(4, 3, |x, y| x == y);
        let a = InstanceAnnotation::from_masks(1, "o", m.clone(), m).unwrap();
        assert!(a.occlusion.is_empty());
        assert_eq!(a.occlusion_rate, 0.0);
    }
}
