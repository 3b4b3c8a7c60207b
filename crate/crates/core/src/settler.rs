//! Deterministic drop-stacking of objects onto the tabletop.
//!
//! Objects fall straight down without rotating, lowest first. Each comes to
//! rest on the table plane or on the highest already-settled object whose
//! footprint overlaps its own by more than [`STACK_OVERLAP`] of the smaller
//! footprint. Because overlapping objects keep their relative vertical order,
//! settling an already settled scene changes nothing.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Aabb;
use crate::raster::MeshLibrary;
use crate::sampler::{Pose, TableSpec};

/// Fraction of the smaller footprint two boxes must share to stack.
pub const STACK_OVERLAP: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectInstance {
    pub instance_id: u32,
    pub mesh_id: String,
    pub pose: Pose,
    /// World-space bounds of the posed mesh.
    pub aabb: Aabb,
}

impl ObjectInstance {
    pub fn new(instance_id: u32, mesh_id: impl Into<String>, pose: Pose, meshes: &MeshLibrary) -> Result<Self> {
        let mesh_id = mesh_id.into();
        let aabb = meshes.get(&mesh_id)?.world_aabb(&pose);
        Ok(ObjectInstance {
            instance_id,
            mesh_id,
            pose,
            aabb,
        })
    }

    fn translate_z(&mut self, dz: f64) {
        self.pose.position.z += dz;
        self.aabb = self.aabb.translated_z(dz);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneState {
    pub table: TableSpec,
    pub objects: Vec<ObjectInstance>,
}

/// Whether `a` rests on `b` if dropped onto it.
pub fn stacks_on(a: &Aabb, b: &Aabb) -> bool {
    let smaller = a.footprint_area().min(b.footprint_area());
    smaller > 0.0 && a.footprint_overlap(b) > STACK_OVERLAP * smaller
}

pub fn settle_scene(initial: &SceneState) -> SceneState {
    let table_z = initial.table.height;
    let mut order: Vec<usize> = (0..initial.objects.len()).collect();
    order.sort_by(|&a, &b| {
        let (oa, ob) = (&initial.objects[a], &initial.objects[b]);
        oa.aabb
            .min
            .z
            .total_cmp(&ob.aabb.min.z)
            .then(oa.instance_id.cmp(&ob.instance_id))
    });

    let mut objects = initial.objects.clone();
    let mut settled: Vec<usize> = Vec::with_capacity(order.len());
    for i in order {
        let rest = settled
            .iter()
            .filter(|&&j| stacks_on(&objects[i].aabb, &objects[j].aabb))
            .map(|&j| objects[j].aabb.max.z)
            .fold(table_z, f64::max);
        let dz = rest - objects[i].aabb.min.z;
        objects[i].translate_z(dz);
        // Pin the bottom exactly; translation can leave rounding residue.
        objects[i].aabb.min.z = rest;
        settled.push(i);
    }
    SceneState {
        table: initial.table,
        objects,
    }
}

/// Drops objects whose box center lies off the tabletop or whose top is below
/// it, then renumbers the survivors `0..n` in their original order.
pub fn remove_out_of_bounds(scene: &SceneState) -> SceneState {
    let t = &scene.table;
    let objects = scene
        .objects
        .iter()
        .filter(|o| {
            let c = o.aabb.center();
            t.contains_xy(c.x, c.y) && o.aabb.max.z >= t.height
        })
        .enumerate()
        .map(|(i, o)| ObjectInstance {
            instance_id: i as u32,
            ..o.clone()
        })
        .collect();
    SceneState {
        table: *t,
        objects,
    }
}
