//! Depth-buffered triangle rasterization of a scene from one viewpoint.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::geometry::Vec3;
use crate::mask::BitMask;
use crate::sampler::Viewpoint;
use crate::settler::SceneState;

use super::camera::{project_camera_point, CameraFrame, NEAR_PLANE};
use super::light::kelvin_to_rgb;
use super::mesh::MeshLibrary;

/// Instance-map value for pixels that see nothing.
pub const BACKGROUND_ID: u32 = u32::MAX;
/// Instance-map value for tabletop pixels.
pub const TABLE_ID: u32 = u32::MAX - 1;

/// Constant ambient term standing in for room and ceiling lighting.
pub const AMBIENT: f64 = 0.25;
/// Scales lux / m² into display units.
pub const EXPOSURE: f64 = 1e-4;

const TABLE_ALBEDO: [f64; 3] = [0.62, 0.48, 0.34];
const BACKGROUND_RGB: [u8; 3] = [40, 42, 48];

/// Per-pixel buffers for one render, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderOutput {
    pub width: u32,
    pub height: u32,
    pub instance_map: Vec<u32>,
    /// Camera-frame z in meters; 0 where the instance map is background.
    pub depth_map: Vec<f64>,
    pub color: Vec<[u8; 3]>,
}

impl RenderOutput {
    fn blank(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        RenderOutput {
            width,
            height,
            instance_map: vec![BACKGROUND_ID; n],
            depth_map: vec![f64::INFINITY; n],
            color: vec![BACKGROUND_RGB; n],
        }
    }

    pub fn instance_at(&self, x: u32, y: u32) -> u32 {
        self.instance_map[(y * self.width + x) as usize]
    }

    pub fn depth_at(&self, x: u32, y: u32) -> f64 {
        self.depth_map[(y * self.width + x) as usize]
    }

    /// Pixels whose nearest surface belongs to `id`.
    pub fn mask_of(&self, id: u32) -> BitMask {
        let mut m = BitMask::new(self.width, self.height);
        for (i, &v) in self.instance_map.iter().enumerate() {
            if v == id {
                m.set_index(i, true);
            }
        }
        m
    }

    /// Distinct ids present in the instance map, including reserved ids.
    pub fn ids(&self) -> BTreeSet<u32> {
        self.instance_map.iter().copied().collect()
    }

    fn write(&mut self, i: usize, depth: f64, id: u32, rgb: [u8; 3]) {
        let cur = self.depth_map[i];
        if depth < cur || (depth == cur && id < self.instance_map[i]) {
            self.depth_map[i] = depth;
            self.instance_map[i] = id;
            self.color[i] = rgb;
        }
    }

    fn finish(mut self) -> Self {
        for d in &mut self.depth_map {
            if d.is_infinite() {
                *d = 0.0;
            }
        }
        self
    }
}

struct Rasterizer<'a> {
    frame: CameraFrame,
    view: &'a Viewpoint,
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
    out: RenderOutput,
}

impl<'a> Rasterizer<'a> {
    fn new(view: &'a Viewpoint) -> Self {
        let k = &view.intrinsics;
        let (cx, cy) = k.principal_point();
        Rasterizer {
            frame: view.frame(),
            view,
            fx: k.fx(),
            fy: k.fy(),
            cx,
            cy,
            out: RenderOutput::blank(k.image_width, k.image_height),
        }
    }

    /// Flat Lambertian shade of a world-space triangle seen from this camera.
    fn shade(&self, tri: &[Vec3; 3], albedo: [f64; 3]) -> [u8; 3] {
        let centroid = (tri[0] + tri[1] + tri[2]) * (1.0 / 3.0);
        let mut n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
        if n.dot(self.frame.position - centroid) < 0.0 {
            n = -n;
        }
        let mut light = [AMBIENT; 3];
        for l in &self.view.lights {
            let to_light = l.position - centroid;
            let d2 = to_light.dot(to_light);
            if d2 <= 0.0 {
                continue;
            }
            let cos = n.dot(to_light) / d2.sqrt();
            if cos <= 0.0 {
                continue;
            }
            let irradiance = l.intensity * EXPOSURE * cos / d2;
            let tint = kelvin_to_rgb(l.temperature);
            for c in 0..3 {
                light[c] += tint[c] * irradiance;
            }
        }
        std::array::from_fn(|c| ((albedo[c] * light[c]).clamp(0.0, 1.0) * 255.0).round() as u8)
    }

    fn draw_triangle(&mut self, tri: &[Vec3; 3], id: u32, albedo: [f64; 3]) {
        let rgb = self.shade(tri, albedo);
        let cam = tri.map(|p| self.frame.to_camera(p));
        let poly = clip_near(&cam);
        if poly.len() < 3 {
            return;
        }
        let screen: Vec<[f64; 3]> = poly
            .iter()
            .filter_map(|&p| project_camera_point(p, self.fx, self.fy, self.cx, self.cy))
            .map(|pr| [pr.x, pr.y, pr.depth])
            .collect();
        if screen.len() != poly.len() {
            return;
        }
        for k in 1..screen.len() - 1 {
            self.fill([screen[0], screen[k], screen[k + 1]], id, rgb);
        }
    }

    /// Scan-converts a screen-space triangle, sampling pixel centers and
    /// interpolating 1/z for perspective-correct depth.
    fn fill(&mut self, p: [[f64; 3]; 3], id: u32, rgb: [u8; 3]) {
        let area = edge(p[0], p[1], p[2][0], p[2][1]);
        if area.abs() < 1e-12 || !area.is_finite() {
            return;
        }
        let (w, h) = (self.out.width as f64, self.out.height as f64);
        let min_x = p.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let max_x = p.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
        let min_y = p.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min);
        let max_y = p.iter().map(|v| v[1]).fold(f64::NEG_INFINITY, f64::max);
        let x0 = (min_x - 0.5).ceil().clamp(0.0, w) as u32;
        let x1 = ((max_x - 0.5).floor() + 1.0).clamp(0.0, w) as u32;
        let y0 = (min_y - 0.5).ceil().clamp(0.0, h) as u32;
        let y1 = ((max_y - 0.5).floor() + 1.0).clamp(0.0, h) as u32;
        let inv_z = [1.0 / p[0][2], 1.0 / p[1][2], 1.0 / p[2][2]];
        let width = self.out.width as usize;
        for py in y0..y1 {
            let sy = py as f64 + 0.5;
            for px in x0..x1 {
                let sx = px as f64 + 0.5;
                let e0 = edge(p[1], p[2], sx, sy);
                let e1 = edge(p[2], p[0], sx, sy);
                let e2 = edge(p[0], p[1], sx, sy);
                let inside = if area > 0.0 {
                    e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0
                } else {
                    e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0
                };
                if !inside {
                    continue;
                }
                let (b0, b1, b2) = (e0 / area, e1 / area, e2 / area);
                let depth = 1.0 / (b0 * inv_z[0] + b1 * inv_z[1] + b2 * inv_z[2]);
                self.out.write(py as usize * width + px as usize, depth, id, rgb);
            }
        }
    }
}

fn edge(a: [f64; 3], b: [f64; 3], x: f64, y: f64) -> f64 {
    (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0])
}

/// Clips a camera-space triangle against the near plane (Sutherland–Hodgman).
fn clip_near(tri: &[Vec3; 3]) -> Vec<Vec3> {
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let a = tri[i];
        let b = tri[(i + 1) % 3];
        let a_in = a.z > NEAR_PLANE;
        let b_in = b.z > NEAR_PLANE;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            // Nudge just inside so the projected vertex is valid.
            let target = NEAR_PLANE * (1.0 + 1e-9);
            let t = (target - a.z) / (b.z - a.z);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Renders the tabletop plus the objects whose instance ids are in
/// `visible_ids`. Each pixel takes the nearest surface; equal depths go to the
/// lower id. Triangles are double-sided.
pub fn rasterize(
    scene: &SceneState,
    view: &Viewpoint,
    visible_ids: &BTreeSet<u32>,
    meshes: &MeshLibrary,
) -> Result<RenderOutput> {
    let mut r = Rasterizer::new(view);

    let t = &scene.table;
    let (hw, hl, z) = (t.width / 2.0, t.length / 2.0, t.height);
    let corners = [
        Vec3::new(-hw, -hl, z),
        Vec3::new(hw, -hl, z),
        Vec3::new(hw, hl, z),
        Vec3::new(-hw, hl, z),
    ];
    r.draw_triangle(&[corners[0], corners[1], corners[2]], TABLE_ID, TABLE_ALBEDO);
    r.draw_triangle(&[corners[0], corners[2], corners[3]], TABLE_ID, TABLE_ALBEDO);

    for obj in scene.objects.iter().filter(|o| visible_ids.contains(&o.instance_id)) {
        let mesh = meshes.get(&obj.mesh_id)?;
        let world = mesh.transformed(&obj.pose);
        for tri in &mesh.triangles {
            let verts = tri.map(|i| world[i as usize]);
            r.draw_triangle(&verts, obj.instance_id, mesh.color);
        }
    }
    Ok(r.out.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Mesh;
    use crate::sampler::{CameraIntrinsics, Pose, TableSpec};
    use crate::settler::ObjectInstance;

    const CAM_Z: f64 = 3.0;

    fn intrinsics() -> CameraIntrinsics {
        CameraIntrinsics {
            focal_length: 1.88,
            horizontal_aperture: 2.63,
            vertical_aperture: 1.96,
            image_width: 640,
            image_height: 480,
        }
    }

    /// Camera straight above the origin, looking down.
    fn top_down() -> Viewpoint {
        Viewpoint {
            position: Vec3::new(0.0, 0.0, CAM_Z),
            look_target: Vec3::ZERO,
            intrinsics: intrinsics(),
            lights: vec![],
        }
    }

    fn lib() -> MeshLibrary {
        let mut l = MeshLibrary::new();
        l.insert("small", Mesh::cuboid(0.2, 0.2, 0.2));
        l.insert("wide", Mesh::cuboid(0.4, 0.4, 0.1));
        l
    }

    /// Objects centered on the camera axis at the given distances below it.
    fn scene(objects: &[(&str, f64)]) -> SceneState {
        let lib = lib();
        SceneState {
            table: TableSpec::new(1.0, 1.0, 0.5).unwrap(),
            objects: objects
                .iter()
                .enumerate()
                .map(|(i, &(mesh, dist))| {
                    let pose = Pose {
                        position: Vec3::new(0.0, 0.0, CAM_Z - dist),
                        orientation: [0.0; 3],
                    };
                    ObjectInstance::new(i as u32, mesh, pose, &lib).unwrap()
                })
                .collect(),
        }
    }

    fn all(s: &SceneState) -> BTreeSet<u32> {
        s.objects.iter().map(|o| o.instance_id).collect()
    }

    #[test]
    fn empty_visible_set_draws_only_the_table() {
        let s = scene(&[("small", 1.0)]);
        let out = rasterize(&s, &top_down(), &BTreeSet::new(), &lib()).unwrap();
        assert_eq!(out.ids(), BTreeSet::from([TABLE_ID, BACKGROUND_ID]));
        let (cx, cy) = (320, 240);
        assert_eq!(out.instance_at(cx, cy), TABLE_ID);
        assert!((out.depth_at(cx, cy) - (CAM_Z - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn cube_front_face_matches_pinhole_rectangle() {
        let s = scene(&[("small", 1.0)]);
        let k = intrinsics();
        let out = rasterize(&s, &top_down(), &all(&s), &lib()).unwrap();
        let mask = out.mask_of(0);
        let [x, y, w, h] = mask.bbox().unwrap();
        // Front face at z = 0.9 with half extent 0.1.
        let (u0, u1) = (320.0 - k.fx() * 0.1 / 0.9, 320.0 + k.fx() * 0.1 / 0.9);
        let (v0, v1) = (240.0 - k.fy() * 0.1 / 0.9, 240.0 + k.fy() * 0.1 / 0.9);
        assert!((x as f64 - u0).abs() <= 1.0, "{x} vs {u0}");
        assert!(((x + w) as f64 - u1).abs() <= 1.0);
        assert!((y as f64 - v0).abs() <= 1.0);
        assert!(((y + h) as f64 - v1).abs() <= 1.0);
        assert_eq!(mask.count(), u64::from(w) * u64::from(h));
        assert!((out.depth_at(320, 240) - 0.9).abs() < 1e-9);
    }

    #[test]
    fn nearer_object_wins_the_depth_test() {
        // The wide slab sits in front of the small cube.
        let s = scene(&[("small", 1.4), ("wide", 0.8)]);
        let out = rasterize(&s, &top_down(), &all(&s), &lib()).unwrap();
        let back = rasterize(&s, &top_down(), &BTreeSet::from([0]), &lib()).unwrap();
        let front = rasterize(&s, &top_down(), &BTreeSet::from([1]), &lib()).unwrap();
        let overlap = back.mask_of(0).and(&front.mask_of(1));
        assert!(overlap.count() > 0);
        assert!(overlap.iter_set().all(|(x, y)| out.instance_at(x, y) == 1));
        assert!(out.mask_of(0).is_empty());
    }

    #[test]
    fn isolated_render_is_a_superset_of_the_visible_region() {
        let s = scene(&[("small", 1.4), ("wide", 0.8)]);
        let full = rasterize(&s, &top_down(), &all(&s), &lib()).unwrap();
        for o in &s.objects {
            let iso = rasterize(&s, &top_down(), &BTreeSet::from([o.instance_id]), &lib()).unwrap();
            assert!(full.mask_of(o.instance_id).is_subset_of(&iso.mask_of(o.instance_id)));
        }
    }

    #[test]
    fn depth_is_zero_exactly_on_background() {
        let s = scene(&[("small", 1.0)]);
        let out = rasterize(&s, &top_down(), &all(&s), &lib()).unwrap();
        for (id, d) in out.instance_map.iter().zip(&out.depth_map) {
            assert_eq!(*id == BACKGROUND_ID, *d == 0.0);
        }
    }

    #[test]
    fn objects_behind_the_camera_are_not_drawn() {
        let s = scene(&[("small", -1.0)]);
        let out = rasterize(&s, &top_down(), &all(&s), &lib()).unwrap();
        assert!(out.mask_of(0).is_empty());
    }
}
