//! Triangle meshes, the OBJ-subset reader and the built-in object catalog.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Aabb, Mat3, Vec3};
use crate::sampler::Pose;

/// Triangle mesh in object coordinates (meters) with one flat albedo.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    pub color: [f64; 3],
}

const DEFAULT_COLOR: [f64; 3] = [0.7, 0.7, 0.7];

impl Mesh {
    pub fn with_color(mut self, color: [f64; 3]) -> Self {
        self.color = color;
        self
    }

    /// Vertices after applying `pose` (rotation about the origin, then translation).
    pub fn transformed(&self, pose: &Pose) -> Vec<Vec3> {
        let [roll, pitch, yaw] = pose.orientation;
        let r = Mat3::from_roll_pitch_yaw(roll, pitch, yaw);
        self.vertices
            .iter()
            .map(|&v| r.apply(v) + pose.position)
            .collect()
    }

    pub fn world_aabb(&self, pose: &Pose) -> Aabb {
        Aabb::from_points(self.transformed(pose)).expect("mesh has vertices")
    }

    /// Axis-aligned box centered at the origin.
    pub fn cuboid(sx: f64, sy: f64, sz: f64) -> Mesh {
        let (hx, hy, hz) = (sx / 2.0, sy / 2.0, sz / 2.0);
        let vertices = (0..8)
            .map(|i| {
                Vec3::new(
                    if i & 1 == 0 { -hx } else { hx },
                    if i & 2 == 0 { -hy } else { hy },
                    if i & 4 == 0 { -hz } else { hz },
                )
            })
            .collect();
        let quads = [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ];
        let triangles = quads
            .iter()
            .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
            .collect();
        Mesh {
            vertices,
            triangles,
            color: DEFAULT_COLOR,
        }
    }

    /// Capped frustum about the z-axis, centered at the origin. Equal radii give a cylinder.
    pub fn frustum(r_bottom: f64, r_top: f64, height: f64, segments: u32) -> Mesh {
        let n = segments.max(3);
        let hz = height / 2.0;
        let mut vertices = Vec::with_capacity(2 * n as usize + 2);
        for (r, z) in [(r_bottom, -hz), (r_top, hz)] {
            for k in 0..n {
                let a = TAU * k as f64 / n as f64;
                vertices.push(Vec3::new(r * a.cos(), r * a.sin(), z));
            }
        }
        let bottom_c = vertices.len() as u32;
        vertices.push(Vec3::new(0.0, 0.0, -hz));
        let top_c = bottom_c + 1;
        vertices.push(Vec3::new(0.0, 0.0, hz));
        let mut triangles = Vec::with_capacity(4 * n as usize);
        for k in 0..n {
            let k1 = (k + 1) % n;
            triangles.push([k, k1, n + k1]);
            triangles.push([k, n + k1, n + k]);
            triangles.push([bottom_c, k1, k]);
            triangles.push([top_c, n + k, n + k1]);
        }
        Mesh {
            vertices,
            triangles,
            color: DEFAULT_COLOR,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::ObjParse {
        line,
        message: message.into(),
    }
}

/// Reads the `v` / `f` subset of Wavefront OBJ. Polygons are fan-triangulated;
/// 1-based and negative (relative) indices are accepted. Other directives and
/// `#` comments are ignored.
pub fn parse_obj(bytes: &[u8]) -> Result<Mesh> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(0, format!("not UTF-8: {e}")))?;
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut triangles = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<f64> = tokens
                    .take(3)
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(lineno, format!("bad vertex coordinate: {e}")))?;
                if coords.len() != 3 {
                    return Err(parse_err(lineno, "vertex needs three coordinates"));
                }
                let v = Vec3::new(coords[0], coords[1], coords[2]);
                if !v.is_finite() {
                    return Err(parse_err(lineno, "vertex coordinate is not finite"));
                }
                vertices.push(v);
            }
            Some("f") => {
                let idx: Vec<u32> = tokens
                    .map(|t| resolve_index(t, vertices.len(), lineno))
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(parse_err(lineno, "face needs at least three vertices"));
                }
                for k in 1..idx.len() - 1 {
                    triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    if triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    Ok(Mesh {
        vertices,
        triangles,
        color: DEFAULT_COLOR,
    })
}

fn resolve_index(token: &str, n_vertices: usize, line: usize) -> Result<u32> {
    let head = token.split('/').next().unwrap_or("");
    let raw: i64 = head
        .parse()
        .map_err(|_| parse_err(line, format!("bad face index `{token}`")))?;
    let resolved = match raw {
        0 => return Err(parse_err(line, "face index 0 is invalid")),
        r if r > 0 => r - 1,
        r => n_vertices as i64 + r,
    };
    if resolved < 0 || resolved >= n_vertices as i64 {
        return Err(parse_err(line, format!("face index {raw} out of range")));
    }
    Ok(resolved as u32)
}

/// Distinct, saturated flat colors assigned to catalog meshes in id order.
const PALETTE: [[f64; 3]; 10] = [
    [0.84, 0.15, 0.16],
    [0.12, 0.47, 0.71],
    [0.17, 0.63, 0.17],
    [1.00, 0.50, 0.05],
    [0.58, 0.40, 0.74],
    [0.55, 0.34, 0.29],
    [0.89, 0.47, 0.76],
    [0.74, 0.74, 0.13],
    [0.09, 0.75, 0.81],
    [0.50, 0.50, 0.50],
];

/// Meshes keyed by catalog id.
#[derive(Debug, Clone, Default)]
pub struct MeshLibrary {
    meshes: BTreeMap<String, Mesh>,
}

impl MeshLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, mesh: Mesh) {
        self.meshes.insert(id.into(), mesh);
    }

    pub fn get(&self, id: &str) -> Result<&Mesh> {
        self.meshes
            .get(id)
            .ok_or_else(|| Error::UnknownMesh(id.to_string()))
    }

    /// Catalog ids in sorted order.
    pub fn ids(&self) -> Vec<String> {
        self.meshes.keys().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.meshes.is_empty()
    }

    /// Household-scale primitives with real-world dimensions in meters.
    pub fn builtin() -> Self {
        let shapes: [(&str, Mesh); 10] = [
            ("block", Mesh::cuboid(0.05, 0.05, 0.05)),
            ("bowl", Mesh::frustum(0.045, 0.08, 0.06, 24)),
            ("cereal_box", Mesh::cuboid(0.19, 0.07, 0.27)),
            ("cracker_box", Mesh::cuboid(0.16, 0.06, 0.21)),
            ("cup", Mesh::frustum(0.03, 0.04, 0.09, 20)),
            ("mug", Mesh::frustum(0.04, 0.04, 0.095, 20)),
            ("mustard_bottle", Mesh::cuboid(0.095, 0.055, 0.19)),
            ("soup_can", Mesh::frustum(0.034, 0.034, 0.10, 20)),
            ("sugar_box", Mesh::cuboid(0.09, 0.04, 0.175)),
            ("tuna_can", Mesh::frustum(0.043, 0.043, 0.033, 20)),
        ];
        let mut lib = MeshLibrary::new();
        for (i, (id, mesh)) in shapes.into_iter().enumerate() {
            lib.insert(id, mesh.with_color(PALETTE[i % PALETTE.len()]));
        }
        lib
    }

    /// Loads every `*.obj` in `dir` (non-recursive). The file stem is the id.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj")) {
                paths.push(path);
            }
        }
        paths.sort();
        if paths.is_empty() {
            return Err(Error::Config(format!("no .obj meshes in {}", dir.display())));
        }
        let mut lib = MeshLibrary::new();
        for (i, path) in paths.iter().enumerate() {
            let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            let mesh = parse_obj(&bytes).map_err(|e| Error::load(path.display().to_string(), e.to_string()))?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            lib.insert(id, mesh.with_color(PALETTE[i % PALETTE.len()]));
        }
        Ok(lib)
    }
}
