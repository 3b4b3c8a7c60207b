//! Look-at camera frames and pinhole projection.

use crate::geometry::Vec3;
use crate::sampler::Viewpoint;

/// Points closer than this along the optical axis are treated as behind the camera.
pub const NEAR_PLANE: f64 = 1e-4;

/// Distance from the vertical axis under which the world +z up reference is
/// replaced by +x.
const POLE_EPS: f64 = 1e-6;

/// Orthonormal camera basis: `right` is image +x, `down` is image +y,
/// `forward` is the optical axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraFrame {
    pub position: Vec3,
    pub right: Vec3,
    pub down: Vec3,
    pub forward: Vec3,
}

impl CameraFrame {
    pub fn look_at(position: Vec3, target: Vec3) -> Self {
        let forward = (target - position).normalized();
        let mut side = forward.cross(Vec3::Z);
        if side.norm() < POLE_EPS {
            side = forward.cross(Vec3::X);
        }
        let right = side.normalized();
        let down = forward.cross(right);
        CameraFrame {
            position,
            right,
            down,
            forward,
        }
    }

    /// World point expressed in camera coordinates (x right, y down, z forward).
    pub fn to_camera(&self, p: Vec3) -> Vec3 {
        let d = p - self.position;
        Vec3::new(d.dot(self.right), d.dot(self.down), d.dot(self.forward))
    }
}

/// Pixel coordinates and camera-frame depth of a projected point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub x: f64,
    pub y: f64,
    pub depth: f64,
}

/// Projects a camera-frame point. `None` when it is not in front of the near plane.
pub fn project_camera_point(p_cam: Vec3, fx: f64, fy: f64, cx: f64, cy: f64) -> Option<Projection> {
    if p_cam.z <= NEAR_PLANE {
        return None;
    }
    Some(Projection {
        x: fx * p_cam.x / p_cam.z + cx,
        y: fy * p_cam.y / p_cam.z + cy,
        depth: p_cam.z,
    })
}

/// Pinhole projection of a world point into `view`'s image.
/// `None` flags a point behind (or on) the near plane.
pub fn project_point(p_world: Vec3, view: &Viewpoint) -> Option<Projection> {
    let frame = view.frame();
    let k = &view.intrinsics;
    let (cx, cy) = k.principal_point();
    project_camera_point(frame.to_camera(p_world), k.fx(), k.fy(), cx, cy)
}
