//! Mesh loading and software rendering of a viewpoint.

pub mod camera;
pub mod light;
pub mod mesh;
pub mod render;

pub use camera::{project_point, CameraFrame, Projection};
pub use light::kelvin_to_rgb;
pub use mesh::{parse_obj, Mesh, MeshLibrary};
pub use render::{rasterize, RenderOutput, BACKGROUND_ID, TABLE_ID};
