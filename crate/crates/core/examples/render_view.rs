//! Renders one view of a settled scene and saves the color image, a
//! false-color instance map and the depth map as PNGs.
//!
//!     cargo run --example render_view -- [out_dir]

use std::path::PathBuf;

use image::{ImageBuffer, Luma, Rgb, RgbImage};
use tabletop_amodal::dataset::depth_to_millimeters;
use tabletop_amodal::pipeline::build_scene;
use tabletop_amodal::raster::{rasterize, MeshLibrary, BACKGROUND_ID, TABLE_ID};
use tabletop_amodal::sampler::{sample_viewpoint, RngStreams};
use tabletop_amodal::SceneConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "render_view_out".into()));
    std::fs::create_dir_all(&out)?;

    let cfg = SceneConfig {
        n_lower: 8,
        n_upper: 8,
        l_lower: 2,
        master_seed: 11,
        ..SceneConfig::default()
    };
    let meshes = MeshLibrary::builtin();
    let streams = RngStreams::new(cfg.master_seed);
    let scene = build_scene(&cfg, &streams, 0, &meshes)?;
    let view = sample_viewpoint(&scene.table, &cfg, &mut streams.view(0, 0));
    let ids = scene.objects.iter().map(|o| o.instance_id).collect();
    let r = rasterize(&scene, &view, &ids, &meshes)?;

    let rgb = RgbImage::from_fn(r.width, r.height, |x, y| Rgb(r.color[(y * r.width + x) as usize]));
    rgb.save(out.join("rgb.png"))?;

    let instances = RgbImage::from_fn(r.width, r.height, |x, y| match r.instance_at(x, y) {
        BACKGROUND_ID => Rgb([0, 0, 0]),
        TABLE_ID => Rgb([90, 90, 90]),
        id => {
            let h = id.wrapping_mul(2654435761);
            Rgb([(h >> 24) as u8 | 64, (h >> 16) as u8 | 64, (h >> 8) as u8 | 64])
        }
    });
    instances.save(out.join("instances.png"))?;

    let depth: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_fn(r.width, r.height, |x, y| {
        Luma([depth_to_millimeters(r.depth_at(x, y))])
    });
    depth.save(out.join("depth.png"))?;

    println!(
        "{} objects, {} visible; images in {}",
        scene.objects.len(),
        r.ids().iter().filter(|&&id| id < TABLE_ID).count(),
        out.display()
    );
    Ok(())
}
