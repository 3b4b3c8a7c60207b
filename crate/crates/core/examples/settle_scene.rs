//! Drops a random pile of objects onto a table and reports where each one
//! came to rest.
//!
//!     cargo run --example settle_scene

use tabletop_amodal::pipeline::sample_scene;
use tabletop_amodal::raster::MeshLibrary;
use tabletop_amodal::sampler::RngStreams;
use tabletop_amodal::settler::{remove_out_of_bounds, settle_scene};
use tabletop_amodal::SceneConfig;

fn main() -> tabletop_amodal::Result<()> {
    let cfg = SceneConfig {
        n_lower: 12,
        n_upper: 12,
        master_seed: 3,
        ..SceneConfig::default()
    };
    let meshes = MeshLibrary::builtin();
    let initial = sample_scene(&cfg, &RngStreams::new(cfg.master_seed), 0, &meshes)?;
    let settled = settle_scene(&initial);
    let kept = remove_out_of_bounds(&settled);

    println!("table top at z = {:.3} m", settled.table.height);
    for (before, after) in initial.objects.iter().zip(&settled.objects) {
        println!(
            "#{:<2} {:<12} bottom {:.3} -> {:.3} m",
            after.instance_id, after.mesh_id, before.aabb.min.z, after.aabb.min.z
        );
    }
    println!(
        "{} of {} objects remain on the table",
        kept.objects.len(),
        initial.objects.len()
    );
    Ok(())
}
