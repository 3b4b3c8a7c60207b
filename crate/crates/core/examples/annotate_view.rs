//! Annotates one view: per-object visible / amodal / occlusion masks, the
//! occlusion order matrix, the graph layers and a grasp order.
//!
//!     cargo run --example annotate_view

use tabletop_amodal::annotate::{annotate_view, build_oodag_with_ids, grasp_order};
use tabletop_amodal::pipeline::build_scene;
use tabletop_amodal::raster::MeshLibrary;
use tabletop_amodal::sampler::{sample_viewpoint, RngStreams};
use tabletop_amodal::SceneConfig;

fn main() -> tabletop_amodal::Result<()> {
    let cfg = SceneConfig {
        n_lower: 10,
        n_upper: 10,
        master_seed: 5,
        ..SceneConfig::default()
    };
    let meshes = MeshLibrary::builtin();
    let streams = RngStreams::new(cfg.master_seed);
    let scene = build_scene(&cfg, &streams, 0, &meshes)?;
    let view = sample_viewpoint(&scene.table, &cfg, &mut streams.view(0, 0));
    let (objects, ooam) = annotate_view(&scene, &view, &meshes)?;

    println!("{:>3} {:<12} {:>7} {:>7} {:>7} {:>6}", "id", "object", "visible", "amodal", "hidden", "rate");
    for a in &objects {
        println!(
            "{:>3} {:<12} {:>7} {:>7} {:>7} {:>6.3}",
            a.instance_id,
            a.object_name,
            a.visible.count(),
            a.amodal.count(),
            a.occlusion.count(),
            a.occlusion_rate
        );
    }

    println!("\nocclusion order matrix (row occludes column):");
    for row in ooam.rows() {
        println!("  {row:?}");
    }

    let ids: Vec<u32> = objects.iter().map(|a| a.instance_id).collect();
    let graph = build_oodag_with_ids(&ooam, &ids);
    for (id, layer) in &graph.layers {
        println!("object {id}: {layer:?}");
    }
    match grasp_order(&graph) {
        Ok(order) => println!("grasp order: {order:?}"),
        Err(e) => println!("no grasp order: {e}"),
    }
    Ok(())
}
