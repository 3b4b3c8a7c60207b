//! Generates a small dataset (2 scenes x 3 views) on disk.
//!
//!     cargo run --release --example generate_dataset -- [out_dir] [jobs]

use std::path::PathBuf;

use tabletop_amodal::dataset::ANNOTATIONS_FILE;
use tabletop_amodal::pipeline::generate_dataset;
use tabletop_amodal::SceneConfig;

fn main() -> tabletop_amodal::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "generated_dataset".into()));
    let jobs = args.next().and_then(|s| s.parse().ok());

    let cfg = SceneConfig::from_yaml_str(
        "num_scenes: 2\n\
         v_views: 3\n\
         n_upper: 12\n\
         master_seed: 42\n",
    )?;
    let summary = generate_dataset(&cfg, &out, jobs)?;
    for s in &summary.scenes {
        println!(
            "scene {}: {} sampled, {} on the table, annotated per view {:?}",
            s.scene_id, s.sampled_objects, s.kept_objects, s.annotated_per_view
        );
    }
    println!(
        "{} images, {} annotations -> {}",
        summary.images,
        summary.annotations,
        out.join(ANNOTATIONS_FILE).display()
    );
    Ok(())
}
