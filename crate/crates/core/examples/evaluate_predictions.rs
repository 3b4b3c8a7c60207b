//! Generates a tiny dataset, degrades its ground truth into a fake
//! prediction file, and scores it.
//!
//!     cargo run --release --example evaluate_predictions

use tabletop_amodal::dataset::{rle_decode, rle_encode, AnnotationsFile, ANNOTATIONS_FILE};
use tabletop_amodal::metrics::{evaluate_dataset, EvalOptions};
use tabletop_amodal::pipeline::generate_dataset;
use tabletop_amodal::SceneConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("tabletop_amodal_eval_example");
    let _ = std::fs::remove_dir_all(&dir);
    let cfg = SceneConfig::from_yaml_str("num_scenes: 1\nv_views: 2\nn_lower: 18\nn_upper: 24\nmaster_seed: 9\n")?;
    generate_dataset(&cfg, &dir, None)?;

    // Shrink every predicted visible mask by one pixel and drop the
    // occlusion masks, as a weak model might.
    let text = std::fs::read_to_string(dir.join(ANNOTATIONS_FILE))?;
    let mut doc: AnnotationsFile = serde_json::from_str(&text)?;
    for a in &mut doc.annotations {
        let eroded = rle_decode(&a.visible_mask)?.erode_once();
        a.visible_mask = rle_encode(&eroded);
        a.occlusion_mask = None;
        a.confidence = Some(0.9);
    }
    let pred = dir.join("predictions.json");
    std::fs::write(&pred, serde_json::to_vec(&doc)?)?;

    let report = evaluate_dataset(&dir, &pred, &EvalOptions::default())?;
    println!("{}\n", report.note);
    print!("{}", report.summary_table());
    println!();
    print!("{}", report.prf_table());
    Ok(())
}
