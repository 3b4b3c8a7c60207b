//! End-to-end scene generation: sample, settle, render, annotate, write.
//!
//! Every random draw comes from a stream keyed by `(master_seed, scene)` or
//! `(master_seed, scene, view)`, so output does not depend on how scenes are
//! spread across threads.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annotate::capture_view;
use crate::config::SceneConfig;
use crate::dataset::{write_view, DatasetWriter, ViewEntry};
use crate::error::{Error, Result};
use crate::raster::MeshLibrary;
use crate::sampler::{
    sample_initial_pose, sample_object_set, sample_table, sample_viewpoint, RngStreams,
};
use crate::settler::{remove_out_of_bounds, settle_scene, ObjectInstance, SceneState};

/// Image id of a view: `scene * V + view`.
pub fn image_id(scene: u32, view: u32, v_views: u32) -> u64 {
    u64::from(scene) * u64::from(v_views) + u64::from(view)
}

/// Mesh catalog named by the config, or the built-in primitives.
pub fn load_catalog(cfg: &SceneConfig) -> Result<MeshLibrary> {
    let lib = match &cfg.catalog_dir {
        Some(dir) => MeshLibrary::load_dir(dir)?,
        None => MeshLibrary::builtin(),
    };
    if lib.is_empty() {
        return Err(Error::Config("object catalog is empty".into()));
    }
    Ok(lib)
}

/// Samples a table and objects for one scene and drops them in the drop box.
pub fn sample_scene(cfg: &SceneConfig, streams: &RngStreams, scene: u32, meshes: &MeshLibrary) -> Result<SceneState> {
    let mut rng = streams.scene(scene);
    let table = sample_table(cfg, &mut rng)?;
    let names = sample_object_set(&meshes.ids(), cfg, &mut rng)?;
    let objects = names
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let pose = sample_initial_pose(&table, &mut rng);
            ObjectInstance::new(i as u32, name, pose, meshes)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SceneState { table, objects })
}

/// Sampled, settled and filtered scene, ready for rendering.
pub fn build_scene(cfg: &SceneConfig, streams: &RngStreams, scene: u32, meshes: &MeshLibrary) -> Result<SceneState> {
    let initial = sample_scene(cfg, streams, scene, meshes)?;
    Ok(remove_out_of_bounds(&settle_scene(&initial)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSummary {
    pub scene_id: u32,
    pub sampled_objects: usize,
    pub kept_objects: usize,
    pub annotated_per_view: Vec<usize>,
    pub seconds: f64,
}

/// Generates and writes every view of one scene under `root`.
pub fn generate_scene(
    cfg: &SceneConfig,
    streams: &RngStreams,
    scene: u32,
    meshes: &MeshLibrary,
    root: &Path,
) -> Result<(SceneSummary, Vec<ViewEntry>)> {
    let start = Instant::now();
    let initial = sample_scene(cfg, streams, scene, meshes)?;
    let state = remove_out_of_bounds(&settle_scene(&initial));
    let mut entries = Vec::with_capacity(cfg.v_views as usize);
    let mut annotated = Vec::with_capacity(cfg.v_views as usize);
    for view in 0..cfg.v_views {
        let mut rng = streams.view(scene, view);
        let viewpoint = sample_viewpoint(&state.table, cfg, &mut rng);
        let captured = capture_view(&state, &viewpoint, meshes)?;
        annotated.push(captured.annotations.len());
        let (entry, _) = write_view(root, scene, view, image_id(scene, view, cfg.v_views), &viewpoint, &captured)?;
        entries.push(entry);
    }
    let summary = SceneSummary {
        scene_id: scene,
        sampled_objects: initial.objects.len(),
        kept_objects: state.objects.len(),
        annotated_per_view: annotated,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((summary, entries))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub scenes: Vec<SceneSummary>,
    pub images: usize,
    pub annotations: usize,
}

/// Generates the whole dataset with `jobs` worker threads (`None` uses all
/// cores) and writes `annotations.json` once every scene is done.
pub fn generate_dataset(cfg: &SceneConfig, root: &Path, jobs: Option<usize>) -> Result<GenerationSummary> {
    cfg.validate()?;
    let meshes = load_catalog(cfg)?;
    let streams = RngStreams::new(cfg.master_seed);
    let mut writer = DatasetWriter::create(root)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results = pool.install(|| {
        (0..cfg.num_scenes)
            .into_par_iter()
            .map(|s| generate_scene(cfg, &streams, s, &meshes, writer.root()))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut scenes = Vec::with_capacity(results.len());
    let mut images = 0;
    let mut annotations = 0;
    for (summary, entries) in results {
        for e in entries {
            images += 1;
            annotations += e.annotations.len();
            writer.add(e)?;
        }
        scenes.push(summary);
    }
    writer.finish()?;
    Ok(GenerationSummary {
        scenes,
        images,
        annotations,
    })
}
