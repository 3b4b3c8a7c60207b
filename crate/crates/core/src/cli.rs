//! The `generate`, `eval` and `inspect` subcommands.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a runtime failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use image::{Rgb, RgbImage};
use serde::{Deserialize, Serialize};

use crate::annotate::{build_oodag_with_ids, grasp_order, Layer, Ooam};
use crate::config::SceneConfig;
use crate::dataset::{read_dataset, scene_dir_name, view_stem, write_atomic, DatasetRecord};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_dataset, EvalOptions};
use crate::pipeline::{generate_dataset, GenerationSummary};
use crate::sampler::RNG_SCHEME;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "tabletop-amodal", version, about = "Synthetic tabletop amodal segmentation datasets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset from a YAML config.
    Generate {
        config: PathBuf,
        out: PathBuf,
        /// Worker threads; defaults to all cores. Output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Score a prediction file against a generated dataset.
    Eval {
        gt_root: PathBuf,
        pred_file: PathBuf,
        /// Boundary tolerance in pixels; defaults to 0.75% of the image diagonal.
        #[arg(long)]
        dilation_radius: Option<u32>,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Write mask overlays and the occlusion graph of one view.
    Inspect {
        root: PathBuf,
        scene: u32,
        view: u32,
        /// Output directory; defaults to `<root>/inspect`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Everything needed to rerun a generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub rng_scheme: String,
    pub master_seed: u64,
    pub config: SceneConfig,
    pub scenes: Vec<ManifestScene>,
    pub images: usize,
    pub annotations: usize,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestScene {
    pub scene_id: u32,
    pub sampled_objects: usize,
    pub kept_objects: usize,
    pub seconds: f64,
}

impl RunManifest {
    pub fn new(config: SceneConfig, summary: &GenerationSummary, wall_seconds: f64) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng_scheme: RNG_SCHEME.to_string(),
            master_seed: config.master_seed,
            config,
            scenes: summary
                .scenes
                .iter()
                .map(|s| ManifestScene {
                    scene_id: s.scene_id,
                    sampled_objects: s.sampled_objects,
                    kept_objects: s.kept_objects,
                    seconds: s.seconds,
                })
                .collect(),
            images: summary.images,
            annotations: summary.annotations,
            wall_seconds,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(msg) => {
            print!("{msg}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Runs a parsed command and returns its console output.
pub fn execute(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Generate { config, out, jobs } => cmd_generate(config, out, *jobs),
        Command::Eval {
            gt_root,
            pred_file,
            dilation_radius,
            out,
        } => cmd_eval(
            gt_root,
            pred_file,
            &EvalOptions {
                dilation_radius: *dilation_radius,
            },
            out,
        ),
        Command::Inspect { root, scene, view, out } => {
            let out = out.clone().unwrap_or_else(|| root.join("inspect"));
            cmd_inspect(root, *scene, *view, &out)
        }
    }
}

pub fn cmd_generate(config: &Path, out: &Path, jobs: Option<usize>) -> Result<String> {
    let start = Instant::now();
    let cfg = SceneConfig::from_yaml_file(config)?;
    let summary = generate_dataset(&cfg, out, jobs)?;
    let manifest = RunManifest::new(cfg, &summary, start.elapsed().as_secs_f64());
    write_atomic(&out.join(MANIFEST_FILE), &serde_json::to_vec_pretty(&manifest)?)?;
    Ok(format!(
        "wrote {} images and {} annotations to {}\n",
        summary.images,
        summary.annotations,
        out.display()
    ))
}

pub fn cmd_eval(gt_root: &Path, pred_file: &Path, opts: &EvalOptions, out: &Path) -> Result<String> {
    let report = evaluate_dataset(gt_root, pred_file, opts)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    write_atomic(out, report.to_json()?.as_bytes())?;
    Ok(format!(
        "{}\n{}\n{}\nreport written to {}\n",
        report.note,
        report.summary_table(),
        report.prf_table(),
        out.display()
    ))
}

fn layer_color(layer: Layer) -> &'static str {
    match layer {
        Layer::Top => "palegreen",
        Layer::Intermediate => "khaki",
        Layer::Bottom => "lightcoral",
    }
}

/// DOT rendering of the occlusion graph. Nodes are filled by layer and a
/// leading comment gives the grasp order, or `cyclic`.
pub fn oodag_dot(ooam: &Ooam, ids: &[u32], names: &[String]) -> String {
    let g = build_oodag_with_ids(ooam, ids);
    let mut s = String::new();
    match grasp_order(&g) {
        Ok(order) => {
            let order: Vec<String> = order.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "// grasp order: {}", order.join(" "));
        }
        Err(_) => s.push_str("// cyclic\n"),
    }
    s.push_str("digraph occlusion {\n  node [style=filled, shape=box];\n");
    for (k, &id) in ids.iter().enumerate() {
        let layer = g.layers[&id];
        let name = names.get(k).map(String::as_str).unwrap_or("");
        let _ = writeln!(
            s,
            "  n{id} [label=\"{id}: {}\", fillcolor={}];",
            name.replace('"', "'"),
            layer_color(layer)
        );
    }
    for (a, b) in &g.edges {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

fn instance_color(k: usize) -> [u8; 3] {
    const PALETTE: [[u8; 3]; 10] = [
        [230, 25, 75],
        [60, 180, 75],
        [255, 225, 25],
        [0, 130, 200],
        [245, 130, 48],
        [145, 30, 180],
        [70, 240, 240],
        [240, 50, 230],
        [210, 245, 60],
        [0, 128, 128],
    ];
    PALETTE[k % PALETTE.len()]
}

fn base_image(rec: &DatasetRecord) -> RgbImage {
    let loaded = rec
        .rgb_path
        .as_ref()
        .and_then(|p| image::open(p).ok())
        .map(|i| i.to_rgb8())
        .filter(|i| i.dimensions() == (rec.width, rec.height));
    let mut img = loaded.unwrap_or_else(|| RgbImage::new(rec.width, rec.height));
    for p in img.pixels_mut() {
        *p = Rgb(p.0.map(|c| c / 3));
    }
    img
}

fn blend(img: &mut RgbImage, x: u32, y: u32, color: [u8; 3], alpha: f64) {
    let p = img.get_pixel_mut(x, y);
    for (c, t) in p.0.iter_mut().zip(color) {
        *c = (f64::from(*c) * (1.0 - alpha) + f64::from(t) * alpha).round() as u8;
    }
}

fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `<stem>_{visible,amodal,occlusion,combined}.png` and `<stem>.dot`
/// for one view of a generated dataset.
pub fn cmd_inspect(root: &Path, scene: u32, view: u32, out: &Path) -> Result<String> {
    let records = read_dataset(root)?;
    let rec = records
        .iter()
        .find(|r| r.scene_id == scene && r.view_id == view)
        .ok_or(Error::MissingRecord { scene, view })?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let stem = format!("{}_{}", scene_dir_name(scene), view_stem(view));

    let mut written = Vec::new();
    for kind in ["visible", "amodal", "occlusion"] {
        let mut img = base_image(rec);
        for (k, o) in rec.objects.iter().enumerate() {
            let mask = match kind {
                "visible" => &o.visible,
                "amodal" => &o.amodal,
                _ => &o.occlusion,
            };
            for (x, y) in mask.iter_set() {
                blend(&mut img, x, y, instance_color(k), 0.6);
            }
        }
        let path = out.join(format!("{stem}_{kind}.png"));
        save_png(&img, &path)?;
        written.push(path);
    }
    // Visible pixels in the instance color, hidden extent in a lighter tint.
    let mut img = base_image(rec);
    for (k, o) in rec.objects.iter().enumerate() {
        let c = instance_color(k);
        for (x, y) in o.visible.iter_set() {
            blend(&mut img, x, y, c, 0.7);
        }
        for (x, y) in o.occlusion.iter_set() {
            blend(&mut img, x, y, c.map(|v| v / 2 + 127), 0.35);
        }
    }
    let path = out.join(format!("{stem}_combined.png"));
    save_png(&img, &path)?;
    written.push(path);

    let ooam = match &rec.ooam {
        Some(m) => m.clone(),
        None => Ooam::zeros(rec.objects.len()),
    };
    let ids: Vec<u32> = rec.objects.iter().map(|o| o.instance_id).collect();
    let names: Vec<String> = rec.objects.iter().map(|o| o.object_name.clone()).collect();
    let dot_path = out.join(format!("{stem}.dot"));
    write_atomic(&dot_path, oodag_dot(&ooam, &ids, &names).as_bytes())?;
    written.push(dot_path);

    let mut msg = String::new();
    for p in written {
        let _ = writeln!(msg, "wrote {}", p.display());
    }
    Ok(msg)
}
