//! Dataset-level evaluation and report formatting.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{read_dataset, read_predictions, DatasetRecord};
use crate::error::{Error, Result};
use crate::mask::BitMask;

use super::hungarian::{hungarian_match, Matching};
use super::occlusion::{occlusion_cls, occlusion_order_accuracy_with};
use super::prf::{boundary_prf, default_dilation_radius, f_at_75, overlap_prf, Prf};

pub const MATCHING_NOTE: &str =
    "instances are matched once per image on visible masks; amodal and invisible scores reuse that matching";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Boundary tolerance in pixels; `None` uses 0.75% of the image diagonal.
    pub dilation_radius: Option<u32>,
}

/// Overlap, boundary and F@.75 scores for one mask kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MaskScores {
    pub overlap: Option<Prf>,
    pub boundary: Option<Prf>,
    pub f_at_75: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageMetrics {
    pub image_id: u64,
    pub n_gt: usize,
    pub n_pred: usize,
    pub n_matched: usize,
    pub dilation_radius: u32,
    pub amodal: MaskScores,
    /// Scored on occlusion masks.
    pub invisible: MaskScores,
    pub visible: MaskScores,
    pub acc_o: Option<f64>,
    pub f_o: Option<f64>,
    pub acc_oo: Option<f64>,
}

/// Unweighted means over the images where each value is defined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanScores {
    pub overlap: Option<Prf>,
    pub boundary: Option<Prf>,
    pub f_at_75: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeans {
    pub amodal: MeanScores,
    pub invisible: MeanScores,
    pub visible: MeanScores,
    pub acc_o: Option<f64>,
    pub f_o: Option<f64>,
    pub acc_oo: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub note: String,
    pub images: Vec<ImageMetrics>,
    pub mean: DatasetMeans,
}

fn masks<'a>(rec: &'a DatasetRecord, pick: impl Fn(&'a crate::dataset::ObjectRecord) -> &'a BitMask) -> Vec<BitMask> {
    rec.objects.iter().map(|o| pick(o).clone()).collect()
}

fn score_kind(m: &Matching, preds: &[BitMask], gts: &[BitMask], radius: u32) -> MaskScores {
    MaskScores {
        overlap: overlap_prf(m, preds, gts),
        boundary: boundary_prf(m, preds, gts, radius),
        f_at_75: f_at_75(m, preds, gts),
    }
}

fn check_dims(rec: &DatasetRecord, gt: &DatasetRecord) -> Result<()> {
    for o in &rec.objects {
        for m in [&o.visible, &o.amodal, &o.occlusion] {
            if m.dims() != (gt.width, gt.height) {
                return Err(Error::DimensionMismatch {
                    expected: (gt.width, gt.height),
                    found: m.dims(),
                });
            }
        }
    }
    Ok(())
}

pub fn evaluate_image(gt: &DatasetRecord, pred: &DatasetRecord, opts: &EvalOptions) -> Result<ImageMetrics> {
    check_dims(pred, gt)?;
    let radius = opts
        .dilation_radius
        .unwrap_or_else(|| default_dilation_radius(gt.width, gt.height));
    let (gv, ga, go) = (
        masks(gt, |o| &o.visible),
        masks(gt, |o| &o.amodal),
        masks(gt, |o| &o.occlusion),
    );
    let (pv, pa, po) = (
        masks(pred, |o| &o.visible),
        masks(pred, |o| &o.amodal),
        masks(pred, |o| &o.occlusion),
    );
    let matching = hungarian_match(&pv, &gv)?;
    let cls = occlusion_cls(&matching, &po, &go);
    Ok(ImageMetrics {
        image_id: gt.image_id,
        n_gt: gv.len(),
        n_pred: pv.len(),
        n_matched: matching.pairs.len(),
        dilation_radius: radius,
        amodal: score_kind(&matching, &pa, &ga, radius),
        invisible: score_kind(&matching, &po, &go, radius),
        visible: score_kind(&matching, &pv, &gv, radius),
        acc_o: cls.accuracy(),
        f_o: cls.f_measure(),
        acc_oo: occlusion_order_accuracy_with(&matching, &gv, &go, &pv, &po)?,
    })
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn mean_prf<'a>(values: impl Iterator<Item = &'a Option<Prf>> + Clone) -> Option<Prf> {
    Some(Prf {
        precision: mean(values.clone().map(|p| p.map(|p| p.precision)))?,
        recall: mean(values.clone().map(|p| p.map(|p| p.recall)))?,
        f_measure: mean(values.map(|p| p.map(|p| p.f_measure)))?,
    })
}

fn mean_kind(images: &[ImageMetrics], kind: impl Fn(&ImageMetrics) -> &MaskScores) -> MeanScores {
    MeanScores {
        overlap: mean_prf(images.iter().map(|i| &kind(i).overlap)),
        boundary: mean_prf(images.iter().map(|i| &kind(i).boundary)),
        f_at_75: mean(images.iter().map(|i| kind(i).f_at_75)),
    }
}

/// Scores predictions against ground truth, image by image. Both sides must
/// cover exactly the same image ids.
pub fn evaluate_records(gt: &[DatasetRecord], pred: &[DatasetRecord], opts: &EvalOptions) -> Result<MetricsReport> {
    let gt_ids: BTreeSet<u64> = gt.iter().map(|r| r.image_id).collect();
    let pred_ids: BTreeSet<u64> = pred.iter().map(|r| r.image_id).collect();
    if gt_ids != pred_ids {
        return Err(Error::ImageIdMismatch {
            missing_in_pred: gt_ids.difference(&pred_ids).copied().collect(),
            missing_in_gt: pred_ids.difference(&gt_ids).copied().collect(),
        });
    }
    let mut gt_sorted: Vec<&DatasetRecord> = gt.iter().collect();
    gt_sorted.sort_by_key(|r| r.image_id);
    let images = gt_sorted
        .par_iter()
        .map(|g| {
            let p = pred
                .iter()
                .find(|p| p.image_id == g.image_id)
                .expect("ids checked above");
            evaluate_image(g, p, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = DatasetMeans {
        amodal: mean_kind(&images, |i| &i.amodal),
        invisible: mean_kind(&images, |i| &i.invisible),
        visible: mean_kind(&images, |i| &i.visible),
        acc_o: mean(images.iter().map(|i| i.acc_o)),
        f_o: mean(images.iter().map(|i| i.f_o)),
        acc_oo: mean(images.iter().map(|i| i.acc_oo)),
    };
    Ok(MetricsReport {
        note: MATCHING_NOTE.to_string(),
        images,
        mean,
    })
}

/// Loads a generated dataset and a prediction file and scores them.
pub fn evaluate_dataset(gt_root: &Path, pred_file: &Path, opts: &EvalOptions) -> Result<MetricsReport> {
    let gt = read_dataset(gt_root)?;
    let pred = read_predictions(pred_file)?;
    evaluate_records(&gt, &pred, opts)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

impl MetricsReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Summary table: amodal, invisible, occlusion, visible, then ACC_OO.
    pub fn summary_table(&self) -> String {
        let m = &self.mean;
        let kind = |k: &MeanScores| {
            [
                cell(k.overlap.map(|p| p.f_measure)),
                cell(k.boundary.map(|p| p.f_measure)),
                cell(k.f_at_75),
            ]
        };
        let header = [
            "Amodal OV", "Amodal BO", "Amodal F@.75", "Invis OV", "Invis BO", "Invis F@.75", "F_O", "ACC_O",
            "Visible OV", "Visible BO", "Visible F@.75", "ACC_OO",
        ];
        let mut values = Vec::new();
        values.extend(kind(&m.amodal));
        values.extend(kind(&m.invisible));
        values.push(cell(m.f_o));
        values.push(cell(m.acc_o));
        values.extend(kind(&m.visible));
        values.push(cell(m.acc_oo));
        let widths: Vec<usize> = header.iter().zip(&values).map(|(h, v)| h.len().max(v.len())).collect();
        let mut out = String::new();
        let line = |cells: Vec<String>| -> String {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        let _ = writeln!(out, "{}", line(header.iter().map(|s| s.to_string()).collect()));
        let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
        let _ = writeln!(out, "{}", line(values));
        out
    }

    /// Per-kind precision / recall / F breakdown.
    pub fn prf_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} | {:>6} {:>6} {:>6} | {:>6} {:>6} {:>6} | {:>6}",
            "mask", "OV P", "OV R", "OV F", "BO P", "BO R", "BO F", "F@.75"
        );
        for (name, k) in [
            ("amodal", &self.mean.amodal),
            ("invisible", &self.mean.invisible),
            ("visible", &self.mean.visible),
        ] {
            let p = |x: Option<Prf>, f: fn(Prf) -> f64| cell(x.map(f));
            let _ = writeln!(
                out,
                "{:<10} | {:>6} {:>6} {:>6} | {:>6} {:>6} {:>6} | {:>6}",
                name,
                p(k.overlap, |v| v.precision),
                p(k.overlap, |v| v.recall),
                p(k.overlap, |v| v.f_measure),
                p(k.boundary, |v| v.precision),
                p(k.boundary, |v| v.recall),
                p(k.boundary, |v| v.f_measure),
                cell(k.f_at_75),
            );
        }
        out
    }
}
