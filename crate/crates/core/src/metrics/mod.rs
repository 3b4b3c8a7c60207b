//! Scoring predicted masks against ground truth.

pub mod hungarian;
pub mod occlusion;
pub mod prf;
pub mod report;

pub use hungarian::{hungarian_match, max_weight_assignment, Matching};
pub use occlusion::{occlusion_cls, occlusion_order_accuracy, ooam_agreement, OcclusionClsStats};
pub use prf::{boundary_prf, default_dilation_radius, f_at_75, overlap_prf, pair_f, Prf};
pub use report::{evaluate_dataset, evaluate_records, EvalOptions, ImageMetrics, MetricsReport};
