use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("OBJ parse error at line {line}: {message}")]
    ObjParse { line: usize, message: String },

    #[error("mesh has no triangles")]
    EmptyMesh,

    #[error("mesh `{0}` is not loaded")]
    UnknownMesh(String),

    #[error("mask dimensions differ: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (u32, u32),
        found: (u32, u32),
    },

    #[error("mask lists differ in length: {0} visible vs {1} occlusion")]
    LengthMismatch(usize, usize),

    #[error("RLE format error: {0}")]
    RleFormat(String),

    #[error("failed to load {record}: {message}")]
    Load { record: String, message: String },

    #[error("view (scene {scene}, view {view}) was already written")]
    DuplicateView { scene: u32, view: u32 },

    #[error(
        "image ids differ between ground truth and prediction \
         (missing from prediction: {missing_in_pred:?}, missing from ground truth: {missing_in_gt:?})"
    )]
    ImageIdMismatch {
        missing_in_pred: Vec<u64>,
        missing_in_gt: Vec<u64>,
    },

    #[error("no record for scene {scene}, view {view}")]
    MissingRecord { scene: u32, view: u32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Yaml(#[from] serde_yaml::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn load(record: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Load {
            record: record.into(),
            message: message.into(),
        }
    }
}
