use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode label raster {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("cannot encode raster {path}: {reason}")]
    Encode { path: PathBuf, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("pixel ({x}, {y}) claimed by class {first} and class {second}")]
    Overlap { x: usize, y: usize, first: u16, second: u16 },

    #[error("pixel ({x}, {y}) outside {width}x{height} grid")]
    OutOfBounds { x: i64, y: i64, width: usize, height: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),

    #[error("rank-deficient polynomial system")]
    RankDeficient,

    #[error("curve leaves the representable coordinate range")]
    CurveOutOfRange,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("profile error: {0}")]
    Profile(String),

    #[error("dense and scribble sets differ: {}", describe_mismatch(missing_scribbles, missing_dense))]
    Mismatch { missing_scribbles: Vec<String>, missing_dense: Vec<String> },

    #[error("no source image for {0}")]
    MissingImage(PathBuf),

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

fn describe_mismatch(missing_scribbles: &[String], missing_dense: &[String]) -> String {
    let mut parts = Vec::new();
    if !missing_scribbles.is_empty() {
        parts.push(format!("no scribbles for {}", missing_scribbles.join(", ")));
    }
    if !missing_dense.is_empty() {
        parts.push(format!("no dense labels for {}", missing_dense.join(", ")));
    }
    parts.join("; ")
}
