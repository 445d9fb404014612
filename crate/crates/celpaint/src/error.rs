//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions {width}x{height}: {reason}")]
    InvalidDimensions {
        width: u32,
        height: u32,
        reason: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown component id {0}")]
    UnknownComponent(u32),

    #[error("labeling is missing component id {0}")]
    MissingLabel(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("crop rect ({x},{y}) {w}x{h} exceeds canvas {cw}x{ch}")]
    CropOutOfBounds {
        x: u32,
        y: u32,
        w: u32,
        h: u32,
        cw: u32,
        ch: u32,
    },

    #[error("pipeline validation failed: {0}")]
    InvalidPipeline(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("target count {target} is below the {seeds} available seed pairs")]
    TargetBelowSeeds { target: usize, seeds: usize },

    #[error(
        "catalogs exhausted at {produced} unique pairs, {shortfall} short of target {target}"
    )]
    CatalogExhausted {
        produced: usize,
        target: usize,
        shortfall: usize,
    },

    #[error("config error: {0}")]
    Config(String),

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
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn image(path: impl Into<PathBuf>, source: image::ImageError) -> Self {
        Error::Image {
            path: path.into(),
            source,
        }
    }
}
