//! Rule-based flat coloring of cartoon line art, plus the machinery to grow a
//! handful of original drawings into a full paired (line art, colored) training
//! set for image-to-image translation models.
//!
//! The pipeline has five stages, one module each:
//!
//! - [`raster`] — RGB images, binarization into an ink mask, connected-component
//!   labeling and exact component geometry.
//! - [`rules`] — geometric part labeling (background / body / appendage / eye),
//!   conformance checking against the rule assumptions, and scheme colorization.
//! - [`augment`] — deterministic, seed-derived transforms (affine, radial disk
//!   warp, elastic distortion, squiggle erasures, crops) and pipeline validation.
//! - [`dataset`] — seed-pair creation, catalog expansion to a target count,
//!   exact-duplicate removal, and side-by-side composite export with a manifest.
//! - [`synthbench`] — procedural flower/creature generators with per-pixel
//!   ground truth, and the evaluation harness built on them.
//!
//! Everything is a pure function of its inputs and the seeds it is handed, so
//! whole dataset builds replay bit-exactly.

pub mod augment;
pub mod config;
pub mod dataset;
pub mod error;
pub mod raster;
pub mod rules;
pub mod seed;
pub mod synthbench;

pub use error::{Error, Result};
pub use raster::{Connectivity, Raster, Rgb};
pub use rules::{ColorScheme, PartLabel, RuleParams};
