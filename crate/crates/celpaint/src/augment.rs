//! Rule-breaking and label-preserving transformations, applied to single
//! images or aligned pairs, plus composition-pipeline validation.
//!
//! Every transform is inverse-mapped with nearest-neighbor sampling, so
//! two-color line art and flat color palettes survive untouched, and every
//! transform is a pure function of its spec: stochastic steps (elastic, gaps)
//! carry an explicit seed, and pipeline runs derive per-step seeds
//! hierarchically instead of sharing a generator.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::ABPair;
use crate::error::{Error, Result};
use crate::raster::{Raster, Rect, Rgb, WHITE};
use crate::seed::{derive_seed, seeded_rng, Fnv1a};

/// Which character class a pipeline is meant for.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    #[default]
    Flower,
    Creature,
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassTag::Flower => f.write_str("flower"),
            ClassTag::Creature => f.write_str("creature"),
        }
    }
}

/// Affine transform about the canvas center: mirror, then scale, then skew,
/// then rotate, then translate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AffineSpec {
    /// Translation in pixels (positive x moves content right, positive y down).
    pub translate: (f64, f64),
    /// Rotation in degrees.
    pub rotate: f64,
    /// Per-axis scale factors; must be positive.
    pub scale: (f64, f64),
    /// Horizontal shear in degrees.
    pub skew: f64,
    pub mirror_x: bool,
    pub mirror_y: bool,
    /// Color for regions exposed by the transform.
    pub fill: Rgb,
}

impl Default for AffineSpec {
    fn default() -> Self {
        AffineSpec {
            translate: (0.0, 0.0),
            rotate: 0.0,
            scale: (1.0, 1.0),
            skew: 0.0,
            mirror_x: false,
            mirror_y: false,
            fill: WHITE,
        }
    }
}

impl AffineSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale.0 > 0.0 && self.scale.1 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "affine scale must be positive, got ({}, {})",
                self.scale.0, self.scale.1
            )));
        }
        Ok(())
    }
}

/// Radially symmetric homeomorphism of the disk, forward map r -> r^p on the
/// normalized disk in which the canvas square is inscribed (half-diagonal 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialWarpSpec {
    pub exponent: f64,
}

impl RadialWarpSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.exponent > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "warp exponent must be > 0, got {}",
                self.exponent
            )));
        }
        Ok(())
    }
}

/// Elastic distortion: a per-pixel uniform random displacement field smoothed
/// by a Gaussian and scaled by `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElasticSpec {
    /// Displacement magnitude in pixels.
    pub alpha: f64,
    /// Gaussian smoothing standard deviation in pixels.
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ElasticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.alpha < 0.0 {
            return Err(Error::InvalidParameter("elastic alpha must be >= 0".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidParameter("elastic sigma must be > 0".into()));
        }
        Ok(())
    }
}

/// Seeded squiggle erasures: random-walk strokes painted in background white.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpec {
    pub stroke_count: usize,
    /// Square brush side in pixels.
    pub stroke_width: u32,
    /// Walk length in steps.
    pub stroke_length: u32,
    #[serde(default)]
    pub seed: u64,
}

impl GapSpec {
    pub fn validate(&self) -> Result<()> {
        if self.stroke_width == 0 || self.stroke_length == 0 {
            return Err(Error::InvalidParameter(
                "gap stroke width and length must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Viewport crop; with `resize_back` the crop is rescaled to the original
/// canvas size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CropSpec {
    pub rect: Rect,
    #[serde(default)]
    pub resize_back: bool,
}

impl CropSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rect.w == 0 || self.rect.h == 0 {
            return Err(Error::InvalidParameter("crop rect must be >= 1x1".into()));
        }
        Ok(())
    }
}

/// One transformation step, tagged for catalog files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    Affine(AffineSpec),
    RadialWarp(RadialWarpSpec),
    Elastic(ElasticSpec),
    Gaps(GapSpec),
    Crop(CropSpec),
}

impl Transform {
    pub fn kind(&self) -> TransformKind {
        match self {
            Transform::Affine(_) => TransformKind::Affine,
            Transform::RadialWarp(_) => TransformKind::RadialWarp,
            Transform::Elastic(_) => TransformKind::Elastic,
            Transform::Gaps(_) => TransformKind::Gaps,
            Transform::Crop(_) => TransformKind::Crop,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Transform::Affine(s) => s.validate(),
            Transform::RadialWarp(s) => s.validate(),
            Transform::Elastic(s) => s.validate(),
            Transform::Gaps(s) => s.validate(),
            Transform::Crop(s) => s.validate(),
        }
    }

    /// Clone with the seed of a stochastic step replaced; deterministic steps
    /// are returned unchanged.
    pub fn with_seed(&self, seed: u64) -> Transform {
        match self {
            Transform::Elastic(s) => Transform::Elastic(ElasticSpec { seed, ..s.clone() }),
            Transform::Gaps(s) => Transform::Gaps(GapSpec { seed, ..s.clone() }),
            other => other.clone(),
        }
    }

    pub fn apply(&self, img: &Raster) -> Result<Raster> {
        match self {
            Transform::Affine(s) => apply_affine(img, s),
            Transform::RadialWarp(s) => apply_radial_warp(img, s),
            Transform::Elastic(s) => apply_elastic(img, s),
            Transform::Gaps(s) => apply_gaps(img, s),
            Transform::Crop(s) => apply_crop(img, s),
        }
    }
}

/// Transform families, used for coverage tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Affine,
    RadialWarp,
    Elastic,
    Gaps,
    Crop,
}

impl std::fmt::Display for TransformKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TransformKind::Affine => "affine",
            TransformKind::RadialWarp => "radial_warp",
            TransformKind::Elastic => "elastic",
            TransformKind::Gaps => "gaps",
            TransformKind::Crop => "crop",
        };
        f.write_str(s)
    }
}

/// Provenance entry: the fully realized transform (seeds substituted), so a
/// pair can be rebuilt bit-exactly from its origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub transform: Transform,
}

// --- 3x3 homogeneous transforms (column-vector convention) ---

type Mat3 = [f64; 9];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            out[r * 3 + c] = (0..3).map(|k| a[r * 3 + k] * b[k * 3 + c]).sum();
        }
    }
    out
}

fn translation(tx: f64, ty: f64) -> Mat3 {
    [1.0, 0.0, tx, 0.0, 1.0, ty, 0.0, 0.0, 1.0]
}

fn rotation(deg: f64) -> Mat3 {
    let t = deg.to_radians();
    let (s, c) = t.sin_cos();
    [c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]
}

fn shear_x(deg: f64) -> Mat3 {
    [1.0, deg.to_radians().tan(), 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
}

fn scaling(sx: f64, sy: f64) -> Mat3 {
    [sx, 0.0, 0.0, 0.0, sy, 0.0, 0.0, 0.0, 1.0]
}

fn mirroring(mx: bool, my: bool) -> Mat3 {
    scaling(if mx { -1.0 } else { 1.0 }, if my { -1.0 } else { 1.0 })
}

/// Inverse-mapped nearest-neighbor resampling through `inv`, which maps
/// output coordinates to source coordinates.
fn resample_nn(img: &Raster, inv: &Mat3, fill: Rgb) -> Raster {
    let (w, h) = (img.width(), img.height());
    let mut out = Raster::filled(w, h, fill).expect("source dims are valid");
    for y in 0..h {
        for x in 0..w {
            let (fx, fy) = (f64::from(x), f64::from(y));
            let sx = inv[0] * fx + inv[1] * fy + inv[2];
            let sy = inv[3] * fx + inv[4] * fy + inv[5];
            let (rx, ry) = (sx.round(), sy.round());
            if rx >= 0.0 && ry >= 0.0 && rx < f64::from(w) && ry < f64::from(h) {
                out.set_pixel(x, y, img.pixel(rx as u32, ry as u32));
            }
        }
    }
    out
}

/// Applies an affine transform about the canvas center with nearest-neighbor
/// resampling; exposed regions take the fill color.
pub fn apply_affine(img: &Raster, spec: &AffineSpec) -> Result<Raster> {
    spec.validate()?;
    let cx = f64::from(img.width() - 1) / 2.0;
    let cy = f64::from(img.height() - 1) / 2.0;
    // Forward map is C·T·R·K·S·M·C⁻¹. The inverse is composed from exact
    // primitive inverses, so an identity spec resamples pixel-for-pixel.
    let mut inv = translation(cx, cy);
    inv = mat_mul(&inv, &mirroring(spec.mirror_x, spec.mirror_y));
    inv = mat_mul(&inv, &scaling(1.0 / spec.scale.0, 1.0 / spec.scale.1));
    inv = mat_mul(&inv, &shear_x(-spec.skew));
    inv = mat_mul(&inv, &rotation(-spec.rotate));
    inv = mat_mul(&inv, &translation(-spec.translate.0, -spec.translate.1));
    inv = mat_mul(&inv, &translation(-cx, -cy));
    Ok(resample_nn(img, &inv, spec.fill))
}

/// Applies the disk warp: the output pixel at normalized polar (r, θ) samples
/// the source at (r^(1/p), θ). The canvas square is inscribed in the unit
/// disk (half-diagonal 1), so r = 0 and r = 1 are fixed points; samples that
/// fall inside the disk but outside the square read as white background.
pub fn apply_radial_warp(img: &Raster, spec: &RadialWarpSpec) -> Result<Raster> {
    spec.validate()?;
    let (w, h) = (img.width(), img.height());
    let cx = f64::from(w - 1) / 2.0;
    let cy = f64::from(h - 1) / 2.0;
    let radius = (cx * cx + cy * cy).sqrt();
    let inv_p = 1.0 / spec.exponent;
    let mut out = Raster::filled(w, h, WHITE).expect("source dims are valid");
    for y in 0..h {
        for x in 0..w {
            let dx = f64::from(x) - cx;
            let dy = f64::from(y) - cy;
            let r = (dx * dx + dy * dy).sqrt() / radius;
            let (sx, sy) = if r == 0.0 {
                (cx, cy)
            } else {
                let scale = r.powf(inv_p) / r;
                (cx + dx * scale, cy + dy * scale)
            };
            let (rx, ry) = (sx.round(), sy.round());
            if rx >= 0.0 && ry >= 0.0 && rx < f64::from(w) && ry < f64::from(h) {
                out.set_pixel(x, y, img.pixel(rx as u32, ry as u32));
            }
        }
    }
    Ok(out)
}

/// Smooths a scalar field with a 1-D Gaussian along rows then columns. The
/// kernel has radius ceil(3σ) and is renormalized, including where the border
/// truncates it.
fn gaussian_smooth(field: &mut [f64], w: usize, h: usize, sigma: f64) {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut kernel = Vec::with_capacity((2 * radius + 1) as usize);
    for i in -radius..=radius {
        kernel.push((-(i as f64).powi(2) / (2.0 * sigma * sigma)).exp());
    }
    let ksum: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= ksum;
    }

    let mut tmp = vec![0.0; field.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            let mut weight = 0.0;
            for (ki, &kv) in kernel.iter().enumerate() {
                let sx = x as i64 + ki as i64 - radius;
                if sx >= 0 && sx < w as i64 {
                    acc += kv * field[y * w + sx as usize];
                    weight += kv;
                }
            }
            tmp[y * w + x] = acc / weight;
        }
    }
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            let mut weight = 0.0;
            for (ki, &kv) in kernel.iter().enumerate() {
                let sy = y as i64 + ki as i64 - radius;
                if sy >= 0 && sy < h as i64 {
                    acc += kv * tmp[sy as usize * w + x];
                    weight += kv;
                }
            }
            field[y * w + x] = acc / weight;
        }
    }
}

/// Elastic distortion: inverse-samples through a smoothed random displacement
/// field. Deterministic for a fixed spec; `alpha = 0` is an exact identity.
pub fn apply_elastic(img: &Raster, spec: &ElasticSpec) -> Result<Raster> {
    spec.validate()?;
    if spec.alpha == 0.0 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut rng = seeded_rng(spec.seed);
    let mut dx: Vec<f64> = (0..w * h).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut dy: Vec<f64> = (0..w * h).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    gaussian_smooth(&mut dx, w, h, spec.sigma);
    gaussian_smooth(&mut dy, w, h, spec.sigma);

    let mut out = img.clone();
    let max_x = (w - 1) as f64;
    let max_y = (h - 1) as f64;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let sx = (x as f64 + spec.alpha * dx[i]).round().clamp(0.0, max_x);
            let sy = (y as f64 + spec.alpha * dy[i]).round().clamp(0.0, max_y);
            out.set_pixel(x as u32, y as u32, img.pixel(sx as u32, sy as u32));
        }
    }
    Ok(out)
}

fn stamp_white(img: &mut Raster, x: i64, y: i64, width: u32) {
    let half = i64::from(width) / 2;
    for by in 0..i64::from(width) {
        for bx in 0..i64::from(width) {
            let px = x + bx - half;
            let py = y + by - half;
            if px >= 0 && py >= 0 && px < i64::from(img.width()) && py < i64::from(img.height()) {
                img.set_pixel(px as u32, py as u32, WHITE);
            }
        }
    }
}

const WALK_DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Erases seeded squiggle strokes: lattice random walks with momentum (80%
/// continue straight, otherwise turn), stamped with a square brush in
/// background white. Never adds ink.
pub fn apply_gaps(img: &Raster, spec: &GapSpec) -> Result<Raster> {
    spec.validate()?;
    let mut out = img.clone();
    let mut rng = seeded_rng(spec.seed);
    for _ in 0..spec.stroke_count {
        let mut x = rng.gen_range(0..img.width()) as i64;
        let mut y = rng.gen_range(0..img.height()) as i64;
        let mut dir = rng.gen_range(0..4usize);
        for _ in 0..spec.stroke_length {
            stamp_white(&mut out, x, y, spec.stroke_width);
            let roll: f64 = rng.gen();
            if roll >= 0.8 {
                // Turn left or right, never reverse.
                dir = if roll < 0.9 { (dir + 1) % 4 } else { (dir + 3) % 4 };
            }
            x = (x + WALK_DIRS[dir].0).clamp(0, i64::from(img.width()) - 1);
            y = (y + WALK_DIRS[dir].1).clamp(0, i64::from(img.height()) - 1);
        }
    }
    Ok(out)
}

/// Extracts the crop rect; with `resize_back` the result is scaled up to the
/// original canvas with nearest-neighbor sampling.
pub fn apply_crop(img: &Raster, spec: &CropSpec) -> Result<Raster> {
    spec.validate()?;
    let r = spec.rect;
    if r.x + r.w > img.width() || r.y + r.h > img.height() {
        return Err(Error::CropOutOfBounds {
            x: r.x,
            y: r.y,
            w: r.w,
            h: r.h,
            cw: img.width(),
            ch: img.height(),
        });
    }
    let mut pixels = Vec::with_capacity((r.w as usize) * (r.h as usize));
    for y in r.y..r.y + r.h {
        for x in r.x..r.x + r.w {
            pixels.push(img.pixel(x, y));
        }
    }
    let cropped = Raster::from_pixels(r.w, r.h, pixels)?;
    if spec.resize_back {
        cropped.resize_nn(img.width(), img.height())
    } else {
        Ok(cropped)
    }
}

/// Applies one transform to both halves of a pair and extends its provenance.
///
/// Gap erasures are the deliberate exception: they touch only the line-art
/// half, pairing the damaged drawing with its intact colored version.
pub fn apply_to_pair(transform: &Transform, pair: &ABPair) -> Result<ABPair> {
    let a = transform.apply(&pair.a)?;
    let b = match transform {
        Transform::Gaps(_) => pair.b.clone(),
        _ => transform.apply(&pair.b)?,
    };
    let mut provenance = pair.provenance.clone();
    provenance.push(TransformRecord {
        transform: transform.clone(),
    });
    Ok(ABPair {
        a,
        b,
        origin_id: pair.origin_id.clone(),
        provenance,
        class_tag: pair.class_tag,
    })
}

/// An ordered recipe of transform steps for one character class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub steps: Vec<Transform>,
    #[serde(default)]
    pub class_tag: ClassTag,
    #[serde(default)]
    pub master_seed: u64,
}

impl PipelineSpec {
    pub fn new(class_tag: ClassTag, master_seed: u64, steps: Vec<Transform>) -> Self {
        PipelineSpec {
            steps,
            class_tag,
            master_seed,
        }
    }
}

/// Applies a whole pipeline to a pair, realizing stochastic step seeds from
/// the hierarchical path (plan seed, pipeline master seed, origin index,
/// pipeline index, step index).
pub fn apply_pipeline_to_pair(
    pair: &ABPair,
    pipeline: &PipelineSpec,
    plan_seed: u64,
    origin_index: usize,
    pipeline_index: usize,
) -> Result<ABPair> {
    let mut out = pair.clone();
    for (step_index, step) in pipeline.steps.iter().enumerate() {
        let seed = derive_seed(
            plan_seed,
            &[
                pipeline.master_seed,
                origin_index as u64,
                pipeline_index as u64,
                step_index as u64,
            ],
        );
        let realized = step.with_seed(seed);
        out = apply_to_pair(&realized, &out)?;
    }
    Ok(out)
}

/// Structural defects in a single pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineViolation {
    /// A step sliced content at a canvas edge and a later translate/scale
    /// moved that cut edge strictly into the interior.
    CutEdgeMovedInward { cut_step: usize, move_step: usize },
    /// The pipeline reproduces its input bit-exactly on the probe image.
    IdentityPipeline,
    /// A step spec is invalid.
    InvalidStep { step: usize, reason: String },
}

impl std::fmt::Display for PipelineViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineViolation::CutEdgeMovedInward { cut_step, move_step } => write!(
                f,
                "cut edge from step {cut_step} moved inward by step {move_step}"
            ),
            PipelineViolation::IdentityPipeline => {
                f.write_str("pipeline is an identity (duplicate of the original)")
            }
            PipelineViolation::InvalidStep { step, reason } => {
                write!(f, "step {step} invalid: {reason}")
            }
        }
    }
}

/// Catalog-level defects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogViolation {
    Pipeline {
        pipeline: usize,
        violation: PipelineViolation,
    },
    /// Two pipelines produce identical output on the probe image (commuting
    /// or otherwise equivalent compositions).
    DuplicatePipelines { first: usize, second: usize },
}

impl std::fmt::Display for CatalogViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatalogViolation::Pipeline {
                pipeline,
                violation,
            } => write!(f, "pipeline {pipeline}: {violation}"),
            CatalogViolation::DuplicatePipelines { first, second } => write!(
                f,
                "pipelines {first} and {second} produce identical output on the probe image"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CutSides {
    left: bool,
    right: bool,
    top: bool,
    bottom: bool,
}

impl CutSides {
    fn none() -> Self {
        CutSides {
            left: false,
            right: false,
            top: false,
            bottom: false,
        }
    }
    fn any(&self) -> bool {
        self.left || self.right || self.top || self.bottom
    }
}

/// Canvas assumed by the structural cut-edge analysis and the probe image.
pub const PROBE_CANVAS: u32 = 400;
const PROBE_SEED: u64 = 0x70726f6265;

/// Deterministic, symmetry-free probe image used for duplicate detection.
pub fn probe_image() -> Raster {
    let mut rng = seeded_rng(PROBE_SEED);
    let pixels = (0..(PROBE_CANVAS as usize).pow(2))
        .map(|_| {
            if rng.gen::<u8>() < 128 {
                crate::raster::BLACK
            } else {
                WHITE
            }
        })
        .collect();
    Raster::from_pixels(PROBE_CANVAS, PROBE_CANVAS, pixels).expect("probe dims are valid")
}

pub(crate) fn hash_raster(img: &Raster) -> u64 {
    let mut h = Fnv1a::new();
    h.update(&img.to_bytes());
    h.finish()
}

/// Runs a pipeline on the probe image with seeds realized from the pipeline's
/// own master seed, and returns the output hash.
fn probe_hash(pipeline: &PipelineSpec, probe: &Raster) -> Result<u64> {
    let mut img = probe.clone();
    for (i, step) in pipeline.steps.iter().enumerate() {
        let realized = step.with_seed(derive_seed(pipeline.master_seed, &[i as u64]));
        img = realized.apply(&img)?;
    }
    Ok(hash_raster(&img))
}

/// Structural and probe-based validation of a single pipeline.
///
/// Rejects compositions that slice content at a canvas edge and later move
/// the cut edge strictly interior, and flags pipelines that reproduce their
/// input exactly.
pub fn validate_pipeline(pipeline: &PipelineSpec) -> Vec<PipelineViolation> {
    let mut violations = Vec::new();
    for (i, step) in pipeline.steps.iter().enumerate() {
        if let Err(e) = step.validate() {
            violations.push(PipelineViolation::InvalidStep {
                step: i,
                reason: e.to_string(),
            });
        }
    }
    if !violations.is_empty() {
        return violations;
    }

    let mut cut = CutSides::none();
    let mut cut_step = 0usize;
    for (i, step) in pipeline.steps.iter().enumerate() {
        match step {
            Transform::Crop(spec) => {
                // Sides where the rect slices strictly inside the canvas.
                if spec.rect.x > 0 {
                    cut.left = true;
                }
                if spec.rect.y > 0 {
                    cut.top = true;
                }
                if spec.rect.x + spec.rect.w < PROBE_CANVAS {
                    cut.right = true;
                }
                if spec.rect.y + spec.rect.h < PROBE_CANVAS {
                    cut.bottom = true;
                }
                if cut.any() {
                    cut_step = i;
                }
            }
            Transform::Affine(spec) => {
                let (tx, ty) = spec.translate;
                let (sx, sy) = spec.scale;
                // A translate/shrink that pulls an existing cut edge interior.
                let moved = (tx > 0.0 && cut.left)
                    || (tx < 0.0 && cut.right)
                    || (ty > 0.0 && cut.top)
                    || (ty < 0.0 && cut.bottom)
                    || (sx < 1.0 && (cut.left || cut.right))
                    || (sy < 1.0 && (cut.top || cut.bottom));
                if moved {
                    violations.push(PipelineViolation::CutEdgeMovedInward {
                        cut_step,
                        move_step: i,
                    });
                }
                // Mirrors relocate cut sides.
                if spec.mirror_x {
                    std::mem::swap(&mut cut.left, &mut cut.right);
                }
                if spec.mirror_y {
                    std::mem::swap(&mut cut.top, &mut cut.bottom);
                }
                // Content pushed off-canvas or grown past the canvas is
                // itself sliced at the edge it leaves through.
                if tx > 0.0 {
                    cut.right = true;
                    cut_step = i;
                } else if tx < 0.0 {
                    cut.left = true;
                    cut_step = i;
                }
                if ty > 0.0 {
                    cut.bottom = true;
                    cut_step = i;
                } else if ty < 0.0 {
                    cut.top = true;
                    cut_step = i;
                }
                if sx > 1.0 {
                    cut.left = true;
                    cut.right = true;
                    cut_step = i;
                }
                if sy > 1.0 {
                    cut.top = true;
                    cut.bottom = true;
                    cut_step = i;
                }
            }
            _ => {}
        }
    }

    if violations.is_empty() {
        let probe = probe_image();
        if let Ok(h) = probe_hash(pipeline, &probe) {
            if h == hash_raster(&probe) {
                violations.push(PipelineViolation::IdentityPipeline);
            }
        }
    }
    violations
}

/// Validates every pipeline in a catalog and flags pairs with identical probe
/// output (the commuting-composition duplicate trap).
pub fn validate_catalog(catalog: &[PipelineSpec]) -> Vec<CatalogViolation> {
    let mut violations = Vec::new();
    for (i, p) in catalog.iter().enumerate() {
        for v in validate_pipeline(p) {
            violations.push(CatalogViolation::Pipeline {
                pipeline: i,
                violation: v,
            });
        }
    }
    let probe = probe_image();
    let hashes: Vec<Option<u64>> = catalog
        .iter()
        .map(|p| probe_hash(p, &probe).ok())
        .collect();
    for i in 0..hashes.len() {
        for j in i + 1..hashes.len() {
            if let (Some(a), Some(b)) = (hashes[i], hashes[j]) {
                if a == b {
                    violations.push(CatalogViolation::DuplicatePipelines {
                        first: i,
                        second: j,
                    });
                }
            }
        }
    }
    violations
}

fn affine(f: impl FnOnce(&mut AffineSpec)) -> Transform {
    let mut spec = AffineSpec::default();
    f(&mut spec);
    Transform::Affine(spec)
}

/// Stock flower-class catalog: affines, disk warps, elastics, erasures and a
/// centered crop. Warps stay flower-only; they mangle creatures.
pub fn default_flower_catalog() -> Vec<PipelineSpec> {
    use Transform as T;
    let p = |seed: u64, steps: Vec<Transform>| PipelineSpec::new(ClassTag::Flower, seed, steps);
    vec![
        p(101, vec![affine(|s| s.rotate = 15.0)]),
        p(102, vec![affine(|s| s.rotate = -25.0)]),
        p(103, vec![affine(|s| s.mirror_x = true)]),
        p(104, vec![affine(|s| s.translate = (30.0, -20.0))]),
        p(105, vec![affine(|s| s.scale = (0.8, 0.8))]),
        p(
            106,
            vec![affine(|s| {
                s.skew = 12.0;
                s.rotate = 5.0;
            })],
        ),
        p(107, vec![T::RadialWarp(RadialWarpSpec { exponent: 3.0 })]),
        p(108, vec![T::RadialWarp(RadialWarpSpec { exponent: 2.0 })]),
        p(
            109,
            vec![
                T::RadialWarp(RadialWarpSpec { exponent: 3.0 }),
                affine(|s| s.mirror_x = true),
            ],
        ),
        p(
            110,
            vec![T::Elastic(ElasticSpec {
                alpha: 8.0,
                sigma: 4.0,
                seed: 0,
            })],
        ),
        p(
            111,
            vec![T::Elastic(ElasticSpec {
                alpha: 12.0,
                sigma: 6.0,
                seed: 0,
            })],
        ),
        p(
            112,
            vec![T::Gaps(GapSpec {
                stroke_count: 3,
                stroke_width: 3,
                stroke_length: 60,
                seed: 0,
            })],
        ),
        p(
            113,
            vec![T::Gaps(GapSpec {
                stroke_count: 1,
                stroke_width: 5,
                stroke_length: 120,
                seed: 0,
            })],
        ),
        p(
            114,
            vec![affine(|s| s.mirror_y = true), affine(|s| s.rotate = 10.0)],
        ),
        p(
            115,
            vec![T::Crop(CropSpec {
                rect: Rect {
                    x: 40,
                    y: 40,
                    w: 320,
                    h: 320,
                },
                resize_back: true,
            })],
        ),
        p(
            116,
            vec![
                T::Elastic(ElasticSpec {
                    alpha: 8.0,
                    sigma: 4.0,
                    seed: 0,
                }),
                affine(|s| s.mirror_x = true),
            ],
        ),
    ]
}

/// Stock creature-class catalog: no disk warps.
pub fn default_creature_catalog() -> Vec<PipelineSpec> {
    use Transform as T;
    let p = |seed: u64, steps: Vec<Transform>| PipelineSpec::new(ClassTag::Creature, seed, steps);
    vec![
        p(201, vec![affine(|s| s.rotate = 12.0)]),
        p(202, vec![affine(|s| s.rotate = -18.0)]),
        p(203, vec![affine(|s| s.mirror_x = true)]),
        p(204, vec![affine(|s| s.mirror_y = true)]),
        p(205, vec![affine(|s| s.translate = (-25.0, 15.0))]),
        p(206, vec![affine(|s| s.scale = (0.85, 0.85))]),
        p(207, vec![affine(|s| s.skew = -10.0)]),
        p(
            208,
            vec![affine(|s| {
                s.mirror_x = true;
                s.rotate = 8.0;
            })],
        ),
        p(
            209,
            vec![T::Elastic(ElasticSpec {
                alpha: 8.0,
                sigma: 4.0,
                seed: 0,
            })],
        ),
        p(
            210,
            vec![T::Elastic(ElasticSpec {
                alpha: 12.0,
                sigma: 6.0,
                seed: 0,
            })],
        ),
        p(
            211,
            vec![
                T::Elastic(ElasticSpec {
                    alpha: 6.0,
                    sigma: 5.0,
                    seed: 0,
                }),
                affine(|s| s.rotate = -8.0),
            ],
        ),
        p(
            212,
            vec![T::Gaps(GapSpec {
                stroke_count: 3,
                stroke_width: 3,
                stroke_length: 60,
                seed: 0,
            })],
        ),
        p(
            213,
            vec![T::Gaps(GapSpec {
                stroke_count: 2,
                stroke_width: 5,
                stroke_length: 90,
                seed: 0,
            })],
        ),
        p(
            214,
            vec![T::Crop(CropSpec {
                rect: Rect {
                    x: 40,
                    y: 40,
                    w: 320,
                    h: 320,
                },
                resize_back: true,
            })],
        ),
        p(
            215,
            vec![T::Crop(CropSpec {
                rect: Rect {
                    x: 0,
                    y: 0,
                    w: 300,
                    h: 300,
                },
                resize_back: true,
            })],
        ),
        p(
            216,
            vec![
                affine(|s| s.mirror_x = true),
                T::Elastic(ElasticSpec {
                    alpha: 8.0,
                    sigma: 4.0,
                    seed: 0,
                }),
            ],
        ),
    ]
}
