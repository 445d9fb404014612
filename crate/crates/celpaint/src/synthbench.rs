//! Procedural flower and creature line art with per-pixel ground truth, plus
//! the evaluation harness that makes the coloring rules measurable.
//!
//! Generated drawings stand in for hand-drawn originals: a flower is a center
//! disk with radially arranged petal ellipses, a creature is a body ellipse
//! with perimeter spikes and an interior eye. Truth is captured before any
//! damage (gaps, crops), so the harness can measure rule failures against the
//! drawing's intent.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::augment::{apply_crop, apply_gaps, ClassTag, CropSpec, GapSpec, TransformKind};
use crate::dataset::ABPair;
use crate::error::{Error, Result};
use crate::raster::{
    binarize, label_components, Raster, Rect, Rgb, BLACK,
    DEFAULT_BINARIZE_THRESHOLD, WHITE,
};
use crate::rules::{
    check_conformance, classify_parts, rule_color, ColorScheme, PartLabel, RuleParams,
};
use crate::seed::{derive_seed, seeded_rng};

/// Per-pixel intent label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthLabel {
    Line,
    Part(PartLabel),
}

/// Intent map aligned to a generated raster.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    width: u32,
    height: u32,
    labels: Vec<TruthLabel>,
}

impl GroundTruth {
    fn new(width: u32, height: u32) -> Self {
        GroundTruth {
            width,
            height,
            labels: vec![TruthLabel::Part(PartLabel::Background); (width * height) as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn label(&self, x: u32, y: u32) -> TruthLabel {
        self.labels[(y * self.width + x) as usize]
    }

    #[inline]
    fn set(&mut self, x: u32, y: u32, label: TruthLabel) {
        self.labels[(y * self.width + x) as usize] = label;
    }

    pub fn count(&self, label: TruthLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Renders the intended coloring under a scheme; the oracle the rule
    /// pipeline is measured against.
    pub fn oracle_coloring(&self, scheme: &ColorScheme) -> Raster {
        let pixels = self
            .labels
            .iter()
            .map(|l| match l {
                TruthLabel::Line => scheme.line,
                TruthLabel::Part(p) => scheme.color_for(*p),
            })
            .collect();
        Raster::from_pixels(self.width, self.height, pixels).expect("truth dims are valid")
    }

    /// Crop plus optional resize with the same nearest-neighbor mapping the
    /// raster path uses, keeping truth aligned to the damaged art.
    fn crop(&self, spec: &CropSpec) -> Result<GroundTruth> {
        let r = spec.rect;
        if r.x + r.w > self.width || r.y + r.h > self.height {
            return Err(Error::CropOutOfBounds {
                x: r.x,
                y: r.y,
                w: r.w,
                h: r.h,
                cw: self.width,
                ch: self.height,
            });
        }
        let mut cropped = GroundTruth::new(r.w, r.h);
        for y in 0..r.h {
            for x in 0..r.w {
                cropped.set(x, y, self.label(r.x + x, r.y + y));
            }
        }
        if !spec.resize_back {
            return Ok(cropped);
        }
        let (tw, th) = (self.width, self.height);
        let mut out = GroundTruth::new(tw, th);
        for y in 0..th {
            let sy = ((f64::from(y) + 0.5) * f64::from(r.h) / f64::from(th) - 0.5)
                .round()
                .clamp(0.0, f64::from(r.h - 1)) as u32;
            for x in 0..tw {
                let sx = ((f64::from(x) + 0.5) * f64::from(r.w) / f64::from(tw) - 0.5)
                    .round()
                    .clamp(0.0, f64::from(r.w - 1)) as u32;
                out.set(x, y, cropped.label(sx, sy));
            }
        }
        Ok(out)
    }
}

/// A generated drawing with its intent map.
#[derive(Debug, Clone)]
pub struct Generated {
    pub art: Raster,
    pub truth: GroundTruth,
}

/// Flower generator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowerSpec {
    pub canvas: u32,
    pub center_radius: f64,
    pub petal_count: usize,
    /// Petal ellipse semi-axes (radial, tangential).
    pub petal_axes: (f64, f64),
    pub line_width: f64,
    /// Desired center/petal area ratio; overrides `center_radius` when set.
    pub daisy_ratio: Option<f64>,
    /// Squiggle erasures applied to the art after truth capture.
    pub gap: Option<GapSpec>,
    /// Viewport damage applied to art and truth after capture.
    pub crop: Option<CropSpec>,
    pub seed: u64,
}

impl Default for FlowerSpec {
    fn default() -> Self {
        FlowerSpec {
            canvas: 400,
            center_radius: 70.0,
            petal_count: 6,
            petal_axes: (45.0, 24.0),
            line_width: 2.0,
            daisy_ratio: None,
            gap: None,
            crop: None,
            seed: 0,
        }
    }
}

impl FlowerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.petal_count < 3 {
            return Err(Error::InvalidParameter(format!(
                "petal_count must be >= 3, got {}",
                self.petal_count
            )));
        }
        if self.line_width < 1.0 {
            return Err(Error::InvalidParameter("line_width must be >= 1".into()));
        }
        Ok(())
    }
}

/// Creature generator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreatureSpec {
    pub canvas: u32,
    /// Body ellipse semi-axes (horizontal, vertical).
    pub body_axes: (f64, f64),
    pub spike_count: usize,
    /// Spike triangle height in pixels.
    pub spike_size: f64,
    pub eye_radius: f64,
    /// Eye center offset from the body center.
    pub eye_offset: (f64, f64),
    pub line_width: f64,
    pub seed: u64,
}

impl Default for CreatureSpec {
    fn default() -> Self {
        CreatureSpec {
            canvas: 400,
            body_axes: (110.0, 75.0),
            spike_count: 7,
            spike_size: 38.0,
            eye_radius: 12.0,
            eye_offset: (35.0, -20.0),
            line_width: 2.0,
            seed: 0,
        }
    }
}

/// Signed distance estimate to an axis-aligned ellipse boundary via the
/// implicit gradient; negative inside.
fn ellipse_signed_dist(px: f64, py: f64, cx: f64, cy: f64, a: f64, b: f64) -> f64 {
    let u = (px - cx) / a;
    let v = (py - cy) / b;
    let f = u * u + v * v;
    let grad = 2.0 * ((u / a).powi(2) + (v / b).powi(2)).sqrt();
    if grad == 0.0 {
        return -a.min(b);
    }
    (f - 1.0) / grad
}

/// Signed distance estimate to a rotated ellipse: `dir` is the unit radial
/// axis, `tan` the unit tangential axis.
fn oriented_ellipse_signed_dist(
    px: f64,
    py: f64,
    cx: f64,
    cy: f64,
    dir: (f64, f64),
    a: f64,
    b: f64,
) -> f64 {
    let dx = px - cx;
    let dy = py - cy;
    let u = (dx * dir.0 + dy * dir.1) / a;
    let v = (-dx * dir.1 + dy * dir.0) / b;
    let f = u * u + v * v;
    let grad = 2.0 * ((u / a).powi(2) + (v / b).powi(2)).sqrt();
    if grad == 0.0 {
        return -a.min(b);
    }
    (f - 1.0) / grad
}

fn segment_distance(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let (vx, vy) = (bx - ax, by - ay);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - ax) * vx + (py - ay) * vy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (ax + t * vx, ay + t * vy);
    ((px - qx).powi(2) + (py - qy).powi(2)).sqrt()
}

fn point_in_triangle(px: f64, py: f64, t: &[(f64, f64); 3]) -> bool {
    let sign = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        (a.0 - c.0) * (b.1 - c.1) - (b.0 - c.0) * (a.1 - c.1)
    };
    let d1 = sign((px, py), t[0], t[1]);
    let d2 = sign((px, py), t[1], t[2]);
    let d3 = sign((px, py), t[2], t[0]);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}

/// Generates a flower: an outlined center disk plus radially arranged petal
/// ellipses, white interiors, deterministic per seed. Optional crop and gap
/// damage is applied after truth capture, so the truth keeps the intent.
pub fn gen_flower(spec: &FlowerSpec) -> Result<Generated> {
    spec.validate()?;
    let canvas = spec.canvas;
    let cx = f64::from(canvas - 1) / 2.0;
    let cy = f64::from(canvas - 1) / 2.0;
    let lw = spec.line_width;
    let (base_a, base_b) = spec.petal_axes;
    let cr = match spec.daisy_ratio {
        Some(ratio) => {
            if !(ratio > 0.0) {
                return Err(Error::InvalidParameter("daisy_ratio must be > 0".into()));
            }
            (ratio * base_a * base_b).sqrt()
        }
        None => spec.center_radius,
    };
    if cr < lw {
        return Err(Error::InvalidGeometry(format!(
            "center radius {cr:.1} is thinner than the line width"
        )));
    }

    let mut rng = seeded_rng(spec.seed);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU / spec.petal_count as f64);
    struct Petal {
        cx: f64,
        cy: f64,
        dir: (f64, f64),
        a: f64,
        b: f64,
    }
    let mut petals = Vec::with_capacity(spec.petal_count);
    for k in 0..spec.petal_count {
        let theta = phase + std::f64::consts::TAU * k as f64 / spec.petal_count as f64;
        let a = base_a * rng.gen_range(0.96..1.04);
        let b = base_b * rng.gen_range(0.96..1.04);
        let d = cr + a;
        petals.push(Petal {
            cx: cx + d * theta.cos(),
            cy: cy + d * theta.sin(),
            dir: (theta.cos(), theta.sin()),
            a,
            b,
        });
    }

    let mut art = Raster::filled(canvas, canvas, WHITE)?;
    let mut truth = GroundTruth::new(canvas, canvas);
    let half = lw / 2.0;
    for y in 0..canvas {
        for x in 0..canvas {
            let (px, py) = (f64::from(x), f64::from(y));
            let center_sd = ((px - cx).powi(2) + (py - cy).powi(2)).sqrt() - cr;
            let mut ink = center_sd.abs() <= half;
            let mut interior: Option<PartLabel> = None;
            let mut claims = 0;
            if center_sd < -half {
                interior = Some(PartLabel::Body);
                claims += 1;
            }
            for p in &petals {
                let sd = oriented_ellipse_signed_dist(px, py, p.cx, p.cy, p.dir, p.a, p.b);
                if sd.abs() <= half {
                    ink = true;
                }
                if sd < -half {
                    interior = Some(PartLabel::Appendage);
                    claims += 1;
                }
            }
            if claims > 1 {
                return Err(Error::InvalidGeometry(format!(
                    "petal interiors overlap at ({x},{y}); shrink petals or grow spacing"
                )));
            }
            if ink {
                art.set_pixel(x, y, BLACK);
                truth.set(x, y, TruthLabel::Line);
            } else if let Some(part) = interior {
                truth.set(x, y, TruthLabel::Part(part));
            }
        }
    }

    // Damage after truth capture: crop moves the viewport for both, gaps
    // erase art only.
    if let Some(crop) = &spec.crop {
        art = apply_crop(&art, crop)?;
        truth = truth.crop(crop)?;
    }
    if let Some(gap) = &spec.gap {
        art = apply_gaps(&art, gap)?;
    }
    Ok(Generated { art, truth })
}

/// Generates a creature: a body ellipse with perimeter spike triangles and an
/// interior eye circle.
pub fn gen_creature(spec: &CreatureSpec) -> Result<Generated> {
    if spec.line_width < 1.0 {
        return Err(Error::InvalidParameter("line_width must be >= 1".into()));
    }
    let canvas = spec.canvas;
    let cx = f64::from(canvas - 1) / 2.0;
    let cy = f64::from(canvas - 1) / 2.0;
    let (ba, bb) = spec.body_axes;
    let lw = spec.line_width;
    let half = lw / 2.0;
    let (ex, ey) = (cx + spec.eye_offset.0, cy + spec.eye_offset.1);

    // The eye, including its outline, must sit strictly inside the body.
    let eye_extent = spec.eye_radius + lw + 2.0;
    let eye_sd = ellipse_signed_dist(ex, ey, cx, cy, ba, bb);
    if eye_sd > -(eye_extent + half) {
        return Err(Error::InvalidGeometry(format!(
            "eye at offset ({}, {}) is not fully interior to the body",
            spec.eye_offset.0, spec.eye_offset.1
        )));
    }

    let mut rng = seeded_rng(spec.seed);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU / spec.spike_count.max(1) as f64);
    struct Spike {
        tri: [(f64, f64); 3],
    }
    let mut spikes = Vec::with_capacity(spec.spike_count);
    for j in 0..spec.spike_count {
        let t = phase + std::f64::consts::TAU * j as f64 / spec.spike_count as f64;
        let size = spec.spike_size * rng.gen_range(0.92..1.08);
        let base = (cx + ba * t.cos(), cy + bb * t.sin());
        // Outward normal of the ellipse at parameter t.
        let n = {
            let (nx, ny) = (bb * t.cos(), ba * t.sin());
            let len = (nx * nx + ny * ny).sqrt();
            (nx / len, ny / len)
        };
        let tangent = (-n.1, n.0);
        let apex = (base.0 + n.0 * size, base.1 + n.1 * size);
        let wb = 0.45 * size;
        // Base corners pulled slightly inside the body so the spike seals
        // against the body outline.
        let inset = half;
        let c1 = (
            base.0 + tangent.0 * wb - n.0 * inset,
            base.1 + tangent.1 * wb - n.1 * inset,
        );
        let c2 = (
            base.0 - tangent.0 * wb - n.0 * inset,
            base.1 - tangent.1 * wb - n.1 * inset,
        );
        spikes.push(Spike {
            tri: [c1, c2, apex],
        });
    }

    let mut art = Raster::filled(canvas, canvas, WHITE)?;
    let mut truth = GroundTruth::new(canvas, canvas);
    for y in 0..canvas {
        for x in 0..canvas {
            let (px, py) = (f64::from(x), f64::from(y));
            let body_sd = ellipse_signed_dist(px, py, cx, cy, ba, bb);
            let eye_d = ((px - ex).powi(2) + (py - ey).powi(2)).sqrt() - spec.eye_radius;
            let mut ink = body_sd.abs() <= half || eye_d.abs() <= half;
            let mut interior: Option<PartLabel> = None;
            let mut claims = 0;
            if eye_d < -half {
                interior = Some(PartLabel::Eye);
                claims += 1;
            } else if body_sd < -half && eye_d > half {
                interior = Some(PartLabel::Body);
                claims += 1;
            }
            for s in &spikes {
                let d1 = segment_distance(px, py, s.tri[0].0, s.tri[0].1, s.tri[2].0, s.tri[2].1);
                let d2 = segment_distance(px, py, s.tri[1].0, s.tri[1].1, s.tri[2].0, s.tri[2].1);
                if d1 <= half || d2 <= half {
                    ink = true;
                }
                if point_in_triangle(px, py, &s.tri) && d1 > half && d2 > half && body_sd > half {
                    interior = Some(PartLabel::Appendage);
                    claims += 1;
                }
            }
            if claims > 1 {
                return Err(Error::InvalidGeometry(format!(
                    "spike interiors overlap at ({x},{y}); shrink spikes or their count"
                )));
            }
            if ink {
                art.set_pixel(x, y, BLACK);
                truth.set(x, y, TruthLabel::Line);
            } else if let Some(part) = interior {
                truth.set(x, y, TruthLabel::Part(part));
            }
        }
    }
    Ok(Generated { art, truth })
}

/// The violation families a constructed corpus draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationFamily {
    /// Spoke erasures through every outline: the drawing collapses into one
    /// region.
    Gap,
    /// A viewport crop that splits the background on the center ring.
    CropSplit,
    /// Daisy proportions taken to the page edge: a small center with huge
    /// petals running off the canvas.
    Daisy,
}

impl std::fmt::Display for ViolationFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ViolationFamily::Gap => "gap",
            ViolationFamily::CropSplit => "crop_split",
            ViolationFamily::Daisy => "daisy",
        };
        f.write_str(s)
    }
}

/// One corpus drawing with its construction flags.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub id: String,
    pub art: Raster,
    pub truth: GroundTruth,
    pub intended_conforming: bool,
    pub family: Option<ViolationFamily>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub items: Vec<CorpusItem>,
}

/// Erases a straight stroke from `from` to `to` with a square brush.
fn erase_segment(img: &mut Raster, from: (f64, f64), to: (f64, f64), width: f64) {
    let steps = ((to.0 - from.0).hypot(to.1 - from.1).ceil() as usize).max(1);
    let half = (width / 2.0).ceil() as i64;
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        let x = (from.0 + t * (to.0 - from.0)).round() as i64;
        let y = (from.1 + t * (to.1 - from.1)).round() as i64;
        for by in -half..=half {
            for bx in -half..=half {
                let (px, py) = (x + bx, y + by);
                if px >= 0 && py >= 0 && px < i64::from(img.width()) && py < i64::from(img.height())
                {
                    img.set_pixel(px as u32, py as u32, WHITE);
                }
            }
        }
    }
}

/// A jittered sunflower spec guaranteed conforming by construction: contained
/// petals, connected background, center bigger than any petal.
fn conforming_flower_spec(seed: u64) -> FlowerSpec {
    let mut rng = seeded_rng(seed);
    let mut cr: f64 = rng.gen_range(60.0..80.0);
    let petal_count = rng.gen_range(5..=7usize);
    let mut a: f64 = rng.gen_range(38.0..50.0);
    let b = rng.gen_range(20.0..27.0);
    if cr * cr < 1.35 * a * b {
        cr = (1.35 * a * b).sqrt();
    }
    if cr + 2.0 * a > 190.0 {
        a = (190.0 - cr) / 2.0;
    }
    FlowerSpec {
        center_radius: cr,
        petal_count,
        petal_axes: (a, b),
        seed: seed.wrapping_add(1),
        ..FlowerSpec::default()
    }
}

/// Spoke erasures through the center and every petal: merges every region
/// with the background, a decidable (too-few-components) violation.
fn gap_item(seed: u64) -> Result<Generated> {
    let spec = conforming_flower_spec(seed);
    let mut generated = gen_flower(&spec)?;
    let canvas = f64::from(spec.canvas - 1) / 2.0;
    let mut rng = seeded_rng(spec.seed);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU / spec.petal_count as f64);
    let reach = spec.center_radius + 2.0 * spec.petal_axes.0 + spec.line_width + 4.0;
    for k in 0..spec.petal_count {
        let theta = phase + std::f64::consts::TAU * k as f64 / spec.petal_count as f64;
        erase_segment(
            &mut generated.art,
            (canvas, canvas),
            (canvas + reach * theta.cos(), canvas + reach * theta.sin()),
            spec.line_width + 4.0,
        );
    }
    Ok(generated)
}

/// A crop framed inside the center ring corners-out: the ring slices the
/// cropped background into several border-touching regions.
fn crop_split_item(seed: u64) -> Result<Generated> {
    let mut spec = conforming_flower_spec(seed);
    let cr = spec.center_radius;
    let lw = spec.line_width;
    let s_lo = cr / std::f64::consts::SQRT_2 + lw + 2.0;
    let s_hi = cr - lw - 2.0;
    let s = ((s_lo + s_hi) / 2.0).round() as u32;
    let c = (spec.canvas - 1) / 2;
    spec.crop = Some(CropSpec {
        rect: Rect {
            x: c - s,
            y: c - s,
            w: 2 * s,
            h: 2 * s,
        },
        resize_back: true,
    });
    gen_flower(&spec)
}

/// An overflowing daisy: tiny center, huge petals crossing the canvas border
/// in every direction.
fn daisy_item(seed: u64) -> Result<Generated> {
    let mut rng = seeded_rng(seed);
    let cr = rng.gen_range(28.0..38.0);
    let petal_count = rng.gen_range(5..=6usize);
    let a = rng.gen_range(132.0..146.0);
    let b = rng.gen_range(26.0..34.0);
    gen_flower(&FlowerSpec {
        center_radius: cr,
        petal_count,
        petal_axes: (a, b),
        seed: seed.wrapping_add(1),
        ..FlowerSpec::default()
    })
}

/// Builds a corpus with exactly `round(n*f)` conforming drawings; the rest
/// are drawn uniformly from the violation families.
pub fn gen_corpus(n: usize, conforming_fraction: f64, seed: u64) -> Result<Corpus> {
    if n == 0 {
        return Err(Error::EmptyInput("corpus size is zero".into()));
    }
    if !(0.0..=1.0).contains(&conforming_fraction) {
        return Err(Error::InvalidParameter(format!(
            "conforming fraction must be in [0,1], got {conforming_fraction}"
        )));
    }
    let n_conform = ((n as f64) * conforming_fraction).round() as usize;
    let mut items = Vec::with_capacity(n);
    for index in 0..n {
        let item_seed = derive_seed(seed, &[index as u64]);
        let (generated, family) = if index < n_conform {
            (gen_flower(&conforming_flower_spec(item_seed))?, None)
        } else {
            let mut rng = seeded_rng(derive_seed(item_seed, &[0xFA]));
            let family = match rng.gen_range(0..3u8) {
                0 => ViolationFamily::Gap,
                1 => ViolationFamily::CropSplit,
                _ => ViolationFamily::Daisy,
            };
            let generated = match family {
                ViolationFamily::Gap => gap_item(item_seed)?,
                ViolationFamily::CropSplit => crop_split_item(item_seed)?,
                ViolationFamily::Daisy => daisy_item(item_seed)?,
            };
            (generated, Some(family))
        };
        items.push(CorpusItem {
            id: format!("item_{index:04}"),
            art: generated.art,
            truth: generated.truth,
            intended_conforming: family.is_none(),
            family,
        });
    }
    Ok(Corpus { items })
}

/// Fraction of pixels with exactly equal RGB.
pub fn pixel_accuracy(predicted: &Raster, oracle: &Raster) -> Result<f64> {
    if predicted.width() != oracle.width() || predicted.height() != oracle.height() {
        return Err(Error::DimensionMismatch(format!(
            "predicted is {}x{}, oracle is {}x{}",
            predicted.width(),
            predicted.height(),
            oracle.width(),
            oracle.height()
        )));
    }
    let equal = predicted
        .pixels()
        .iter()
        .zip(oracle.pixels())
        .filter(|(a, b)| a == b)
        .count();
    Ok(equal as f64 / predicted.pixel_count() as f64)
}

fn item_conforms(item_art: &Raster, params: &RuleParams) -> bool {
    let mask = binarize(item_art, DEFAULT_BINARIZE_THRESHOLD);
    let map = label_components(&mask, params.connectivity);
    check_conformance(&map, params).conforms()
}

/// Fraction of corpus drawings that pass the conformance check.
pub fn conformance_rate(corpus: &Corpus, params: &RuleParams) -> Result<f64> {
    if corpus.items.is_empty() {
        return Err(Error::EmptyInput("corpus is empty".into()));
    }
    let pass = corpus
        .items
        .iter()
        .filter(|item| item_conforms(&item.art, params))
        .count();
    Ok(pass as f64 / corpus.items.len() as f64)
}

/// Constructed-vs-detected tallies for one violation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FamilyStats {
    pub constructed: usize,
    pub detected: usize,
}

/// The eval harness output: checker rate against construction flags, with a
/// per-family detectability breakdown and rule-coloring accuracy against the
/// intent oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEvalReport {
    pub total: usize,
    pub constructed_conforming: usize,
    pub checker_pass: usize,
    pub conformance_rate: f64,
    /// Constructed-conforming items the checker rejected.
    pub false_rejects: usize,
    pub per_family: BTreeMap<String, FamilyStats>,
    pub mean_accuracy_conforming: f64,
    pub mean_accuracy_all: f64,
}

impl std::fmt::Display for CorpusEvalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "total = {}", self.total)?;
        writeln!(f, "constructed_conforming = {}", self.constructed_conforming)?;
        writeln!(f, "checker_pass = {}", self.checker_pass)?;
        writeln!(f, "conformance_rate = {:.4}", self.conformance_rate)?;
        writeln!(f, "false_rejects = {}", self.false_rejects)?;
        writeln!(
            f,
            "mean_accuracy_conforming = {:.4}",
            self.mean_accuracy_conforming
        )?;
        writeln!(f, "mean_accuracy_all = {:.4}", self.mean_accuracy_all)?;
        for (family, stats) in &self.per_family {
            writeln!(
                f,
                "family.{family} = {{ constructed = {}, detected = {} }}",
                stats.constructed, stats.detected
            )?;
        }
        Ok(())
    }
}

/// Runs the checker and the rule colorizer over a corpus and scores both
/// against the construction flags and the intent oracle.
pub fn evaluate_corpus(
    corpus: &Corpus,
    params: &RuleParams,
    scheme: &ColorScheme,
) -> Result<CorpusEvalReport> {
    if corpus.items.is_empty() {
        return Err(Error::EmptyInput("corpus is empty".into()));
    }
    let mut report = CorpusEvalReport {
        total: corpus.items.len(),
        constructed_conforming: 0,
        checker_pass: 0,
        conformance_rate: 0.0,
        false_rejects: 0,
        per_family: BTreeMap::new(),
        mean_accuracy_conforming: 0.0,
        mean_accuracy_all: 0.0,
    };
    let mut acc_sum_all = 0.0;
    let mut acc_sum_conf = 0.0;
    for item in &corpus.items {
        let passes = item_conforms(&item.art, params);
        if passes {
            report.checker_pass += 1;
        }
        if item.intended_conforming {
            report.constructed_conforming += 1;
            if !passes {
                report.false_rejects += 1;
            }
        }
        if let Some(family) = item.family {
            let stats = report.per_family.entry(family.to_string()).or_default();
            stats.constructed += 1;
            if !passes {
                stats.detected += 1;
            }
        }
        let outcome = rule_color(&item.art, params, scheme)?;
        let oracle = item.truth.oracle_coloring(scheme);
        let accuracy = pixel_accuracy(&outcome.colored, &oracle)?;
        acc_sum_all += accuracy;
        if item.intended_conforming {
            acc_sum_conf += accuracy;
        }
    }
    report.conformance_rate = report.checker_pass as f64 / report.total as f64;
    report.mean_accuracy_all = acc_sum_all / report.total as f64;
    report.mean_accuracy_conforming = if report.constructed_conforming > 0 {
        acc_sum_conf / report.constructed_conforming as f64
    } else {
        0.0
    };
    Ok(report)
}

/// Tallies of rule-breaking coverage in a built dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub total: usize,
    /// Pairs whose provenance contains each transform kind (at most once per
    /// pair and kind).
    pub kind_counts: BTreeMap<String, usize>,
    pub conforming_a: usize,
    pub nonconforming_a: usize,
}

impl std::fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "total = {}", self.total)?;
        writeln!(f, "conforming_a = {}", self.conforming_a)?;
        writeln!(f, "nonconforming_a = {}", self.nonconforming_a)?;
        for (kind, count) in &self.kind_counts {
            writeln!(f, "kind.{kind} = {count}")?;
        }
        Ok(())
    }
}

/// Counts pairs per transform kind present in provenance and runs the
/// conformance check on each pair's line art.
pub fn coverage_report(pairs: &[ABPair], params: &RuleParams) -> CoverageReport {
    let mut report = CoverageReport {
        total: pairs.len(),
        kind_counts: BTreeMap::new(),
        conforming_a: 0,
        nonconforming_a: 0,
    };
    for kind in [
        TransformKind::Affine,
        TransformKind::RadialWarp,
        TransformKind::Elastic,
        TransformKind::Gaps,
        TransformKind::Crop,
    ] {
        report.kind_counts.insert(kind.to_string(), 0);
    }
    for pair in pairs {
        let mut kinds: Vec<String> = pair.provenance_kinds();
        kinds.sort();
        kinds.dedup();
        for kind in kinds {
            *report.kind_counts.entry(kind).or_default() += 1;
        }
        if item_conforms(&pair.a, params) {
            report.conforming_a += 1;
        } else {
            report.nonconforming_a += 1;
        }
    }
    report
}

/// Sidecar record stored with each corpus drawing on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagRecord {
    pub id: String,
    pub intended_conforming: bool,
    pub family: Option<String>,
}

/// Writes a corpus as PNG drawings plus intent colorings and a flags sidecar.
pub fn write_corpus(corpus: &Corpus, dir: &Path, scheme: &ColorScheme) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let flags_path = dir.join("flags.jsonl");
    let mut flags = std::fs::File::create(&flags_path).map_err(|e| Error::io(&flags_path, e))?;
    for item in &corpus.items {
        item.art.save_png(dir.join(format!("{}.png", item.id)))?;
        item.truth
            .oracle_coloring(scheme)
            .save_png(dir.join(format!("{}_truth.png", item.id)))?;
        let record = FlagRecord {
            id: item.id.clone(),
            intended_conforming: item.intended_conforming,
            family: item.family.map(|f| f.to_string()),
        };
        let line = serde_json::to_string(&record)
            .map_err(|e| Error::Config(format!("flag record: {e}")))?;
        writeln!(flags, "{line}").map_err(|e| Error::io(&flags_path, e))?;
    }
    Ok(())
}

pub fn read_flags(dir: &Path) -> Result<Vec<FlagRecord>> {
    let path = dir.join("flags.jsonl");
    let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
    let mut records = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(&path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(
            serde_json::from_str(&line).map_err(|e| Error::Config(format!("flag line: {e}")))?,
        );
    }
    Ok(records)
}

/// Checker + accuracy evaluation of an on-disk corpus (art, truth colorings,
/// flags sidecar).
pub fn evaluate_corpus_dir(
    dir: &Path,
    params: &RuleParams,
    scheme: &ColorScheme,
) -> Result<CorpusEvalReport> {
    let flags = read_flags(dir)?;
    if flags.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no corpus records in {}",
            dir.display()
        )));
    }
    let mut report = CorpusEvalReport {
        total: flags.len(),
        constructed_conforming: 0,
        checker_pass: 0,
        conformance_rate: 0.0,
        false_rejects: 0,
        per_family: BTreeMap::new(),
        mean_accuracy_conforming: 0.0,
        mean_accuracy_all: 0.0,
    };
    let mut acc_sum_all = 0.0;
    let mut acc_sum_conf = 0.0;
    for record in &flags {
        let art = Raster::load_png(dir.join(format!("{}.png", record.id)))?;
        let passes = item_conforms(&art, params);
        if passes {
            report.checker_pass += 1;
        }
        if record.intended_conforming {
            report.constructed_conforming += 1;
            if !passes {
                report.false_rejects += 1;
            }
        }
        if let Some(family) = &record.family {
            let stats = report.per_family.entry(family.clone()).or_default();
            stats.constructed += 1;
            if !passes {
                stats.detected += 1;
            }
        }
        let truth_path = dir.join(format!("{}_truth.png", record.id));
        if truth_path.exists() {
            let oracle = Raster::load_png(&truth_path)?;
            let outcome = rule_color(&art, params, scheme)?;
            let accuracy = pixel_accuracy(&outcome.colored, &oracle)?;
            acc_sum_all += accuracy;
            if record.intended_conforming {
                acc_sum_conf += accuracy;
            }
        }
    }
    report.conformance_rate = report.checker_pass as f64 / report.total as f64;
    report.mean_accuracy_all = acc_sum_all / report.total as f64;
    report.mean_accuracy_conforming = if report.constructed_conforming > 0 {
        acc_sum_conf / report.constructed_conforming as f64
    } else {
        0.0
    };
    Ok(report)
}

/// Turns conforming generated drawings into dataset originals.
pub fn generated_originals(
    class_tag: ClassTag,
    count: usize,
    seed: u64,
) -> Result<Vec<crate::dataset::OriginalDrawing>> {
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let item_seed = derive_seed(seed, &[class_tag as u64, index as u64]);
        let generated = match class_tag {
            ClassTag::Flower => gen_flower(&conforming_flower_spec(item_seed))?,
            ClassTag::Creature => gen_creature(&jittered_creature_spec(item_seed))?,
        };
        out.push(crate::dataset::OriginalDrawing {
            id: format!("{class_tag}_{index:03}"),
            class_tag,
            image: generated.art,
        });
    }
    Ok(out)
}

/// A jittered creature spec guaranteed conforming: contained body, sealed
/// spikes, deep interior eye.
pub fn jittered_creature_spec(seed: u64) -> CreatureSpec {
    let mut rng = seeded_rng(seed);
    let ba = rng.gen_range(100.0..120.0);
    let bb = rng.gen_range(65.0..85.0);
    let spike_count = rng.gen_range(6..=8usize);
    let spike_size = rng.gen_range(30.0..42.0);
    let eye_radius = rng.gen_range(9.0..14.0);
    let eye_dir = rng.gen_range(0.0..std::f64::consts::TAU);
    let eye_dist = rng.gen_range(20.0..34.0);
    CreatureSpec {
        body_axes: (ba, bb),
        spike_count,
        spike_size,
        eye_radius,
        eye_offset: (eye_dist * eye_dir.cos(), eye_dist * eye_dir.sin()),
        seed: seed.wrapping_add(1),
        ..CreatureSpec::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Connectivity;
    use crate::rules::Violation;

    fn components_of(art: &Raster) -> crate::raster::ComponentMap {
        label_components(
            &binarize(art, DEFAULT_BINARIZE_THRESHOLD),
            Connectivity::Four,
        )
    }

    /// Truth regions and components must tell the same story on undamaged
    /// output.
    fn assert_truth_consistent(generated: &Generated, expected_appendages: usize, has_eye: bool) {
        let map = components_of(&generated.art);
        // Ink in truth is exactly the binarized mask.
        let mask = binarize(&generated.art, DEFAULT_BINARIZE_THRESHOLD);
        for y in 0..generated.art.height() {
            for x in 0..generated.art.width() {
                assert_eq!(
                    generated.truth.label(x, y) == TruthLabel::Line,
                    mask.is_line(x, y),
                    "truth/mask mismatch at ({x},{y})"
                );
            }
        }
        // Every component is pure in truth labels.
        let mut component_label: Vec<Option<TruthLabel>> = vec![None; map.components().len()];
        for y in 0..generated.art.height() {
            for x in 0..generated.art.width() {
                let id = map.label(x, y);
                if id == crate::raster::LINE_SENTINEL {
                    continue;
                }
                let truth = generated.truth.label(x, y);
                match component_label[id as usize] {
                    None => component_label[id as usize] = Some(truth),
                    Some(prev) => assert_eq!(prev, truth, "mixed component {id}"),
                }
            }
        }
        let count_part = |p: PartLabel| {
            component_label
                .iter()
                .filter(|l| matches!(l, Some(TruthLabel::Part(q)) if *q == p))
                .count()
        };
        assert_eq!(count_part(PartLabel::Background), 1);
        assert_eq!(count_part(PartLabel::Body), 1);
        assert_eq!(count_part(PartLabel::Appendage), expected_appendages);
        assert_eq!(count_part(PartLabel::Eye), usize::from(has_eye));
    }

    #[test]
    fn default_flower_conforms_and_is_consistent() {
        let spec = FlowerSpec::default();
        let generated = gen_flower(&spec).unwrap();
        let map = components_of(&generated.art);
        assert!(check_conformance(&map, &RuleParams::default()).conforms());
        assert_truth_consistent(&generated, spec.petal_count, false);
    }

    #[test]
    fn flower_same_seed_is_bit_identical() {
        let spec = FlowerSpec {
            seed: 77,
            ..FlowerSpec::default()
        };
        let a = gen_flower(&spec).unwrap();
        let b = gen_flower(&spec).unwrap();
        assert_eq!(a.art, b.art);
        assert_eq!(a.truth, b.truth);
        let c = gen_flower(&FlowerSpec {
            seed: 78,
            ..FlowerSpec::default()
        })
        .unwrap();
        assert_ne!(a.art, c.art);
    }

    #[test]
    fn flower_rejects_overlapping_petals() {
        let spec = FlowerSpec {
            petal_count: 14,
            petal_axes: (45.0, 34.0),
            ..FlowerSpec::default()
        };
        assert!(matches!(
            gen_flower(&spec),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn daisy_ratio_swaps_center_and_petal_labels() {
        let spec = FlowerSpec {
            daisy_ratio: Some(0.5),
            ..FlowerSpec::default()
        };
        let generated = gen_flower(&spec).unwrap();
        // Truth areas: center strictly smaller than the biggest petal.
        let center_area = generated.truth.count(TruthLabel::Part(PartLabel::Body));
        let map = components_of(&generated.art);
        let labeling = classify_parts(&map, &RuleParams::default()).unwrap();
        // Find the component whose truth is the center.
        let mut center_component = None;
        'outer: for y in 0..generated.art.height() {
            for x in 0..generated.art.width() {
                if generated.truth.label(x, y) == TruthLabel::Part(PartLabel::Body) {
                    center_component = Some(map.label(x, y));
                    break 'outer;
                }
            }
        }
        let center_component = center_component.expect("daisy still has a center");
        let biggest_petal_area = map
            .components()
            .iter()
            .filter(|c| c.id != center_component)
            .map(|c| c.area)
            .max()
            .unwrap();
        assert!(center_area < biggest_petal_area);
        // The rules promote a petal to body and demote the center.
        assert_ne!(
            labeling.label_of(center_component).unwrap(),
            PartLabel::Body
        );
    }

    #[test]
    fn default_creature_is_consistent_and_eye_is_found() {
        let spec = CreatureSpec::default();
        let generated = gen_creature(&spec).unwrap();
        assert_truth_consistent(&generated, spec.spike_count, true);
        let map = components_of(&generated.art);
        let labeling = classify_parts(&map, &RuleParams::default()).unwrap();
        // The component under the truth eye region is classified Eye.
        let mut eye_component = None;
        'outer: for y in 0..generated.art.height() {
            for x in 0..generated.art.width() {
                if generated.truth.label(x, y) == TruthLabel::Part(PartLabel::Eye) {
                    eye_component = Some(map.label(x, y));
                    break 'outer;
                }
            }
        }
        assert_eq!(
            labeling.label_of(eye_component.unwrap()).unwrap(),
            PartLabel::Eye
        );
        assert_eq!(labeling.count(PartLabel::Eye), 1);
    }

    #[test]
    fn creature_spikes_sit_next_to_background() {
        let spec = CreatureSpec::default();
        let generated = gen_creature(&spec).unwrap();
        let map = components_of(&generated.art);
        let ranked = map.ids_by_area_desc();
        let background = ranked[0];
        let body = ranked[1];
        for component in map.components() {
            if component.id == background || component.id == body {
                continue;
            }
            let d = crate::raster::component_distance(&map, component.id, background).unwrap();
            // Spikes are a line away; the eye is deep inside.
            let is_eye_region = d > RuleParams::default().eye_distance_threshold;
            if !is_eye_region {
                assert!(
                    d <= 2.0 * spec.line_width,
                    "spike at distance {d} from background"
                );
            }
        }
    }

    #[test]
    fn creature_rejects_non_interior_eye() {
        let spec = CreatureSpec {
            eye_offset: (100.0, 0.0),
            ..CreatureSpec::default()
        };
        assert!(matches!(
            gen_creature(&spec),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn creature_same_seed_is_bit_identical() {
        let spec = CreatureSpec {
            seed: 5,
            ..CreatureSpec::default()
        };
        assert_eq!(gen_creature(&spec).unwrap().art, gen_creature(&spec).unwrap().art);
    }

    #[test]
    fn corpus_flags_match_requested_fraction() {
        let corpus = gen_corpus(40, 0.8, 11).unwrap();
        let flagged = corpus
            .items
            .iter()
            .filter(|i| i.intended_conforming)
            .count();
        assert_eq!(flagged, 32);
        assert_eq!(corpus.items.len(), 40);
    }

    #[test]
    fn corpus_all_conforming_passes_checker() {
        let corpus = gen_corpus(20, 1.0, 13).unwrap();
        assert_eq!(conformance_rate(&corpus, &RuleParams::default()).unwrap(), 1.0);
    }

    #[test]
    fn corpus_all_violations_fail_checker() {
        let corpus = gen_corpus(24, 0.0, 17).unwrap();
        assert_eq!(conformance_rate(&corpus, &RuleParams::default()).unwrap(), 0.0);
        // All three families appear over 24 draws.
        let families: std::collections::BTreeSet<_> =
            corpus.items.iter().filter_map(|i| i.family).collect();
        assert_eq!(families.len(), 3);
    }

    #[test]
    fn corpus_zero_size_is_an_error() {
        assert!(gen_corpus(0, 0.5, 1).is_err());
        assert!(gen_corpus(10, 1.5, 1).is_err());
    }

    #[test]
    fn gap_items_collapse_components() {
        let generated = gap_item(99).unwrap();
        let map = components_of(&generated.art);
        assert_eq!(map.components().len(), 1);
        let report = check_conformance(&map, &RuleParams::default());
        assert!(report.violations().contains(&Violation::TooFewComponents));
    }

    #[test]
    fn crop_split_items_disconnect_background() {
        let generated = crop_split_item(123).unwrap();
        let map = components_of(&generated.art);
        let report = check_conformance(&map, &RuleParams::default());
        assert!(report
            .violations()
            .contains(&Violation::BackgroundDisconnected));
    }

    #[test]
    fn daisy_items_break_background_assumptions() {
        let generated = daisy_item(321).unwrap();
        let map = components_of(&generated.art);
        let report = check_conformance(&map, &RuleParams::default());
        assert!(!report.conforms());
    }

    #[test]
    fn pixel_accuracy_basics() {
        let img = Raster::filled(10, 10, WHITE).unwrap();
        assert_eq!(pixel_accuracy(&img, &img).unwrap(), 1.0);
        let inverted = Raster::filled(10, 10, BLACK).unwrap();
        assert_eq!(pixel_accuracy(&img, &inverted).unwrap(), 0.0);
        let mut half = img.clone();
        for y in 0..5 {
            for x in 0..10 {
                half.set_pixel(x, y, Rgb([1, 2, 3]));
            }
        }
        assert_eq!(pixel_accuracy(&img, &half).unwrap(), 0.5);
        let other = Raster::filled(9, 10, WHITE).unwrap();
        assert!(pixel_accuracy(&img, &other).is_err());
    }

    #[test]
    fn rule_color_matches_oracle_on_conforming_flower() {
        let generated = gen_flower(&conforming_flower_spec(7)).unwrap();
        let scheme = ColorScheme::default();
        let outcome = rule_color(&generated.art, &RuleParams::default(), &scheme).unwrap();
        assert!(outcome.report.conforms());
        let oracle = generated.truth.oracle_coloring(&scheme);
        let accuracy = pixel_accuracy(&outcome.colored, &oracle).unwrap();
        assert!(
            accuracy >= 0.995,
            "conforming flower accuracy {accuracy}"
        );
    }

    #[test]
    fn gap_broken_petal_miscolors_against_oracle() {
        // A single spoke through one petal merges it with the background, so
        // its pixels come out background-colored relative to the intent.
        let spec = conforming_flower_spec(31);
        let mut generated = gen_flower(&spec).unwrap();
        let canvas = f64::from(spec.canvas - 1) / 2.0;
        let mut rng = seeded_rng(spec.seed);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU / spec.petal_count as f64);
        let reach = spec.center_radius + 2.0 * spec.petal_axes.0 + spec.line_width + 4.0;
        // One spoke, but started outside the center so the center survives.
        let start = (
            canvas + (spec.center_radius + spec.line_width + 2.0) * phase.cos(),
            canvas + (spec.center_radius + spec.line_width + 2.0) * phase.sin(),
        );
        erase_segment(
            &mut generated.art,
            start,
            (canvas + reach * phase.cos(), canvas + reach * phase.sin()),
            spec.line_width + 4.0,
        );
        let before = components_of(&gen_flower(&spec).unwrap().art);
        let after = components_of(&generated.art);
        assert!(after.components().len() < before.components().len());

        let scheme = ColorScheme::default();
        let outcome = rule_color(&generated.art, &RuleParams::default(), &scheme).unwrap();
        let oracle = generated.truth.oracle_coloring(&scheme);
        // Some pixels the intent calls appendage-colored are now background.
        let mut wrong_petal_pixels = 0;
        for y in 0..generated.art.height() {
            for x in 0..generated.art.width() {
                if oracle.pixel(x, y) == scheme.appendage
                    && outcome.colored.pixel(x, y) == scheme.background
                {
                    wrong_petal_pixels += 1;
                }
            }
        }
        assert!(wrong_petal_pixels > 100, "got {wrong_petal_pixels}");
    }

    #[test]
    fn coverage_report_counts_kinds() {
        let drawing = gen_flower(&conforming_flower_spec(3)).unwrap();
        let batch = crate::dataset::rule_color_originals(
            &[crate::dataset::OriginalDrawing {
                id: "f0".into(),
                class_tag: ClassTag::Flower,
                image: drawing.art,
            }],
            &RuleParams::default(),
            &ColorScheme::default(),
        )
        .unwrap();
        let seed = &batch.pairs[0];
        let report = coverage_report(std::slice::from_ref(seed), &RuleParams::default());
        assert_eq!(report.total, 1);
        assert!(report.kind_counts.values().all(|&v| v == 0));
        assert_eq!(report.conforming_a, 1);

        let gapped = crate::augment::apply_to_pair(
            &crate::augment::Transform::Gaps(GapSpec {
                stroke_count: 2,
                stroke_width: 3,
                stroke_length: 40,
                seed: 8,
            }),
            seed,
        )
        .unwrap();
        let report = coverage_report(&[seed.clone(), gapped], &RuleParams::default());
        assert_eq!(report.kind_counts["gaps"], 1);
        assert_eq!(report.kind_counts["affine"], 0);
    }

    #[test]
    fn corpus_write_read_and_evaluate() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = gen_corpus(12, 0.75, 21).unwrap();
        let scheme = ColorScheme::default();
        write_corpus(&corpus, dir.path(), &scheme).unwrap();
        let report = evaluate_corpus_dir(dir.path(), &RuleParams::default(), &scheme).unwrap();
        let in_memory = evaluate_corpus(&corpus, &RuleParams::default(), &scheme).unwrap();
        assert_eq!(report, in_memory);
        assert_eq!(report.total, 12);
        assert_eq!(report.constructed_conforming, 9);
        assert_eq!(report.false_rejects, 0);
        assert!(report.mean_accuracy_conforming >= 0.995);
    }

    #[test]
    fn generated_originals_are_distinct_and_conforming() {
        let originals = generated_originals(ClassTag::Flower, 6, 40).unwrap();
        assert_eq!(originals.len(), 6);
        let mut hashes = std::collections::BTreeSet::new();
        for drawing in &originals {
            assert!(item_conforms(&drawing.image, &RuleParams::default()));
            let mut h = crate::seed::Fnv1a::new();
            h.update(&drawing.image.to_bytes());
            hashes.insert(h.finish());
        }
        assert_eq!(hashes.len(), 6);
        let creatures = generated_originals(ClassTag::Creature, 4, 41).unwrap();
        for drawingin in &creatures {
            assert!(item_conforms(&drawingin.image, &RuleParams::default()));
        }
    }
}
