//! Geometric part labeling, rule-assumption conformance checks, and
//! scheme-based colorization.
//!
//! The labeling rules are purely geometric: the biggest white component is the
//! background, the second biggest is the body (a flower's center), everything
//! else is an appendage (petal or spike) unless it sits deep inside the body,
//! far from the background, in which case it is an eye.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{
    binarize, component_distance, label_components, ComponentMap, Connectivity, Raster, Rgb,
    BLACK, DEFAULT_BINARIZE_THRESHOLD, LINE_SENTINEL, WHITE,
};

/// Semantic part classes assigned to white components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartLabel {
    Background,
    /// Flower center or creature body.
    Body,
    /// Petal or spike.
    Appendage,
    Eye,
}

/// Free parameters of the labeling rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleParams {
    /// Minimum distance to the background (pixels) beyond which a remaining
    /// component counts as an eye rather than an appendage. Appendages are
    /// separated from the background by only a drawn line.
    pub eye_distance_threshold: f64,
    /// Components smaller than this are treated as appendage-class noise and
    /// never promoted to body or eye.
    pub min_component_area: usize,
    /// Connectivity used for white regions.
    pub connectivity: Connectivity,
}

impl Default for RuleParams {
    fn default() -> Self {
        RuleParams {
            eye_distance_threshold: 4.0,
            min_component_area: 4,
            connectivity: Connectivity::Four,
        }
    }
}

impl RuleParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eye_distance_threshold > 0.0) {
            return Err(Error::InvalidParameter(
                "eye_distance_threshold must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Fill colors per part class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorScheme {
    pub body: Rgb,
    pub appendage: Rgb,
    pub eye: Rgb,
    pub background: Rgb,
    pub line: Rgb,
}

impl Default for ColorScheme {
    /// The orange/yellow training scheme.
    fn default() -> Self {
        ColorScheme {
            body: Rgb([230, 120, 30]),
            appendage: Rgb([250, 220, 60]),
            eye: WHITE,
            background: WHITE,
            line: BLACK,
        }
    }
}

impl ColorScheme {
    pub fn color_for(&self, label: PartLabel) -> Rgb {
        match label {
            PartLabel::Background => self.background,
            PartLabel::Body => self.body,
            PartLabel::Appendage => self.appendage,
            PartLabel::Eye => self.eye,
        }
    }

    /// Every color a conforming colored image may contain.
    pub fn allowed_palette(&self) -> BTreeSet<Rgb> {
        [self.body, self.appendage, self.eye, self.background, self.line]
            .into_iter()
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("body", self.body),
            ("appendage", self.appendage),
            ("eye", self.eye),
            ("background", self.background),
        ] {
            if c == self.line {
                return Err(Error::InvalidParameter(format!(
                    "part color {name} equals the line color {}",
                    self.line.to_hex()
                )));
            }
        }
        Ok(())
    }
}

/// Decidable violations of the rule assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    /// More than one component touches the image border.
    BackgroundDisconnected,
    /// The largest component does not touch the border.
    BackgroundNotLargest,
    /// Fewer than two components exist.
    TooFewComponents,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Violation::BackgroundDisconnected => "background-disconnected",
            Violation::BackgroundNotLargest => "background-not-largest",
            Violation::TooFewComponents => "too-few-components",
        };
        f.write_str(s)
    }
}

/// Outcome of checking a drawing against the rule assumptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformanceReport {
    violations: Vec<Violation>,
}

impl ConformanceReport {
    pub fn new(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        ConformanceReport { violations }
    }

    pub fn conforms(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl std::fmt::Display for ConformanceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.conforms() {
            write!(f, "conforms")
        } else {
            let list: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "violations: {}", list.join(", "))
        }
    }
}

/// Component-id-indexed part labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<PartLabel>,
}

impl Labeling {
    pub fn new(labels: Vec<PartLabel>) -> Self {
        Labeling { labels }
    }

    pub fn label_of(&self, id: u32) -> Result<PartLabel> {
        self.labels
            .get(id as usize)
            .copied()
            .ok_or(Error::MissingLabel(id))
    }

    pub fn labels(&self) -> &[PartLabel] {
        &self.labels
    }

    pub fn count(&self, label: PartLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

/// Assigns a part label to every component.
///
/// Largest component becomes the background and the second largest the body;
/// each remaining component is an appendage unless its distance to the
/// background exceeds the eye threshold. Equal areas are broken by scan-order
/// id, and sub-noise components stay appendages.
pub fn classify_parts(map: &ComponentMap, params: &RuleParams) -> Result<Labeling> {
    if map.components().is_empty() {
        return Err(Error::EmptyInput("component map has no components".into()));
    }
    let ranked = map.ids_by_area_desc();
    let background = ranked[0];
    let body = ranked
        .iter()
        .skip(1)
        .copied()
        .find(|&id| map.components()[id as usize].area >= params.min_component_area);

    let mut labels = vec![PartLabel::Appendage; map.components().len()];
    labels[background as usize] = PartLabel::Background;
    if let Some(body) = body {
        labels[body as usize] = PartLabel::Body;
    }
    for &id in ranked.iter().skip(1) {
        if Some(id) == body {
            continue;
        }
        if map.components()[id as usize].area < params.min_component_area {
            continue;
        }
        let d = component_distance(map, id, background)?;
        if d > params.eye_distance_threshold {
            labels[id as usize] = PartLabel::Eye;
        }
    }
    Ok(Labeling { labels })
}

/// Checks the decidable rule assumptions: a single border-touching component,
/// the largest component on the border, and at least two components.
pub fn check_conformance(map: &ComponentMap, _params: &RuleParams) -> ConformanceReport {
    let mut violations = Vec::new();
    if map.components().len() < 2 {
        violations.push(Violation::TooFewComponents);
    }
    let border_touching = map
        .components()
        .iter()
        .filter(|c| c.touches_border)
        .count();
    if border_touching > 1 {
        violations.push(Violation::BackgroundDisconnected);
    }
    if let Some(&largest) = map.ids_by_area_desc().first() {
        if !map.components()[largest as usize].touches_border {
            violations.push(Violation::BackgroundNotLargest);
        }
    }
    ConformanceReport::new(violations)
}

/// Paints every component with its label's scheme color and every line pixel
/// with the line color.
pub fn colorize(
    img: &Raster,
    map: &ComponentMap,
    labeling: &Labeling,
    scheme: &ColorScheme,
) -> Result<Raster> {
    if img.width() != map.width() || img.height() != map.height() {
        return Err(Error::DimensionMismatch(format!(
            "raster is {}x{} but component map is {}x{}",
            img.width(),
            img.height(),
            map.width(),
            map.height()
        )));
    }
    if labeling.labels().len() != map.components().len() {
        return Err(Error::MissingLabel(labeling.labels().len() as u32));
    }
    let mut out = Raster::filled(img.width(), img.height(), scheme.background)
        .expect("source dims are valid");
    for y in 0..map.height() {
        for x in 0..map.width() {
            let label = map.label(x, y);
            let color = if label == LINE_SENTINEL {
                scheme.line
            } else {
                scheme.color_for(labeling.label_of(label)?)
            };
            out.set_pixel(x, y, color);
        }
    }
    Ok(out)
}

/// Colorizer output bundled with its conformance report.
#[derive(Debug, Clone)]
pub struct RuleColorOutcome {
    pub colored: Raster,
    pub report: ConformanceReport,
}

/// The full rule pipeline: binarize, label, check, classify, colorize.
///
/// A colored raster is produced even for non-conforming drawings; the report
/// carries the violations.
pub fn rule_color(
    img: &Raster,
    params: &RuleParams,
    scheme: &ColorScheme,
) -> Result<RuleColorOutcome> {
    let mask = binarize(img, DEFAULT_BINARIZE_THRESHOLD);
    let map = label_components(&mask, params.connectivity);
    let report = check_conformance(&map, params);
    if map.components().is_empty() {
        // All-ink canvas: nothing to classify, everything is line.
        let colored = Raster::filled(img.width(), img.height(), scheme.line)
            .expect("source dims are valid");
        return Ok(RuleColorOutcome { colored, report });
    }
    let labeling = classify_parts(&map, params)?;
    let colored = colorize(img, &map, &labeling, scheme)?;
    Ok(RuleColorOutcome { colored, report })
}
