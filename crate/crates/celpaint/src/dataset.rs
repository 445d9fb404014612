//! Builds, deduplicates and exports the AB training set from rule-colored
//! originals, manually fixed pairs, and augmentation catalogs.
//!
//! A build is a pure function of (plan, seed corpus): seeds come first, then
//! catalogs expand them round-robin over originals and pipelines until the
//! target count of unique pairs is reached, with per-pair seeds derived from
//! the plan's master seed. Two runs with the same plan write bit-identical
//! directories.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{
    apply_pipeline_to_pair, validate_catalog, ClassTag, PipelineSpec, Transform, TransformRecord,
};
use crate::error::{Error, Result};
use crate::raster::{binarize, Raster, DEFAULT_BINARIZE_THRESHOLD};
use crate::rules::{rule_color, ColorScheme, ConformanceReport, RuleParams};
use crate::seed::{derive_seed, seeded_rng, Fnv1a};

/// Aligned (line art, colored) pair with full transform provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ABPair {
    pub a: Raster,
    pub b: Raster,
    pub origin_id: String,
    pub provenance: Vec<TransformRecord>,
    pub class_tag: ClassTag,
}

const MANUAL_ORIGIN_PREFIX: &str = "manual:";

impl ABPair {
    /// Pairs ingested from hand-fixed drawings carry a marked origin; their
    /// line masks are allowed a configured mismatch budget.
    pub fn is_manual(&self) -> bool {
        self.origin_id.starts_with(MANUAL_ORIGIN_PREFIX)
    }

    pub fn has_gaps(&self) -> bool {
        self.provenance
            .iter()
            .any(|r| matches!(r.transform, Transform::Gaps(_)))
    }

    /// Kind names of the provenance chain, e.g. `["radial_warp", "affine"]`.
    pub fn provenance_kinds(&self) -> Vec<String> {
        self.provenance
            .iter()
            .map(|r| r.transform.kind().to_string())
            .collect()
    }
}

/// 64-bit FNV-1a over the raw pixel bytes of A then B.
pub fn pair_hash(pair: &ABPair) -> u64 {
    let mut h = Fnv1a::new();
    h.update(&pair.a.to_bytes());
    h.update(&pair.b.to_bytes());
    h.finish()
}

/// Checks the pair invariants: equal dimensions, B's palette inside the
/// scheme, and line-mask agreement between A's ink and B's line-colored
/// pixels.
///
/// Gap erasures legitimately leave B with lines that A lacks; manual pairs
/// get `manual_slack` pixels of leeway in both directions.
pub fn validate_pair(pair: &ABPair, scheme: &ColorScheme, manual_slack: usize) -> Result<()> {
    if pair.a.width() != pair.b.width() || pair.a.height() != pair.b.height() {
        return Err(Error::DimensionMismatch(format!(
            "pair {}: A is {}x{}, B is {}x{}",
            pair.origin_id,
            pair.a.width(),
            pair.a.height(),
            pair.b.width(),
            pair.b.height()
        )));
    }
    let allowed = scheme.allowed_palette();
    for color in pair.b.palette() {
        if !allowed.contains(&color) {
            return Err(Error::InvalidParameter(format!(
                "pair {}: off-palette color {} in B",
                pair.origin_id,
                color.to_hex()
            )));
        }
    }
    let mask_a = binarize(&pair.a, DEFAULT_BINARIZE_THRESHOLD);
    let mut ink_not_line = 0usize;
    let mut line_not_ink = 0usize;
    for y in 0..pair.a.height() {
        for x in 0..pair.a.width() {
            let ink = mask_a.is_line(x, y);
            let line = pair.b.pixel(x, y) == scheme.line;
            if ink && !line {
                ink_not_line += 1;
            }
            if line && !ink {
                line_not_ink += 1;
            }
        }
    }
    let slack = if pair.is_manual() { manual_slack } else { 0 };
    if ink_not_line > slack {
        return Err(Error::InvalidParameter(format!(
            "pair {}: {ink_not_line} ink pixels in A without a line in B (slack {slack})",
            pair.origin_id
        )));
    }
    if !pair.has_gaps() && line_not_ink > slack {
        return Err(Error::InvalidParameter(format!(
            "pair {}: {line_not_ink} line pixels in B without ink in A (slack {slack})",
            pair.origin_id
        )));
    }
    Ok(())
}

/// An uncolored original drawing ready for rule coloring.
#[derive(Debug, Clone)]
pub struct OriginalDrawing {
    pub id: String,
    pub class_tag: ClassTag,
    pub image: Raster,
}

/// Why an input did not become a seed pair.
#[derive(Debug, Clone)]
pub enum RejectReason {
    NonConforming(ConformanceReport),
    Unreadable(String),
    InvalidPair(String),
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::NonConforming(report) => write!(f, "{report}"),
            RejectReason::Unreadable(e) => write!(f, "unreadable: {e}"),
            RejectReason::InvalidPair(e) => write!(f, "invalid pair: {e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reject {
    pub id: String,
    pub reason: RejectReason,
}

/// Seed pairs plus everything that was turned away, so nothing is dropped
/// silently.
#[derive(Debug, Clone, Default)]
pub struct SeedBatch {
    pub pairs: Vec<ABPair>,
    pub rejects: Vec<Reject>,
}

/// Rule-colors original drawings into seed pairs; non-conforming drawings are
/// returned with their violation reports. The A side is normalized to a pure
/// black-and-white rendering of its ink mask.
pub fn rule_color_originals(
    drawings: &[OriginalDrawing],
    params: &RuleParams,
    scheme: &ColorScheme,
) -> Result<SeedBatch> {
    if drawings.is_empty() {
        return Err(Error::EmptyInput("no original drawings".into()));
    }
    params.validate()?;
    scheme.validate()?;
    let mut batch = SeedBatch::default();
    for drawing in drawings {
        let outcome = rule_color(&drawing.image, params, scheme)?;
        if outcome.report.conforms() {
            let mask = binarize(&drawing.image, DEFAULT_BINARIZE_THRESHOLD);
            batch.pairs.push(ABPair {
                a: mask.to_raster(),
                b: outcome.colored,
                origin_id: drawing.id.clone(),
                provenance: Vec::new(),
                class_tag: drawing.class_tag,
            });
        } else {
            batch.rejects.push(Reject {
                id: drawing.id.clone(),
                reason: RejectReason::NonConforming(outcome.report),
            });
        }
    }
    Ok(batch)
}

/// Admits hand-fixed (A, B) pairs as seeds after validating dimensions,
/// palette and line-mask agreement within `mask_slack` pixels.
///
/// Inputs are matched by name; the two lists must name the same set.
pub fn ingest_manual_pairs(
    a_images: &[(String, Raster)],
    b_images: &[(String, Raster)],
    class_tag: ClassTag,
    scheme: &ColorScheme,
    mask_slack: usize,
) -> Result<SeedBatch> {
    if a_images.len() != b_images.len() {
        return Err(Error::InvalidParameter(format!(
            "manual pair count mismatch: {} A files vs {} B files",
            a_images.len(),
            b_images.len()
        )));
    }
    let mut b_by_name: BTreeMap<&str, &Raster> =
        b_images.iter().map(|(n, r)| (n.as_str(), r)).collect();
    let mut batch = SeedBatch::default();
    for (name, a) in a_images {
        let Some(b) = b_by_name.remove(name.as_str()) else {
            return Err(Error::InvalidParameter(format!(
                "manual pair {name:?} has no matching B file"
            )));
        };
        let mask = binarize(a, DEFAULT_BINARIZE_THRESHOLD);
        let pair = ABPair {
            a: mask.to_raster(),
            b: b.clone(),
            origin_id: format!("{MANUAL_ORIGIN_PREFIX}{name}"),
            provenance: Vec::new(),
            class_tag,
        };
        match validate_pair(&pair, scheme, mask_slack) {
            Ok(()) => batch.pairs.push(pair),
            Err(e) => batch.rejects.push(Reject {
                id: name.clone(),
                reason: RejectReason::InvalidPair(e.to_string()),
            }),
        }
    }
    Ok(batch)
}

/// Originals to load from disk for one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginalsSource {
    pub class_tag: ClassTag,
    pub files: Vec<PathBuf>,
}

/// Manual pair files, matched by file name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManualSource {
    pub class_tag: ClassTag,
    pub a_files: Vec<PathBuf>,
    pub b_files: Vec<PathBuf>,
    pub mask_slack: usize,
}

/// The paper's target range for training pair counts.
pub const TARGET_RANGE: std::ops::RangeInclusive<usize> = 400..=1100;

/// Declarative description of a full dataset build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetPlan {
    pub originals: Vec<OriginalsSource>,
    pub manual: Option<ManualSource>,
    pub rule_params: RuleParams,
    pub scheme: ColorScheme,
    pub catalogs: BTreeMap<ClassTag, Vec<PipelineSpec>>,
    pub target_count: usize,
    /// Suppresses the warning for targets outside the 400..=1100 range.
    pub allow_target_outside_range: bool,
    pub train_fraction: f64,
    pub export_size: u32,
    pub master_seed: u64,
}

impl Default for DatasetPlan {
    fn default() -> Self {
        let mut catalogs = BTreeMap::new();
        catalogs.insert(ClassTag::Flower, crate::augment::default_flower_catalog());
        catalogs.insert(
            ClassTag::Creature,
            crate::augment::default_creature_catalog(),
        );
        DatasetPlan {
            originals: Vec::new(),
            manual: None,
            rule_params: RuleParams::default(),
            scheme: ColorScheme::default(),
            catalogs,
            target_count: 506,
            allow_target_outside_range: false,
            train_fraction: 0.9,
            export_size: 256,
            master_seed: 0,
        }
    }
}

/// Expansion result: the unique pairs plus non-fatal warnings.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub pairs: Vec<ABPair>,
    pub warnings: Vec<String>,
}

fn manual_slack(plan: &DatasetPlan) -> usize {
    plan.manual.as_ref().map(|m| m.mask_slack).unwrap_or(0)
}

/// Expands seed pairs through the plan's catalogs until exactly
/// `target_count` unique pairs exist.
///
/// Expansion is round-robin over pipelines then originals, so truncation at
/// the target keeps per-original balance; each application's seeds derive
/// from (plan seed, pipeline master seed, origin index, pipeline index, step
/// index). Duplicates by content hash are skipped; running out of catalog
/// capacity before the target is an error naming the shortfall.
pub fn build_dataset(plan: &DatasetPlan, seeds: &[ABPair]) -> Result<BuildOutput> {
    if seeds.is_empty() {
        return Err(Error::EmptyInput("no seed pairs available".into()));
    }
    if plan.target_count < seeds.len() {
        return Err(Error::TargetBelowSeeds {
            target: plan.target_count,
            seeds: seeds.len(),
        });
    }
    let mut warnings = Vec::new();
    if !TARGET_RANGE.contains(&plan.target_count) && !plan.allow_target_outside_range {
        warnings.push(format!(
            "target_count {} is outside the {}..={} training range",
            plan.target_count,
            TARGET_RANGE.start(),
            TARGET_RANGE.end()
        ));
    }
    for (class, catalog) in &plan.catalogs {
        let violations = validate_catalog(catalog);
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidPipeline(format!(
                "{class} catalog: {}",
                list.join("; ")
            )));
        }
    }

    let slack = manual_slack(plan);
    for seed in seeds {
        validate_pair(seed, &plan.scheme, slack)?;
    }

    let mut seen: HashSet<u64> = HashSet::new();
    let mut out: Vec<ABPair> = Vec::with_capacity(plan.target_count);
    for seed in seeds {
        if seen.insert(pair_hash(seed)) {
            out.push(seed.clone());
        }
    }

    let max_rounds = plan
        .catalogs
        .values()
        .map(|c| c.len())
        .max()
        .unwrap_or(0);
    'rounds: for round in 0..max_rounds {
        if out.len() == plan.target_count {
            break;
        }
        let work: Vec<(usize, &ABPair, &PipelineSpec)> = seeds
            .iter()
            .enumerate()
            .filter_map(|(oi, seed)| {
                plan.catalogs
                    .get(&seed.class_tag)
                    .and_then(|catalog| catalog.get(round))
                    .map(|pipeline| (oi, seed, pipeline))
            })
            .collect();
        let candidates: Vec<Result<ABPair>> = work
            .par_iter()
            .map(|(oi, seed, pipeline)| {
                apply_pipeline_to_pair(seed, pipeline, plan.master_seed, *oi, round)
            })
            .collect();
        for candidate in candidates {
            let pair = candidate?;
            validate_pair(&pair, &plan.scheme, slack)?;
            if seen.insert(pair_hash(&pair)) {
                out.push(pair);
                if out.len() == plan.target_count {
                    break 'rounds;
                }
            }
        }
    }

    if out.len() < plan.target_count {
        return Err(Error::CatalogExhausted {
            produced: out.len(),
            target: plan.target_count,
            shortfall: plan.target_count - out.len(),
        });
    }
    Ok(BuildOutput {
        pairs: out,
        warnings,
    })
}

/// Removes pairs whose (A, B) content hash already appeared; the first
/// occurrence wins.
pub fn dedup(pairs: Vec<ABPair>) -> Vec<ABPair> {
    let mut seen = HashSet::new();
    pairs
        .into_iter()
        .filter(|p| seen.insert(pair_hash(p)))
        .collect()
}

/// One manifest line per exported composite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub file: String,
    pub origin_id: String,
    pub class_tag: ClassTag,
    pub provenance: Vec<String>,
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        for record in &self.records {
            let line = serde_json::to_string(record)
                .map_err(|e| Error::Config(format!("manifest record: {e}")))?;
            writeln!(file, "{line}").map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut records = Vec::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(
                serde_json::from_str(&line)
                    .map_err(|e| Error::Config(format!("manifest line: {e}")))?,
            );
        }
        Ok(Manifest { records })
    }
}

/// Builds the side-by-side composite for one pair: both halves resized to
/// `size`x`size`, the A half re-binarized to pure black and white, A on the
/// left.
pub fn composite_pair(pair: &ABPair, size: u32) -> Result<Raster> {
    let a = pair.a.resize_nn(size, size)?;
    let a = binarize(&a, DEFAULT_BINARIZE_THRESHOLD).to_raster();
    let b = pair.b.resize_nn(size, size)?;
    let mut out = Raster::filled(size * 2, size, crate::raster::WHITE)?;
    for y in 0..size {
        for x in 0..size {
            out.set_pixel(x, y, a.pixel(x, y));
            out.set_pixel(x + size, y, b.pixel(x, y));
        }
    }
    Ok(out)
}

/// Writes composites into `train/` and `val/` under `out_dir` with a seeded
/// shuffle split, plus a line-delimited manifest.
pub fn export(
    pairs: &[ABPair],
    out_dir: &Path,
    size: u32,
    train_fraction: f64,
    master_seed: u64,
) -> Result<Manifest> {
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(Error::InvalidParameter(format!(
            "train_fraction must be in [0,1], got {train_fraction}"
        )));
    }
    let train_dir = out_dir.join("train");
    let val_dir = out_dir.join("val");
    std::fs::create_dir_all(&train_dir).map_err(|e| Error::io(&train_dir, e))?;
    std::fs::create_dir_all(&val_dir).map_err(|e| Error::io(&val_dir, e))?;

    let mut indices: Vec<usize> = (0..pairs.len()).collect();
    let mut rng = seeded_rng(derive_seed(master_seed, &[0x53504c49])); // "SPLI"
    indices.shuffle(&mut rng);
    let n_train = ((pairs.len() as f64) * train_fraction).round() as usize;
    let n_train = n_train.min(pairs.len());

    let composites: Vec<Result<Raster>> = pairs
        .par_iter()
        .map(|pair| composite_pair(pair, size))
        .collect();
    let mut by_pair: Vec<Option<Raster>> = Vec::with_capacity(pairs.len());
    for c in composites {
        by_pair.push(Some(c?));
    }

    let mut records = Vec::with_capacity(pairs.len());
    let mut hashes = HashSet::new();
    for (slot, &pair_index) in indices.iter().enumerate() {
        let (subdir, name_index) = if slot < n_train {
            ("train", slot)
        } else {
            ("val", slot - n_train)
        };
        let file = format!("{subdir}/{name_index:05}.png");
        let composite = by_pair[pair_index].take().expect("each pair used once");
        let mut h = Fnv1a::new();
        h.update(&composite.to_bytes());
        let hash = h.finish();
        if !hashes.insert(hash) {
            return Err(Error::InvalidParameter(format!(
                "exported content hash collision at {file}"
            )));
        }
        composite.save_png(out_dir.join(&file))?;
        let pair = &pairs[pair_index];
        records.push(ManifestRecord {
            file,
            origin_id: pair.origin_id.clone(),
            class_tag: pair.class_tag,
            provenance: pair.provenance_kinds(),
            content_hash: format!("{hash:016x}"),
        });
    }
    // Manifest in train-then-val, ascending-index order.
    records.sort_by(|a, b| a.file.cmp(&b.file));
    let manifest = Manifest { records };
    manifest.write(&out_dir.join("manifest.jsonl"))?;
    Ok(manifest)
}

/// Counts printed by a full plan run.
#[derive(Debug, Clone)]
pub struct PlanRun {
    pub seed_count: usize,
    pub rejects: Vec<Reject>,
    pub generated: usize,
    pub exported: usize,
    pub manifest: Manifest,
    pub warnings: Vec<String>,
}

fn file_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}

fn load_named(files: &[PathBuf]) -> Vec<(String, Result<Raster>)> {
    files
        .iter()
        .map(|p| (file_id(p), Raster::load_png(p)))
        .collect()
}

/// The whole build: load and rule-color originals, ingest manual pairs,
/// expand, dedup, export.
pub fn run_plan(plan: &DatasetPlan, out_dir: &Path) -> Result<PlanRun> {
    let mut rejects = Vec::new();
    let mut drawings = Vec::new();
    for source in &plan.originals {
        for (id, loaded) in load_named(&source.files) {
            match loaded {
                Ok(image) => drawings.push(OriginalDrawing {
                    id,
                    class_tag: source.class_tag,
                    image,
                }),
                Err(e) => rejects.push(Reject {
                    id,
                    reason: RejectReason::Unreadable(e.to_string()),
                }),
            }
        }
    }
    if drawings.is_empty() && plan.manual.is_none() {
        return Err(Error::EmptyInput("plan lists no readable originals".into()));
    }

    let mut seeds = Vec::new();
    if !drawings.is_empty() {
        let batch = rule_color_originals(&drawings, &plan.rule_params, &plan.scheme)?;
        seeds.extend(batch.pairs);
        rejects.extend(batch.rejects);
    }

    if let Some(manual) = &plan.manual {
        let load_all = |files: &[PathBuf]| -> Result<Vec<(String, Raster)>> {
            let mut out = Vec::new();
            for (id, loaded) in load_named(files) {
                out.push((id, loaded?));
            }
            Ok(out)
        };
        let a_images = load_all(&manual.a_files)?;
        let b_images = load_all(&manual.b_files)?;
        let batch = ingest_manual_pairs(
            &a_images,
            &b_images,
            manual.class_tag,
            &plan.scheme,
            manual.mask_slack,
        )?;
        seeds.extend(batch.pairs);
        rejects.extend(batch.rejects);
    }

    let seed_count = seeds.len();
    let built = build_dataset(plan, &seeds)?;
    let generated = built.pairs.len() - seed_count;
    let pairs = dedup(built.pairs);
    let manifest = export(
        &pairs,
        out_dir,
        plan.export_size,
        plan.train_fraction,
        plan.master_seed,
    )?;
    Ok(PlanRun {
        seed_count,
        rejects,
        generated,
        exported: pairs.len(),
        manifest,
        warnings: built.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{apply_pipeline_to_pair, AffineSpec, PipelineSpec};
    use crate::raster::{Rgb, BLACK, WHITE};

    /// A conforming drawing: a box outline whose position varies with `k`.
    fn box_drawing(k: u32) -> Raster {
        let mut img = Raster::filled(100, 100, WHITE).unwrap();
        let x0 = 10 + (k % 5) * 8;
        let y0 = 12 + (k % 7) * 6;
        for x in x0..x0 + 30 {
            img.set_pixel(x, y0, BLACK);
            img.set_pixel(x, y0 + 20, BLACK);
        }
        for y in y0..=y0 + 20 {
            img.set_pixel(x0, y, BLACK);
            img.set_pixel(x0 + 29, y, BLACK);
        }
        img
    }

    /// A background-splitting drawing: a full-height double line.
    fn split_drawing() -> Raster {
        let mut img = Raster::filled(100, 100, WHITE).unwrap();
        for y in 0..100 {
            img.set_pixel(40, y, BLACK);
            img.set_pixel(41, y, BLACK);
        }
        img
    }

    fn originals(n_good: usize, n_split: usize) -> Vec<OriginalDrawing> {
        let mut out = Vec::new();
        for k in 0..n_good {
            out.push(OriginalDrawing {
                id: format!("good_{k:02}"),
                class_tag: ClassTag::Flower,
                image: box_drawing(k as u32),
            });
        }
        for k in 0..n_split {
            out.push(OriginalDrawing {
                id: format!("split_{k:02}"),
                class_tag: ClassTag::Flower,
                image: split_drawing(),
            });
        }
        out
    }

    fn tiny_catalog(n: usize) -> BTreeMap<ClassTag, Vec<PipelineSpec>> {
        let mut steps = Vec::new();
        for i in 0..n {
            steps.push(PipelineSpec::new(
                ClassTag::Flower,
                i as u64,
                vec![crate::augment::Transform::Affine(AffineSpec {
                    rotate: 5.0 + i as f64 * 7.0,
                    ..AffineSpec::default()
                })],
            ));
        }
        let mut map = BTreeMap::new();
        map.insert(ClassTag::Flower, steps);
        map
    }

    fn plan_with(target: usize, catalog_size: usize) -> DatasetPlan {
        DatasetPlan {
            catalogs: tiny_catalog(catalog_size),
            target_count: target,
            allow_target_outside_range: true,
            ..DatasetPlan::default()
        }
    }

    #[test]
    fn rule_color_originals_splits_conforming_and_rejected() {
        let batch = rule_color_originals(
            &originals(10, 2),
            &RuleParams::default(),
            &ColorScheme::default(),
        )
        .unwrap();
        assert_eq!(batch.pairs.len(), 10);
        assert_eq!(batch.rejects.len(), 2);
        for reject in &batch.rejects {
            match &reject.reason {
                RejectReason::NonConforming(report) => {
                    assert!(report
                        .violations()
                        .contains(&crate::rules::Violation::BackgroundDisconnected));
                }
                other => panic!("unexpected reason {other}"),
            }
        }
        // Nothing lost silently.
        assert_eq!(batch.pairs.len() + batch.rejects.len(), 12);
    }

    #[test]
    fn rule_color_originals_rejects_empty_input() {
        assert!(matches!(
            rule_color_originals(&[], &RuleParams::default(), &ColorScheme::default()),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn rule_color_originals_all_conforming_has_no_rejects() {
        let batch = rule_color_originals(
            &originals(8, 0),
            &RuleParams::default(),
            &ColorScheme::default(),
        )
        .unwrap();
        assert!(batch.rejects.is_empty());
        for pair in &batch.pairs {
            validate_pair(pair, &ColorScheme::default(), 0).unwrap();
        }
    }

    fn manual_pair() -> (Raster, Raster) {
        let drawing = box_drawing(1);
        let outcome = rule_color(
            &drawing,
            &RuleParams::default(),
            &ColorScheme::default(),
        )
        .unwrap();
        (drawing, outcome.colored)
    }

    #[test]
    fn manual_valid_pair_is_admitted() {
        let (a, b) = manual_pair();
        let batch = ingest_manual_pairs(
            &[("fix1".into(), a)],
            &[("fix1".into(), b)],
            ClassTag::Creature,
            &ColorScheme::default(),
            16,
        )
        .unwrap();
        assert_eq!(batch.pairs.len(), 1);
        assert!(batch.pairs[0].is_manual());
        assert_eq!(batch.pairs[0].class_tag, ClassTag::Creature);
    }

    #[test]
    fn manual_dimension_mismatch_is_rejected() {
        let (a, _) = manual_pair();
        let b = Raster::filled(64, 64, WHITE).unwrap();
        let batch = ingest_manual_pairs(
            &[("fix1".into(), a)],
            &[("fix1".into(), b)],
            ClassTag::Creature,
            &ColorScheme::default(),
            16,
        )
        .unwrap();
        assert!(batch.pairs.is_empty());
        assert_eq!(batch.rejects.len(), 1);
    }

    #[test]
    fn manual_off_palette_is_rejected() {
        let (a, b) = manual_pair();
        // Recolor one region with an off-palette color.
        let mask = binarize(&b, DEFAULT_BINARIZE_THRESHOLD);
        let map = crate::raster::label_components(&mask, crate::raster::Connectivity::Four);
        let b_bad =
            crate::raster::fill_component(&b, &map, 1, Rgb([12, 200, 99])).unwrap();
        let batch = ingest_manual_pairs(
            &[("fix1".into(), a)],
            &[("fix1".into(), b_bad)],
            ClassTag::Creature,
            &ColorScheme::default(),
            16,
        )
        .unwrap();
        assert_eq!(batch.rejects.len(), 1);
        match &batch.rejects[0].reason {
            RejectReason::InvalidPair(msg) => assert!(msg.contains("off-palette")),
            other => panic!("unexpected reason {other}"),
        }
    }

    #[test]
    fn manual_count_mismatch_is_an_error() {
        let (a, _) = manual_pair();
        assert!(ingest_manual_pairs(
            &[("fix1".into(), a)],
            &[],
            ClassTag::Creature,
            &ColorScheme::default(),
            16,
        )
        .is_err());
    }

    fn seed_pairs(n: usize) -> Vec<ABPair> {
        rule_color_originals(
            &originals(n, 0),
            &RuleParams::default(),
            &ColorScheme::default(),
        )
        .unwrap()
        .pairs
    }

    #[test]
    fn build_rejects_target_below_seed_count() {
        let seeds = seed_pairs(10);
        let plan = plan_with(5, 4);
        assert!(matches!(
            build_dataset(&plan, &seeds),
            Err(Error::TargetBelowSeeds {
                target: 5,
                seeds: 10
            })
        ));
    }

    #[test]
    fn build_errors_with_shortfall_when_catalog_exhausts() {
        let seeds = seed_pairs(2);
        let plan = plan_with(10, 1);
        match build_dataset(&plan, &seeds) {
            Err(Error::CatalogExhausted {
                produced,
                target,
                shortfall,
            }) => {
                assert_eq!(produced, 4);
                assert_eq!(target, 10);
                assert_eq!(shortfall, 6);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn build_reaches_target_and_is_deterministic() {
        let seeds = seed_pairs(4);
        let plan = plan_with(14, 4);
        let one = build_dataset(&plan, &seeds).unwrap();
        let two = build_dataset(&plan, &seeds).unwrap();
        assert_eq!(one.pairs.len(), 14);
        let h1: Vec<u64> = one.pairs.iter().map(pair_hash).collect();
        let h2: Vec<u64> = two.pairs.iter().map(pair_hash).collect();
        assert_eq!(h1, h2);
        // All unique.
        let set: HashSet<u64> = h1.iter().copied().collect();
        assert_eq!(set.len(), 14);
        // Warning about the out-of-range target is suppressed by the flag.
        assert!(one.warnings.is_empty());
    }

    #[test]
    fn build_warns_on_target_outside_range() {
        let seeds = seed_pairs(4);
        let mut plan = plan_with(14, 4);
        plan.allow_target_outside_range = false;
        let out = build_dataset(&plan, &seeds).unwrap();
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn dedup_removes_exact_duplicates_first_wins() {
        let seeds = seed_pairs(2);
        let mut list = vec![seeds[0].clone(), seeds[1].clone(), seeds[0].clone()];
        list[2].origin_id = "copy".into();
        let out = dedup(list);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].origin_id, "good_00");
        let unique = dedup(seeds.clone());
        assert_eq!(unique.len(), 2);
    }

    #[test]
    fn dedup_collapses_commuting_pipeline_outputs() {
        let seeds = seed_pairs(1);
        let a = PipelineSpec::new(
            ClassTag::Flower,
            0,
            vec![
                crate::augment::Transform::Affine(AffineSpec {
                    mirror_x: true,
                    ..AffineSpec::default()
                }),
                crate::augment::Transform::Affine(AffineSpec {
                    rotate: 90.0,
                    ..AffineSpec::default()
                }),
            ],
        );
        let b = PipelineSpec::new(
            ClassTag::Flower,
            0,
            vec![
                crate::augment::Transform::Affine(AffineSpec {
                    rotate: 90.0,
                    ..AffineSpec::default()
                }),
                crate::augment::Transform::Affine(AffineSpec {
                    mirror_y: true,
                    ..AffineSpec::default()
                }),
            ],
        );
        let p1 = apply_pipeline_to_pair(&seeds[0], &a, 0, 0, 0).unwrap();
        let p2 = apply_pipeline_to_pair(&seeds[0], &b, 0, 0, 1).unwrap();
        assert_eq!(pair_hash(&p1), pair_hash(&p2));
        let out = dedup(vec![p1, p2]);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn export_writes_composites_and_manifest() {
        let seeds = seed_pairs(3);
        let dir = tempfile::tempdir().unwrap();
        let manifest = export(&seeds, dir.path(), 64, 0.67, 9).unwrap();
        assert_eq!(manifest.records.len(), 3);
        // 0.67 * 3 rounds to 2 train, 1 val.
        let trains = manifest
            .records
            .iter()
            .filter(|r| r.file.starts_with("train/"))
            .count();
        assert_eq!(trains, 2);
        for record in &manifest.records {
            let img = Raster::load_png(dir.path().join(&record.file)).unwrap();
            assert_eq!((img.width(), img.height()), (128, 64));
        }
        let reread = Manifest::read(&dir.path().join("manifest.jsonl")).unwrap();
        assert_eq!(reread, manifest);
    }

    #[test]
    fn export_midline_split_round_trips() {
        let seeds = seed_pairs(1);
        let dir = tempfile::tempdir().unwrap();
        let manifest = export(&seeds, dir.path(), 64, 1.0, 9).unwrap();
        let composite = Raster::load_png(dir.path().join(&manifest.records[0].file)).unwrap();
        let a_expect = binarize(
            &seeds[0].a.resize_nn(64, 64).unwrap(),
            DEFAULT_BINARIZE_THRESHOLD,
        )
        .to_raster();
        let b_expect = seeds[0].b.resize_nn(64, 64).unwrap();
        for y in 0..64 {
            for x in 0..64 {
                assert_eq!(composite.pixel(x, y), a_expect.pixel(x, y));
                assert_eq!(composite.pixel(x + 64, y), b_expect.pixel(x, y));
            }
        }
    }

    #[test]
    fn validate_pair_accepts_gap_asymmetry_only_with_gap_provenance() {
        let seeds = seed_pairs(1);
        let mut damaged = seeds[0].clone();
        // Erase a known ink run from A. Without a gap record, B now has line
        // pixels A lacks and validation must fail; with one it must pass.
        let mask = binarize(&damaged.a, DEFAULT_BINARIZE_THRESHOLD);
        let mut erased = 0;
        'outer: for y in 0..damaged.a.height() {
            for x in 0..damaged.a.width() {
                if mask.is_line(x, y) {
                    damaged.a.set_pixel(x, y, crate::raster::WHITE);
                    erased += 1;
                    if erased == 10 {
                        break 'outer;
                    }
                }
            }
        }
        assert_eq!(erased, 10);
        assert!(validate_pair(&damaged, &ColorScheme::default(), 0).is_err());
        damaged.provenance.push(TransformRecord {
            transform: Transform::Gaps(crate::augment::GapSpec {
                stroke_count: 1,
                stroke_width: 3,
                stroke_length: 10,
                seed: 3,
            }),
        });
        validate_pair(&damaged, &ColorScheme::default(), 0).unwrap();
    }
}
