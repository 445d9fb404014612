//! Core image representation, binarization, connected-component labeling and
//! exact pixel geometry.
//!
//! The whole pipeline works on a two-phase model: ink (drawn line) pixels and
//! white region pixels. [`binarize`] splits a raster into the two phases;
//! [`label_components`] partitions the region phase into connected components
//! with per-component metadata. White regions default to 4-connectivity while
//! ink is conceptually 8-connected, so a one-pixel line never leaks regions
//! through its diagonal corners.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default luminance threshold separating ink from paper.
pub const DEFAULT_BINARIZE_THRESHOLD: u8 = 128;

/// Sentinel label carried by line (ink) pixels in a [`ComponentMap`].
pub const LINE_SENTINEL: u32 = u32::MAX;

/// An 8-bit RGB triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rgb(pub [u8; 3]);

pub const BLACK: Rgb = Rgb([0, 0, 0]);
pub const WHITE: Rgb = Rgb([255, 255, 255]);

impl Rgb {
    /// Rec. 601 luma, rounded to the nearest integer.
    pub fn luminance(self) -> u8 {
        let [r, g, b] = self.0;
        let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
        y.round().clamp(0.0, 255.0) as u8
    }

    pub fn to_hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.0[0], self.0[1], self.0[2])
    }

    pub fn from_hex(s: &str) -> Result<Rgb> {
        let t = s.trim().trim_start_matches('#');
        if t.len() != 6 || !t.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Config(format!("not a #RRGGBB color: {s:?}")));
        }
        let v = u32::from_str_radix(t, 16).expect("validated hex");
        Ok(Rgb([(v >> 16) as u8, (v >> 8) as u8, v as u8]))
    }
}

impl Serialize for Rgb {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Rgb::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// A row-major grid of RGB pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

impl Raster {
    /// A `width`x`height` canvas filled with one color. Dimensions must be >= 1.
    pub fn filled(width: u32, height: u32, color: Rgb) -> Result<Raster> {
        Self::check_dims(width, height)?;
        Ok(Raster {
            width,
            height,
            pixels: vec![color; (width as usize) * (height as usize)],
        })
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<Rgb>) -> Result<Raster> {
        Self::check_dims(width, height)?;
        if pixels.len() != (width as usize) * (height as usize) {
            return Err(Error::DimensionMismatch(format!(
                "pixel buffer holds {} pixels, expected {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Raster {
            width,
            height,
            pixels,
        })
    }

    fn check_dims(width: u32, height: u32) -> Result<()> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "both dimensions must be >= 1".into(),
            });
        }
        Ok(())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        (y as usize) * (self.width as usize) + (x as usize)
    }

    /// Pixel at (x, y). Panics when out of bounds.
    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        self.pixels[self.index(x, y)]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: u32, y: u32, color: Rgb) {
        let i = self.index(x, y);
        self.pixels[i] = color;
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    /// Raw interleaved RGB bytes, row-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(&p.0);
        }
        out
    }

    /// Distinct colors present, in ascending RGB order.
    pub fn palette(&self) -> Vec<Rgb> {
        let mut colors: Vec<Rgb> = self.pixels.clone();
        colors.sort_unstable();
        colors.dedup();
        colors
    }

    /// Nearest-neighbor resample to `width`x`height`.
    pub fn resize_nn(&self, width: u32, height: u32) -> Result<Raster> {
        Self::check_dims(width, height)?;
        let mut out = Vec::with_capacity((width as usize) * (height as usize));
        for y in 0..height {
            // Map output pixel centers into source pixel space.
            let sy = ((y as f64 + 0.5) * self.height as f64 / height as f64 - 0.5)
                .round()
                .clamp(0.0, (self.height - 1) as f64) as u32;
            for x in 0..width {
                let sx = ((x as f64 + 0.5) * self.width as f64 / width as f64 - 0.5)
                    .round()
                    .clamp(0.0, (self.width - 1) as f64) as u32;
                out.push(self.pixel(sx, sy));
            }
        }
        Raster::from_pixels(width, height, out)
    }

    /// Reads an 8-bit PNG; grayscale and alpha inputs are promoted to RGB.
    pub fn load_png(path: impl AsRef<Path>) -> Result<Raster> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|e| Error::image(path, e))?;
        let rgb = img.to_rgb8();
        let (width, height) = rgb.dimensions();
        let pixels = rgb
            .pixels()
            .map(|p| Rgb([p.0[0], p.0[1], p.0[2]]))
            .collect();
        Raster::from_pixels(width, height, pixels)
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let buf: image::RgbImage =
            image::ImageBuffer::from_raw(self.width, self.height, self.to_bytes())
                .expect("buffer length matches dimensions");
        buf.save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| Error::image(path, e))
    }
}

/// Boolean ink mask aligned to the raster it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl LineMask {
    pub fn empty(width: u32, height: u32) -> LineMask {
        LineMask {
            width,
            height,
            bits: vec![false; (width as usize) * (height as usize)],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn is_line(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.bits[(y as usize) * (self.width as usize) + (x as usize)]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, line: bool) {
        debug_assert!(x < self.width && y < self.height);
        self.bits[(y as usize) * (self.width as usize) + (x as usize)] = line;
    }

    pub fn line_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Renders the mask as a black-on-white raster.
    pub fn to_raster(&self) -> Raster {
        let pixels = self
            .bits
            .iter()
            .map(|&b| if b { BLACK } else { WHITE })
            .collect();
        Raster::from_pixels(self.width, self.height, pixels).expect("mask dims are valid")
    }
}

/// Pixel adjacency used when growing components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Connectivity {
    #[default]
    #[serde(rename = "4-connected")]
    Four,
    #[serde(rename = "8-connected")]
    Eight,
}

/// Axis-aligned bounding box, inclusive of its edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

/// One connected region of non-line pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: u32,
    pub area: usize,
    pub bbox: Rect,
    pub centroid: (f64, f64),
    pub touches_border: bool,
}

/// Per-pixel component labels plus per-component metadata.
///
/// Non-line pixels carry the id of their component; line pixels carry
/// [`LINE_SENTINEL`]. Ids are dense and assigned in first-encounter
/// (row-major) scan order, so labeling is fully deterministic.
#[derive(Debug, Clone)]
pub struct ComponentMap {
    width: u32,
    height: u32,
    labels: Vec<u32>,
    components: Vec<Component>,
}

impl ComponentMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn label(&self, x: u32, y: u32) -> u32 {
        debug_assert!(x < self.width && y < self.height);
        self.labels[(y as usize) * (self.width as usize) + (x as usize)]
    }

    #[inline]
    pub fn is_line(&self, x: u32, y: u32) -> bool {
        self.label(x, y) == LINE_SENTINEL
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: u32) -> Result<&Component> {
        self.components
            .get(id as usize)
            .ok_or(Error::UnknownComponent(id))
    }

    /// Ids ordered by descending area, ties broken by ascending id.
    pub fn ids_by_area_desc(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.components.iter().map(|c| c.id).collect();
        ids.sort_by_key(|&id| (std::cmp::Reverse(self.components[id as usize].area), id));
        ids
    }

    /// Pixels of component `id` in scan order.
    pub fn pixels_of(&self, id: u32) -> Result<Vec<(u32, u32)>> {
        self.component(id)?;
        let mut out = Vec::with_capacity(self.components[id as usize].area);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.label(x, y) == id {
                    out.push((x, y));
                }
            }
        }
        Ok(out)
    }

    /// Pixels of component `id` that have an in-bounds 4-neighbor with a
    /// different label. The minimum distance between two disjoint components
    /// is always attained on such pixels.
    fn boundary_pixels_of(&self, id: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.label(x, y) != id {
                    continue;
                }
                let mut boundary = false;
                if x > 0 && self.label(x - 1, y) != id {
                    boundary = true;
                } else if x + 1 < self.width && self.label(x + 1, y) != id {
                    boundary = true;
                } else if y > 0 && self.label(x, y - 1) != id {
                    boundary = true;
                } else if y + 1 < self.height && self.label(x, y + 1) != id {
                    boundary = true;
                }
                if boundary {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Splits a raster into ink and region phases: a pixel is ink iff its rounded
/// luminance is strictly below `threshold`.
pub fn binarize(img: &Raster, threshold: u8) -> LineMask {
    let bits = img
        .pixels()
        .iter()
        .map(|&p| p.luminance() < threshold)
        .collect();
    LineMask {
        width: img.width(),
        height: img.height(),
        bits,
    }
}

/// Labels the connected components of the non-line phase.
///
/// Two-pass union-find labeling followed by a dense relabeling in row-major
/// first-encounter order.
pub fn label_components(mask: &LineMask, connectivity: Connectivity) -> ComponentMap {
    let (w, h) = (mask.width as usize, mask.height as usize);
    let n = w * h;
    let mut parent: Vec<u32> = (0..n as u32).collect();

    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    fn union(parent: &mut [u32], a: u32, b: u32) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi as usize] = lo;
        }
    }

    // First pass: union each region pixel with its already-scanned neighbors.
    for y in 0..h {
        for x in 0..w {
            if mask.bits[y * w + x] {
                continue;
            }
            let i = (y * w + x) as u32;
            if x > 0 && !mask.bits[y * w + x - 1] {
                union(&mut parent, i, (y * w + x - 1) as u32);
            }
            if y > 0 && !mask.bits[(y - 1) * w + x] {
                union(&mut parent, i, ((y - 1) * w + x) as u32);
            }
            if connectivity == Connectivity::Eight && y > 0 {
                if x > 0 && !mask.bits[(y - 1) * w + x - 1] {
                    union(&mut parent, i, ((y - 1) * w + x - 1) as u32);
                }
                if x + 1 < w && !mask.bits[(y - 1) * w + x + 1] {
                    union(&mut parent, i, ((y - 1) * w + x + 1) as u32);
                }
            }
        }
    }

    // Second pass: dense ids in first-encounter order plus metadata.
    let mut labels = vec![LINE_SENTINEL; n];
    let mut root_to_id: Vec<u32> = vec![u32::MAX; n];
    let mut components: Vec<Component> = Vec::new();
    let mut sums: Vec<(u64, u64)> = Vec::new();

    for y in 0..h {
        for x in 0..w {
            if mask.bits[y * w + x] {
                continue;
            }
            let root = find(&mut parent, (y * w + x) as u32);
            let id = if root_to_id[root as usize] == u32::MAX {
                let id = components.len() as u32;
                root_to_id[root as usize] = id;
                components.push(Component {
                    id,
                    area: 0,
                    bbox: Rect {
                        x: x as u32,
                        y: y as u32,
                        w: 1,
                        h: 1,
                    },
                    centroid: (0.0, 0.0),
                    touches_border: false,
                });
                sums.push((0, 0));
                id
            } else {
                root_to_id[root as usize]
            };
            labels[y * w + x] = id;

            let c = &mut components[id as usize];
            c.area += 1;
            let (x, y) = (x as u32, y as u32);
            let x0 = c.bbox.x.min(x);
            let y0 = c.bbox.y.min(y);
            let x1 = (c.bbox.x + c.bbox.w - 1).max(x);
            let y1 = (c.bbox.y + c.bbox.h - 1).max(y);
            c.bbox = Rect {
                x: x0,
                y: y0,
                w: x1 - x0 + 1,
                h: y1 - y0 + 1,
            };
            if x == 0 || y == 0 || x == mask.width - 1 || y == mask.height - 1 {
                c.touches_border = true;
            }
            sums[id as usize].0 += u64::from(x);
            sums[id as usize].1 += u64::from(y);
        }
    }

    for (c, &(sx, sy)) in components.iter_mut().zip(&sums) {
        c.centroid = (sx as f64 / c.area as f64, sy as f64 / c.area as f64);
    }

    ComponentMap {
        width: mask.width,
        height: mask.height,
        labels,
        components,
    }
}

/// Minimum Euclidean distance between pixel centers of two components;
/// zero when `a == b`.
///
/// The search is restricted to component boundary pixels, which is exact:
/// an interior pixel always has a same-component 4-neighbor strictly closer
/// to the other component.
pub fn component_distance(map: &ComponentMap, a: u32, b: u32) -> Result<f64> {
    map.component(a)?;
    map.component(b)?;
    if a == b {
        return Ok(0.0);
    }
    let pa = map.boundary_pixels_of(a);
    let pb = map.boundary_pixels_of(b);
    let mut best = u64::MAX;
    for &(ax, ay) in &pa {
        for &(bx, by) in &pb {
            let dx = i64::from(ax) - i64::from(bx);
            let dy = i64::from(ay) - i64::from(by);
            let d2 = (dx * dx + dy * dy) as u64;
            if d2 < best {
                best = d2;
            }
        }
    }
    Ok((best as f64).sqrt())
}

/// Recolors exactly the pixels labeled `id`; every other pixel is untouched.
pub fn fill_component(img: &Raster, map: &ComponentMap, id: u32, color: Rgb) -> Result<Raster> {
    if img.width() != map.width() || img.height() != map.height() {
        return Err(Error::DimensionMismatch(format!(
            "raster is {}x{} but component map is {}x{}",
            img.width(),
            img.height(),
            map.width(),
            map.height()
        )));
    }
    map.component(id)?;
    let mut out = img.clone();
    for y in 0..map.height() {
        for x in 0..map.width() {
            if map.label(x, y) == id {
                out.set_pixel(x, y, color);
            }
        }
    }
    Ok(out)
}
