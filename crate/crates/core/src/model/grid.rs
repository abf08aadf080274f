use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{BoundingBox, PointI};

/// Default "do not care" label.
pub const DEFAULT_IGNORE: u16 = 255;

/// Row-major grid of class ids with a reserved ignore value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelGrid {
    width: usize,
    height: usize,
    labels: Vec<u16>,
    ignore_value: u16,
}

impl LabelGrid {
    pub fn new(width: usize, height: usize, labels: Vec<u16>, ignore_value: u16) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid(format!("zero-sized grid {width}x{height}")));
        }
        if labels.len() != width * height {
            return Err(Error::InvalidGrid(format!("{} labels for a {width}x{height} grid", labels.len())));
        }
        Ok(Self { width, height, labels, ignore_value })
    }

    /// Grid filled with a single value.
    pub fn filled(width: usize, height: usize, value: u16, ignore_value: u16) -> Result<Self> {
        Self::new(width, height, vec![value; width * height], ignore_value)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ignore_value(&self) -> u16 {
        self.ignore_value
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.labels[y * self.width + x]
    }

    /// Label at a possibly out-of-bounds point.
    pub fn at(&self, p: PointI) -> Option<u16> {
        if self.in_bounds(p) {
            Some(self.get(p.x as usize, p.y as usize))
        } else {
            None
        }
    }

    pub fn set(&mut self, x: usize, y: usize, value: u16) {
        self.labels[y * self.width + x] = value;
    }

    pub fn in_bounds(&self, p: PointI) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    pub fn is_ignore(&self, x: usize, y: usize) -> bool {
        self.get(x, y) == self.ignore_value
    }

    /// Sorted set of non-ignore class ids present.
    pub fn classes_present(&self) -> Vec<u16> {
        let set: BTreeSet<u16> = self.labels.iter().copied().filter(|&v| v != self.ignore_value).collect();
        set.into_iter().collect()
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|&&v| v != self.ignore_value).count()
    }

    /// Maps every label through `f`; the ignore value is passed through too.
    pub fn map_labels(&self, ignore_value: u16, f: impl Fn(u16) -> u16) -> LabelGrid {
        LabelGrid {
            width: self.width,
            height: self.height,
            labels: self.labels.iter().map(|&v| f(v)).collect(),
            ignore_value,
        }
    }
}

/// Boolean mask over a rectangular window of a `frame_width × frame_height`
/// frame. Cells outside the window are false.
///
/// Blob masks are stored cropped to their bounding box plus a one-pixel
/// margin so per-blob kernels do not touch the whole image; all coordinates
/// in the public API are frame coordinates.
#[derive(Debug, Clone)]
pub struct Mask {
    frame_width: usize,
    frame_height: usize,
    x0: usize,
    y0: usize,
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl Mask {
    /// All-false mask covering a whole frame.
    pub fn new(width: usize, height: usize) -> Self {
        Self::window(width, height, 0, 0, width, height)
    }

    /// All-false mask over the window `[x0, x0+width) × [y0, y0+height)`.
    pub fn window(frame_width: usize, frame_height: usize, x0: usize, y0: usize, width: usize, height: usize) -> Self {
        assert!(x0 + width <= frame_width && y0 + height <= frame_height, "window exceeds frame");
        Self { frame_width, frame_height, x0, y0, width, height, cells: vec![false; width * height] }
    }

    /// Full-frame mask from row-major booleans.
    pub fn from_cells(width: usize, height: usize, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::InvalidGrid(format!("{} cells for a {width}x{height} mask", cells.len())));
        }
        Ok(Self { frame_width: width, frame_height: height, x0: 0, y0: 0, width, height, cells })
    }

    /// Full-frame mask from rows of `'#'`/`'.'` characters; handy in tests.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let cells = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), width, "ragged ascii mask");
                r.bytes().map(|b| b == b'#')
            })
            .collect();
        Self::from_cells(width, height, cells).expect("dimensions checked")
    }

    /// Same frame and window, all false.
    pub fn empty_like(&self) -> Self {
        Self { cells: vec![false; self.cells.len()], ..*self }
    }

    pub fn frame_width(&self) -> usize {
        self.frame_width
    }

    pub fn frame_height(&self) -> usize {
        self.frame_height
    }

    /// Window origin and size as `(x0, y0, width, height)`.
    pub fn window_rect(&self) -> (usize, usize, usize, usize) {
        (self.x0, self.y0, self.width, self.height)
    }

    pub fn contains(&self, p: PointI) -> bool {
        self.get(p.x, p.y)
    }

    /// Cell at frame coordinates; false anywhere outside the window.
    pub fn get(&self, x: i64, y: i64) -> bool {
        let lx = x - self.x0 as i64;
        let ly = y - self.y0 as i64;
        if lx < 0 || ly < 0 || lx >= self.width as i64 || ly >= self.height as i64 {
            return false;
        }
        self.cells[ly as usize * self.width + lx as usize]
    }

    /// Sets a cell at frame coordinates. Panics outside the window.
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        assert!(
            x >= self.x0 && y >= self.y0 && x < self.x0 + self.width && y < self.y0 + self.height,
            "({x}, {y}) outside mask window"
        );
        let i = (y - self.y0) * self.width + (x - self.x0);
        self.cells[i] = value;
    }

    pub(crate) fn local(&self, lx: usize, ly: usize) -> bool {
        self.cells[ly * self.width + lx]
    }

    pub(crate) fn local_cells(&self) -> &[bool] {
        &self.cells
    }

    pub(crate) fn local_cells_mut(&mut self) -> &mut [bool] {
        &mut self.cells
    }

    pub(crate) fn with_cells(&self, cells: Vec<bool>) -> Self {
        debug_assert_eq!(cells.len(), self.cells.len());
        Self { cells, ..*self }
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// True when no cell is set.
    pub fn is_clear(&self) -> bool {
        !self.cells.iter().any(|&c| c)
    }

    /// True cells in raster-scan order, in frame coordinates.
    pub fn points(&self) -> impl Iterator<Item = PointI> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(move |(i, _)| PointI::new((self.x0 + i % self.width) as i64, (self.y0 + i / self.width) as i64))
    }

    pub fn bbox(&self) -> Option<BoundingBox> {
        let mut bb: Option<BoundingBox> = None;
        for ly in 0..self.height {
            for lx in 0..self.width {
                if self.local(lx, ly) {
                    let (x, y) = (self.x0 + lx, self.y0 + ly);
                    match bb.as_mut() {
                        Some(b) => b.include(x, y),
                        None => bb = Some(BoundingBox { min_x: x, min_y: y, max_x: x, max_y: y }),
                    }
                }
            }
        }
        bb
    }

    /// Copy whose window is the bounding box grown by `margin`, clipped to the
    /// frame. An empty mask keeps its current window.
    pub fn cropped(&self, margin: usize) -> Self {
        let Some(bb) = self.bbox() else {
            return self.clone();
        };
        let x0 = bb.min_x.saturating_sub(margin);
        let y0 = bb.min_y.saturating_sub(margin);
        let x1 = (bb.max_x + margin).min(self.frame_width - 1);
        let y1 = (bb.max_y + margin).min(self.frame_height - 1);
        let mut out = Mask::window(self.frame_width, self.frame_height, x0, y0, x1 - x0 + 1, y1 - y0 + 1);
        for p in self.points() {
            out.set(p.x as usize, p.y as usize, true);
        }
        out
    }

    pub fn to_full_frame(&self) -> Self {
        let mut out = Mask::new(self.frame_width, self.frame_height);
        for p in self.points() {
            out.set(p.x as usize, p.y as usize, true);
        }
        out
    }

    /// Every true cell of `self` is true in `other`.
    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.points().all(|p| other.contains(p))
    }
}

impl PartialEq for Mask {
    /// Same frame and same set of true cells, regardless of window.
    fn eq(&self, other: &Self) -> bool {
        self.frame_width == other.frame_width
            && self.frame_height == other.frame_height
            && self.count() == other.count()
            && self.is_subset_of(other)
    }
}

impl Eq for Mask {}
