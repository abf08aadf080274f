//! Scribbles painted over source photographs for visual inspection.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use image::{Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::model::{load_label_grid, LabelGrid};
use crate::pipeline::list_label_files;

/// Class id to RGB color.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Colormap {
    colors: BTreeMap<u16, [u8; 3]>,
}

/// Color of class `c` in the Pascal VOC palette.
pub fn voc_color(c: u16) -> [u8; 3] {
    let mut rgb = [0u8; 3];
    let mut id = c;
    for shift in (0..8).rev() {
        for (ch, out) in rgb.iter_mut().enumerate() {
            *out |= (((id >> ch) & 1) as u8) << shift;
        }
        id >>= 3;
        if id == 0 {
            break;
        }
    }
    rgb
}

impl Colormap {
    pub fn new(colors: BTreeMap<u16, [u8; 3]>) -> Self {
        Self { colors }
    }

    /// JSON object mapping class ids (as strings) to `[r, g, b]`.
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        Ok(Self { colors: serde_json::from_str(text)? })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
    }

    /// Explicit entry, else the VOC palette color.
    pub fn color(&self, class_id: u16) -> [u8; 3] {
        self.colors.get(&class_id).copied().unwrap_or_else(|| voc_color(class_id))
    }
}

/// Paints every non-ignore scribble cell with its class color.
pub fn overlay_scribbles(image: &RgbImage, scribble: &LabelGrid, colormap: &Colormap) -> Result<RgbImage> {
    if (image.width() as usize, image.height() as usize) != (scribble.width(), scribble.height()) {
        return Err(Error::InvalidGrid(format!(
            "image is {}x{} but scribble grid is {}x{}",
            image.width(),
            image.height(),
            scribble.width(),
            scribble.height()
        )));
    }
    let mut out = image.clone();
    for y in 0..scribble.height() {
        for x in 0..scribble.width() {
            if !scribble.is_ignore(x, y) {
                out.put_pixel(x as u32, y as u32, Rgb(colormap.color(scribble.get(x, y))));
            }
        }
    }
    Ok(out)
}

const IMAGE_EXTENSIONS: [&str; 5] = ["jpg", "jpeg", "png", "JPG", "PNG"];

fn find_image(images_dir: &Path, rel: &Path) -> Option<PathBuf> {
    IMAGE_EXTENSIONS.iter().map(|ext| images_dir.join(rel).with_extension(ext)).find(|p| p.is_file())
}

/// Renders one overlay PNG per scribble raster under `scribble_dir`, looking
/// up the photograph with the same relative stem under `images_dir`.
/// Returns the number of overlays written.
pub fn overlay_dataset(
    images_dir: &Path,
    scribble_dir: &Path,
    output_dir: &Path,
    colormap: &Colormap,
    ignore_value: u16,
) -> Result<usize> {
    let files = list_label_files(scribble_dir)?;
    for rel in &files {
        let src = find_image(images_dir, rel).ok_or_else(|| Error::MissingImage(images_dir.join(rel)))?;
        let photo = image::open(&src).map_err(|source| Error::Image { path: src.clone(), source })?.to_rgb8();
        let scribble = load_label_grid(&scribble_dir.join(rel), ignore_value)?;
        let out = overlay_scribbles(&photo, &scribble, colormap)?;
        let dst = output_dir.join(rel).with_extension("png");
        if let Some(parent) = dst.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        out.save(&dst).map_err(|source| Error::Image { path: dst.clone(), source })?;
    }
    Ok(files.len())
}
