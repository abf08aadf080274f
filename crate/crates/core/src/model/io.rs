//! Lossless single-channel PNG label rasters.
//!
//! Grids are written as 8-bit grayscale when every value fits, 16-bit
//! otherwise. Reading accepts grayscale (1–16 bit) and palette-indexed files;
//! for the latter the class id is the palette index.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{LabelGrid, ScribbleRecord};

fn decode_err(path: &Path, reason: impl ToString) -> Error {
    Error::Decode { path: path.to_path_buf(), reason: reason.to_string() }
}

/// Reads a label raster.
pub fn load_label_grid(path: &Path, ignore_value: u16) -> Result<LabelGrid> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut decoder = png::Decoder::new(BufReader::new(file));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| decode_err(path, e))?;
    let size = reader.output_buffer_size().ok_or_else(|| decode_err(path, "image too large"))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(|e| decode_err(path, e))?;
    match info.color_type {
        png::ColorType::Grayscale | png::ColorType::Indexed => {}
        other => return Err(decode_err(path, format!("expected single-channel or palette image, got {other:?}"))),
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let depth = info.bit_depth as usize;
    let mut labels = Vec::with_capacity(width * height);
    for row in buf.chunks(info.line_size).take(height) {
        match depth {
            16 => labels.extend(row.chunks_exact(2).take(width).map(|b| u16::from_be_bytes([b[0], b[1]]))),
            8 => labels.extend(row[..width].iter().map(|&b| b as u16)),
            1 | 2 | 4 => {
                let per_byte = 8 / depth;
                let lane = (1u16 << depth) - 1;
                labels.extend((0..width).map(|x| {
                    let byte = row[x / per_byte] as u16;
                    let shift = 8 - depth * (x % per_byte + 1);
                    (byte >> shift) & lane
                }));
            }
            _ => return Err(decode_err(path, format!("unsupported bit depth {depth}"))),
        }
    }
    LabelGrid::new(width, height, labels, ignore_value).map_err(|e| decode_err(path, e))
}

/// Writes a grid as lossless grayscale PNG.
pub fn write_label_grid(grid: &LabelGrid, path: &Path) -> Result<()> {
    let enc_err = |e: png::EncodingError| Error::Encode { path: path.to_path_buf(), reason: e.to_string() };
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let wide = grid.labels().iter().any(|&v| v > 255);
    let mut encoder = png::Encoder::new(BufWriter::new(file), grid.width() as u32, grid.height() as u32);
    encoder.set_color(png::ColorType::Grayscale);
    let data: Vec<u8> = if wide {
        encoder.set_depth(png::BitDepth::Sixteen);
        grid.labels().iter().flat_map(|v| v.to_be_bytes()).collect()
    } else {
        encoder.set_depth(png::BitDepth::Eight);
        grid.labels().iter().map(|&v| v as u8).collect()
    };
    let mut writer = encoder.write_header().map_err(enc_err)?;
    writer.write_image_data(&data).map_err(enc_err)?;
    writer.finish().map_err(enc_err)?;
    Ok(())
}

/// Paints records onto an ignore-filled grid.
///
/// Pixels shared by records of the same class are fine; a pixel claimed by two
/// different classes is an error.
pub fn rasterize_records(
    records: &[ScribbleRecord],
    width: usize,
    height: usize,
    ignore_value: u16,
) -> Result<LabelGrid> {
    let mut grid = LabelGrid::filled(width, height, ignore_value, ignore_value)?;
    for rec in records {
        for &p in &rec.pixels {
            if !grid.in_bounds(p) {
                return Err(Error::OutOfBounds { x: p.x, y: p.y, width, height });
            }
            let (x, y) = (p.x as usize, p.y as usize);
            let current = grid.get(x, y);
            if current != ignore_value && current != rec.class_id {
                return Err(Error::Overlap { x, y, first: current, second: rec.class_id });
            }
            grid.set(x, y, rec.class_id);
        }
    }
    Ok(grid)
}

/// Rasterizes records and writes the scribble label image.
pub fn write_scribble_grid(
    records: &[ScribbleRecord],
    width: usize,
    height: usize,
    ignore_value: u16,
    path: &Path,
) -> Result<()> {
    let grid = rasterize_records(records, width, height, ignore_value)?;
    write_label_grid(&grid, path)
}
