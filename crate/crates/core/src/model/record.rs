use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::raster::stamp_stroke;
use crate::model::{Axis, PointI};

/// One generated scribble.
///
/// `coeffs` are the raw polynomial coefficients `β0..β4` in pixel units of the
/// independent coordinate along `axis`. `pixels` is the thick stroke, sorted
/// in raster order without duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScribbleRecord {
    pub class_id: u16,
    pub instance_id: u32,
    pub axis: Axis,
    pub coeffs: [f64; 5],
    pub t_range: (f64, f64),
    pub centerline: Vec<PointI>,
    pub pixels: Vec<PointI>,
    pub thickness: u32,
}

impl ScribbleRecord {
    /// Polyline length over consecutive centerline cells.
    pub fn arc_length(&self) -> f64 {
        polyline_length(&self.centerline)
    }
}

pub(crate) fn polyline_length(points: &[PointI]) -> f64 {
    points.windows(2).map(|w| (w[0].dist2(w[1]) as f64).sqrt()).sum()
}

/// Per-image sidecar document listing the scribbles of one raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ignore_value: Option<u16>,
    pub scribbles: Vec<SidecarScribble>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarScribble {
    pub class_id: u16,
    pub instance_id: u32,
    pub axis: Axis,
    pub coeffs: [f64; 5],
    pub t_range: [f64; 2],
    pub points: Vec<[i64; 2]>,
    #[serde(default = "default_thickness")]
    pub thickness: u32,
}

fn default_thickness() -> u32 {
    3
}

/// Rounds to 9 significant digits.
fn sig9(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.8e}").parse().unwrap_or(v)
}

impl From<&ScribbleRecord> for SidecarScribble {
    fn from(r: &ScribbleRecord) -> Self {
        Self {
            class_id: r.class_id,
            instance_id: r.instance_id,
            axis: r.axis,
            coeffs: r.coeffs.map(sig9),
            t_range: [sig9(r.t_range.0), sig9(r.t_range.1)],
            points: r.centerline.iter().map(|p| [p.x, p.y]).collect(),
            thickness: r.thickness,
        }
    }
}

impl SidecarScribble {
    /// Rebuilds the record, re-stamping the stroke from the centerline.
    pub fn to_record(&self) -> ScribbleRecord {
        let centerline: Vec<PointI> = self.points.iter().map(|&[x, y]| PointI::new(x, y)).collect();
        let pixels = stamp_stroke(&centerline, self.axis, self.thickness);
        ScribbleRecord {
            class_id: self.class_id,
            instance_id: self.instance_id,
            axis: self.axis,
            coeffs: self.coeffs,
            t_range: (self.t_range[0], self.t_range[1]),
            centerline,
            pixels,
            thickness: self.thickness,
        }
    }
}

impl Sidecar {
    pub fn new(
        image: impl Into<String>,
        width: usize,
        height: usize,
        ignore_value: u16,
        records: &[ScribbleRecord],
    ) -> Self {
        Self {
            image: image.into(),
            width: Some(width),
            height: Some(height),
            ignore_value: Some(ignore_value),
            scribbles: records.iter().map(SidecarScribble::from).collect(),
        }
    }

    pub fn records(&self) -> Vec<ScribbleRecord> {
        self.scribbles.iter().map(SidecarScribble::to_record).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sidecar serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
    }
}
