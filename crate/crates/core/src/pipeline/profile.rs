use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DEFAULT_IGNORE;
use crate::morphology::Connectivity;

/// How blob area turns into a Gaussian noise scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// `σ = sqrt(area) / divisor`, a length scale.
    #[default]
    SqrtArea,
    /// `σ = area / divisor`, the printed table formula taken literally.
    LiteralArea,
}

/// Area-dependent initial erosion radius, a three-piece function of the blob's
/// area fraction `x`:
///
/// ```text
/// base                                 x <= lower
/// base + (x - ramp_offset)/ramp_scale  lower <= x <= upper   (clamped >= base)
/// cap                                  upper <= x
/// ```
///
/// With `continuous` the middle piece is replaced by the straight line from
/// `(lower, base)` to `(upper, cap)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Epsilon1 {
    pub base: f64,
    pub lower: f64,
    pub ramp_offset: f64,
    pub ramp_scale: f64,
    pub upper: f64,
    pub cap: f64,
    #[serde(default)]
    pub continuous: bool,
}

impl Epsilon1 {
    /// Unrounded radius.
    pub fn value(&self, x: f64) -> f64 {
        if x <= self.lower {
            self.base
        } else if x <= self.upper {
            if self.continuous {
                let span = self.upper - self.lower;
                self.base + (x - self.lower) / span * (self.cap - self.base)
            } else {
                (self.base + (x - self.ramp_offset) / self.ramp_scale).max(self.base)
            }
        } else {
            self.cap
        }
    }

    /// Radius rounded to the nearest integer, never negative.
    pub fn radius(&self, x: f64) -> u32 {
        self.value(x).round().max(0.0) as u32
    }
}

/// Per-dataset generation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParameterProfile {
    pub name: String,
    pub eps1: Epsilon1,
    /// Fixed erosion per fitting level.
    pub eps2: u32,
    pub sigma_com_div: f64,
    pub sigma_div: f64,
    pub noise_mode: NoiseMode,
    /// Fit attempts per erosion level.
    pub retries: u32,
    pub edge_samples: usize,
    pub min_blob_px: usize,
    pub thickness: u32,
    pub max_restarts: u32,
    pub connectivity: Connectivity,
    pub ignore_value: u16,
    /// Map label 0 to ignore and shift every other label down by one at
    /// ingestion (ADE20K convention).
    pub reduce_zero_label: bool,
}

impl Default for ParameterProfile {
    fn default() -> Self {
        Self::s4pascal()
    }
}

impl ParameterProfile {
    pub const BUILTIN: [&'static str; 4] = ["s4pascal", "s4kitti360", "s4cityscapes", "s4ade20k"];

    fn base(name: &str, eps1: Epsilon1, eps2: u32, retries: u32, min_blob_px: usize, thickness: u32) -> Self {
        Self {
            name: name.to_string(),
            eps1,
            eps2,
            sigma_com_div: 20.0,
            sigma_div: 10.0,
            noise_mode: NoiseMode::SqrtArea,
            retries,
            edge_samples: 20,
            min_blob_px,
            thickness,
            max_restarts: 3,
            connectivity: Connectivity::Eight,
            ignore_value: DEFAULT_IGNORE,
            reduce_zero_label: false,
        }
    }

    pub fn s4pascal() -> Self {
        let eps1 = Epsilon1 {
            base: 2.0,
            lower: 0.003,
            ramp_offset: 0.007,
            ramp_scale: 0.063,
            upper: 0.15,
            cap: 20.0,
            continuous: false,
        };
        Self::base("s4pascal", eps1, 2, 20, 80, 3)
    }

    pub fn s4kitti360() -> Self {
        let eps1 = Epsilon1 {
            base: 3.0,
            lower: 0.007,
            ramp_offset: 0.007,
            ramp_scale: 0.063,
            upper: 0.07,
            cap: 20.0,
            continuous: false,
        };
        Self::base("s4kitti360", eps1, 3, 10, 200, 3)
    }

    pub fn s4cityscapes() -> Self {
        let eps1 = Epsilon1 {
            base: 5.0,
            lower: 0.007,
            ramp_offset: 0.007,
            ramp_scale: 0.063,
            upper: 0.07,
            cap: 40.0,
            continuous: false,
        };
        Self::base("s4cityscapes", eps1, 2, 10, 400, 5)
    }

    pub fn s4ade20k() -> Self {
        let eps1 = Epsilon1 {
            base: 2.0,
            lower: 0.003,
            ramp_offset: 0.003,
            ramp_scale: 0.147,
            upper: 0.15,
            cap: 20.0,
            continuous: false,
        };
        let mut p = Self::base("s4ade20k", eps1, 2, 20, 80, 3);
        p.reduce_zero_label = true;
        p
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "s4pascal" => Some(Self::s4pascal()),
            "s4kitti360" => Some(Self::s4kitti360()),
            "s4cityscapes" => Some(Self::s4cityscapes()),
            "s4ade20k" => Some(Self::s4ade20k()),
            _ => None,
        }
    }

    /// Parses a TOML profile. Missing keys fall back to the profile named by
    /// the optional top-level `base` key (default `s4pascal`).
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Profile(e.to_string()))?;
        let base = match table.remove("base") {
            Some(toml::Value::String(name)) => {
                Self::builtin(&name).ok_or_else(|| Error::Profile(format!("unknown base profile {name:?}")))?
            }
            Some(other) => return Err(Error::Profile(format!("`base` must be a string, got {other}"))),
            None => Self::s4pascal(),
        };
        let mut merged = toml::Table::try_from(&base).map_err(|e| Error::Profile(e.to_string()))?;
        for (k, v) in table {
            match (merged.get_mut(&k), v) {
                (Some(toml::Value::Table(dst)), toml::Value::Table(src)) => dst.extend(src),
                (_, v) => {
                    merged.insert(k, v);
                }
            }
        }
        let profile: Self = merged.try_into().map_err(|e: toml::de::Error| Error::Profile(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("profile serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Profile(format!("{what} must be positive")));
        if !(self.sigma_com_div > 0.0) {
            return bad("sigma_com_div");
        }
        if !(self.sigma_div > 0.0) {
            return bad("sigma_div");
        }
        if self.retries == 0 {
            return bad("retries");
        }
        if self.edge_samples < 2 {
            return Err(Error::Profile("edge_samples must be >= 2".into()));
        }
        if self.min_blob_px == 0 {
            return bad("min_blob_px");
        }
        if self.thickness == 0 {
            return bad("thickness");
        }
        if self.max_restarts == 0 {
            return bad("max_restarts");
        }
        if !(self.eps1.ramp_scale > 0.0) || !(self.eps1.upper > self.eps1.lower) {
            return Err(Error::Profile("eps1 needs ramp_scale > 0 and upper > lower".into()));
        }
        Ok(())
    }

    fn noise_scale(&self, area_px: usize) -> f64 {
        match self.noise_mode {
            NoiseMode::SqrtArea => (area_px as f64).sqrt(),
            NoiseMode::LiteralArea => area_px as f64,
        }
    }

    /// Standard deviation of the center-of-mass perturbation.
    pub fn sigma_com(&self, area_px: usize) -> f64 {
        self.noise_scale(area_px) / self.sigma_com_div
    }

    /// Standard deviation of the intermediate-point perturbation.
    pub fn sigma_intermediate(&self, area_px: usize) -> f64 {
        self.noise_scale(area_px) / self.sigma_div
    }
}

/// Initial erosion radius for a blob covering `area_fraction` of the image.
pub fn epsilon1(area_fraction: f64, profile: &ParameterProfile) -> u32 {
    profile.eps1.radius(area_fraction)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_branches() {
        let p = ParameterProfile::s4pascal();
        assert_eq!(epsilon1(0.001, &p), 2);
        assert_eq!(epsilon1(0.2, &p), 20);
        assert_eq!(epsilon1(0.07, &p), 3);
        // below the ramp offset the middle branch is clamped to the base
        assert_eq!(epsilon1(0.005, &p), 2);
        // literal discontinuity at the upper breakpoint
        assert_eq!(epsilon1(0.15, &p), 4);
    }

    #[test]
    fn continuous_variant_meets_cap() {
        let mut p = ParameterProfile::s4pascal();
        p.eps1.continuous = true;
        assert_eq!(epsilon1(0.15, &p), 20);
        assert_eq!(epsilon1(0.003, &p), 2);
    }

    #[test]
    fn table_values() {
        let k = ParameterProfile::s4kitti360();
        assert_eq!((k.eps2, k.retries, k.min_blob_px, k.thickness), (3, 10, 200, 3));
        assert_eq!(epsilon1(0.0, &k), 3);
        assert_eq!(epsilon1(0.5, &k), 20);
        let c = ParameterProfile::s4cityscapes();
        assert_eq!((c.eps2, c.retries, c.min_blob_px, c.thickness), (2, 10, 400, 5));
        assert_eq!(epsilon1(0.5, &c), 40);
        let a = ParameterProfile::s4ade20k();
        assert_eq!((a.eps2, a.retries, a.min_blob_px, a.thickness), (2, 20, 80, 3));
        assert_eq!(epsilon1(0.15, &a), 3);
        for p in [k, c, a, ParameterProfile::s4pascal()] {
            assert_eq!((p.sigma_com_div, p.sigma_div), (20.0, 10.0));
        }
    }

    #[test]
    fn noise_scales() {
        let mut p = ParameterProfile::s4pascal();
        assert_eq!(p.sigma_com(400), 1.0);
        assert_eq!(p.sigma_intermediate(900), 3.0);
        // doubling blob scale quadruples area and doubles the length-scale sigma
        assert_eq!(p.sigma_com(1600), 2.0 * p.sigma_com(400));
        p.noise_mode = NoiseMode::LiteralArea;
        assert_eq!(p.sigma_com(400), 20.0);
    }

    #[test]
    fn toml_overrides_and_base() {
        let p = ParameterProfile::from_toml("base = \"s4cityscapes\"\neps2 = 4\n[eps1]\ncap = 30.0\n").unwrap();
        assert_eq!(p.eps2, 4);
        assert_eq!(p.eps1.cap, 30.0);
        assert_eq!(p.eps1.base, 5.0);
        assert_eq!(p.thickness, 5);
        let round = ParameterProfile::from_toml(&p.to_toml()).unwrap();
        assert_eq!(round, p);
        assert!(ParameterProfile::from_toml("bogus = 1").is_err());
        assert!(ParameterProfile::from_toml("retries = 0").is_err());
        assert!(
            ParameterProfile::from_toml("noise_mode = \"literal_area\"").unwrap().noise_mode == NoiseMode::LiteralArea
        );
    }
}
