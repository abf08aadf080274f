use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{load_label_grid, LabelGrid, Sidecar, DEFAULT_IGNORE};
use crate::morphology::{boundary_distance_field, connected_components, separate_classes, Connectivity};
use crate::pipeline::{list_label_files, reduce_zero_label};
use crate::stats::{check_pair, within};

/// Boundary distance threshold in pixels; serialized as `"d10"` etc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(pub u32);

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.strip_prefix('d')
            .and_then(|n| n.parse().ok())
            .map(Threshold)
            .ok_or_else(|| serde::de::Error::custom(format!("expected a key like \"d10\", got {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    /// Percent of all scribble pixels that carry this class.
    pub scribble_share: f64,
    /// Percent of all non-ignore dense pixels that carry this class.
    pub dense_share: f64,
    /// Boundary-proximity share of this class's scribble pixels; `None` when
    /// the class has no scribble pixels.
    pub boundary_share: BTreeMap<Threshold, Option<f64>>,
}

/// Dataset-level metrics. `alpha` is pooled over all scribble pixels of the
/// dataset; `alpha_per_image_mean` averages per-image shares over images
/// with at least one scribble pixel. `None` marks undefined values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n_images: usize,
    pub pct_labeled: f64,
    pub alpha: BTreeMap<Threshold, Option<f64>>,
    pub alpha_per_image_mean: BTreeMap<Threshold, Option<f64>>,
    pub avg_scribbles: f64,
    pub per_class: BTreeMap<u16, ClassStats>,
}

impl DatasetStats {
    pub fn alpha_at(&self, d: u32) -> Option<f64> {
        self.alpha.get(&Threshold(d)).copied().flatten()
    }

    /// Aligned-column text rendering.
    pub fn to_table(&self) -> String {
        let na = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| format!("{v:.2}"));
        let mut out = String::new();
        let _ = writeln!(out, "{:<22}{}", "images", self.n_images);
        let _ = writeln!(out, "{:<22}{:.2}", "labeled px %", self.pct_labeled);
        let _ = writeln!(out, "{:<22}{:.2}", "avg scribbles", self.avg_scribbles);
        for (t, v) in &self.alpha {
            let mean = self.alpha_per_image_mean.get(t).copied().flatten();
            let _ = writeln!(out, "{:<22}{}  (per-image mean {})", format!("alpha {t} %"), na(*v), na(mean));
        }
        if self.per_class.is_empty() {
            return out;
        }
        out.push('\n');
        let _ = write!(out, "{:>6} {:>10} {:>10}", "class", "scribble%", "dense%");
        for t in self.alpha.keys() {
            let _ = write!(out, " {:>8}", format!("{t}%"));
        }
        out.push('\n');
        for (c, cs) in &self.per_class {
            let _ = write!(out, "{:>6} {:>10.2} {:>10.2}", c, cs.scribble_share, cs.dense_share);
            for t in self.alpha.keys() {
                let _ = write!(out, " {:>8}", na(cs.boundary_share.get(t).copied().flatten()));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct ClassCounts {
    scribble_px: u64,
    dense_px: u64,
    near: Vec<u64>,
}

/// Raw counts for one image pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageStats {
    total_px: u64,
    labeled_px: u64,
    near: Vec<u64>,
    n_scribbles: usize,
    classes: BTreeMap<u16, ClassCounts>,
}

/// Counts for one (scribble, dense) pair at the given thresholds. When
/// `n_scribbles` is unknown it is estimated as the number of 8-connected
/// single-class components of the scribble grid.
pub fn image_stats(
    scribble: &LabelGrid,
    dense: &LabelGrid,
    thresholds: &[u32],
    ignore_is_class: bool,
    n_scribbles: Option<usize>,
) -> Result<ImageStats> {
    check_pair(scribble, dense)?;
    let field = (!thresholds.is_empty()).then(|| boundary_distance_field::<f64>(dense, ignore_is_class));
    let k = thresholds.len();
    let mut classes: BTreeMap<u16, ClassCounts> = BTreeMap::new();
    let mut near = vec![0u64; k];
    let mut labeled = 0u64;
    for (i, (&s, &d)) in scribble.labels().iter().zip(dense.labels()).enumerate() {
        if d != dense.ignore_value() {
            let cc = classes.entry(d).or_insert_with(|| ClassCounts { near: vec![0; k], ..Default::default() });
            cc.dense_px += 1;
        }
        if s == scribble.ignore_value() {
            continue;
        }
        labeled += 1;
        let cc = classes.entry(s).or_insert_with(|| ClassCounts { near: vec![0; k], ..Default::default() });
        cc.scribble_px += 1;
        if let Some(field) = &field {
            let dist = field.values()[i];
            for (j, &t) in thresholds.iter().enumerate() {
                if within(dist, t) {
                    near[j] += 1;
                    cc.near[j] += 1;
                }
            }
        }
    }
    let n_scribbles = n_scribbles.unwrap_or_else(|| {
        separate_classes(scribble).iter().map(|(_, m)| connected_components(m, Connectivity::Eight).len()).sum()
    });
    Ok(ImageStats { total_px: scribble.len() as u64, labeled_px: labeled, near, n_scribbles, classes })
}

/// Associative, order-independent reduction of [`ImageStats`].
#[derive(Debug, Clone)]
pub struct StatsAccumulator {
    thresholds: Vec<u32>,
    n_images: usize,
    total_px: u64,
    labeled_px: u64,
    near: Vec<u64>,
    per_image_alpha: Vec<Vec<f64>>,
    n_scribbles: u64,
    classes: BTreeMap<u16, ClassCounts>,
}

impl StatsAccumulator {
    pub fn new(thresholds: &[u32]) -> Self {
        Self {
            thresholds: thresholds.to_vec(),
            n_images: 0,
            total_px: 0,
            labeled_px: 0,
            near: vec![0; thresholds.len()],
            per_image_alpha: vec![Vec::new(); thresholds.len()],
            n_scribbles: 0,
            classes: BTreeMap::new(),
        }
    }

    /// `img` must have been computed with this accumulator's thresholds.
    pub fn add(&mut self, img: ImageStats) {
        assert_eq!(img.near.len(), self.thresholds.len(), "threshold count mismatch");
        self.n_images += 1;
        self.total_px += img.total_px;
        self.labeled_px += img.labeled_px;
        self.n_scribbles += img.n_scribbles as u64;
        for j in 0..self.thresholds.len() {
            self.near[j] += img.near[j];
            if img.labeled_px > 0 {
                self.per_image_alpha[j].push(100.0 * img.near[j] as f64 / img.labeled_px as f64);
            }
        }
        for (c, cc) in img.classes {
            let dst = self
                .classes
                .entry(c)
                .or_insert_with(|| ClassCounts { near: vec![0; self.thresholds.len()], ..Default::default() });
            dst.scribble_px += cc.scribble_px;
            dst.dense_px += cc.dense_px;
            for (a, b) in dst.near.iter_mut().zip(&cc.near) {
                *a += b;
            }
        }
    }

    pub fn merge(&mut self, other: StatsAccumulator) {
        assert_eq!(self.thresholds, other.thresholds, "threshold mismatch");
        self.n_images += other.n_images;
        self.total_px += other.total_px;
        self.labeled_px += other.labeled_px;
        self.n_scribbles += other.n_scribbles;
        for j in 0..self.thresholds.len() {
            self.near[j] += other.near[j];
        }
        for (dst, src) in self.per_image_alpha.iter_mut().zip(other.per_image_alpha) {
            dst.extend(src);
        }
        for (c, cc) in other.classes {
            let dst = self
                .classes
                .entry(c)
                .or_insert_with(|| ClassCounts { near: vec![0; self.thresholds.len()], ..Default::default() });
            dst.scribble_px += cc.scribble_px;
            dst.dense_px += cc.dense_px;
            for (a, b) in dst.near.iter_mut().zip(&cc.near) {
                *a += b;
            }
        }
    }

    pub fn finish(mut self) -> DatasetStats {
        let pct = |num: u64, den: u64| if den == 0 { 0.0 } else { 100.0 * num as f64 / den as f64 };
        let maybe = |num: u64, den: u64| (den > 0).then(|| 100.0 * num as f64 / den as f64);
        let keys: Vec<Threshold> = self.thresholds.iter().map(|&t| Threshold(t)).collect();
        let alpha = keys.iter().zip(&self.near).map(|(&t, &n)| (t, maybe(n, self.labeled_px))).collect();
        let alpha_per_image_mean = keys
            .iter()
            .zip(self.per_image_alpha.iter_mut())
            .map(|(&t, v)| {
                // sorted so the floating-point sum does not depend on image order
                v.sort_by(f64::total_cmp);
                (t, (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64))
            })
            .collect();
        let scribble_total: u64 = self.classes.values().map(|c| c.scribble_px).sum();
        let dense_total: u64 = self.classes.values().map(|c| c.dense_px).sum();
        let per_class = self
            .classes
            .iter()
            .map(|(&c, cc)| {
                let boundary_share = keys.iter().zip(&cc.near).map(|(&t, &n)| (t, maybe(n, cc.scribble_px))).collect();
                let stats = ClassStats {
                    scribble_share: pct(cc.scribble_px, scribble_total),
                    dense_share: pct(cc.dense_px, dense_total),
                    boundary_share,
                };
                (c, stats)
            })
            .collect();
        DatasetStats {
            n_images: self.n_images,
            pct_labeled: pct(self.labeled_px, self.total_px),
            alpha,
            alpha_per_image_mean,
            avg_scribbles: if self.n_images == 0 { 0.0 } else { self.n_scribbles as f64 / self.n_images as f64 },
            per_class,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsOptions {
    pub thresholds: Vec<u32>,
    pub ignore_value: u16,
    /// Treat the ignore value as a class when locating boundaries.
    pub ignore_is_class: bool,
    /// Apply the zero-label reduction to dense rasters before comparing.
    pub reduce_zero_label: bool,
    pub parallelism: usize,
}

impl Default for StatsOptions {
    fn default() -> Self {
        Self {
            thresholds: vec![10, 20, 30],
            ignore_value: DEFAULT_IGNORE,
            ignore_is_class: true,
            reduce_zero_label: false,
            parallelism: 1,
        }
    }
}

fn load_pair(dense_dir: &Path, scribble_dir: &Path, rel: &Path, opts: &StatsOptions) -> Result<ImageStats> {
    let mut dense = load_label_grid(&dense_dir.join(rel), opts.ignore_value)?;
    if opts.reduce_zero_label {
        dense = reduce_zero_label(&dense, opts.ignore_value);
    }
    let scribble_path = scribble_dir.join(rel);
    let scribble = load_label_grid(&scribble_path, opts.ignore_value)?;
    let sidecar = scribble_path.with_extension("json");
    let n = if sidecar.is_file() { Some(Sidecar::read(&sidecar)?.scribbles.len()) } else { None };
    image_stats(&scribble, &dense, &opts.thresholds, opts.ignore_is_class, n)
}

/// Metrics over every raster pair with the same relative path under the two
/// directories. Scribble counts come from sidecars when present. Fails with
/// [`Error::Mismatch`] when either side has files the other lacks.
pub fn dataset_stats(dense_dir: &Path, scribble_dir: &Path, opts: &StatsOptions) -> Result<DatasetStats> {
    let dense: BTreeSet<PathBuf> = list_label_files(dense_dir)?.into_iter().collect();
    let scrib: BTreeSet<PathBuf> = list_label_files(scribble_dir)?.into_iter().collect();
    if dense != scrib {
        let show = |s: std::collections::btree_set::Difference<'_, PathBuf>| {
            s.map(|p| p.display().to_string()).collect::<Vec<_>>()
        };
        return Err(Error::Mismatch {
            missing_scribbles: show(dense.difference(&scrib)),
            missing_dense: show(scrib.difference(&dense)),
        });
    }
    let files: Vec<PathBuf> = dense.into_iter().collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let per_image: Vec<Result<ImageStats>> =
        pool.install(|| files.par_iter().map(|rel| load_pair(dense_dir, scribble_dir, rel, opts)).collect());
    let mut acc = StatsAccumulator::new(&opts.thresholds);
    for img in per_image {
        acc.add(img?);
    }
    Ok(acc.finish())
}

/// Writes `stats` as pretty JSON to `path` and returns the text table.
pub fn render_report(stats: &DatasetStats, path: &Path) -> Result<String> {
    crate::pipeline::write_pretty(path, stats)?;
    Ok(stats.to_table())
}
