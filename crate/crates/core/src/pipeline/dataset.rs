use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::stable_hash;
use crate::model::{load_label_grid, write_scribble_grid, Sidecar, SidecarScribble, DEFAULT_IGNORE};
use crate::pipeline::{generate_image, ingest, shrink_scribble, GenerationSummary, ParameterProfile};

/// Recorded next to the outputs so a run can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub profile: ParameterProfile,
}

/// Label rasters (`*.png`) under `dir`, as paths relative to it, sorted.
pub fn list_label_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let is_png = entry.path().extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("png"));
        if is_png {
            let rel = entry.path().strip_prefix(dir).expect("walk stays under root");
            out.push(rel.to_path_buf());
        }
    }
    Ok(out)
}

/// Relative path with `/` separators, used for seeding and in sidecars.
pub(crate) fn rel_key(rel: &Path) -> String {
    rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect::<Vec<_>>().join("/")
}

enum ImageResult {
    Done(GenerationSummary),
    Unreadable,
}

fn process_one(
    input_dir: &Path,
    output_dir: &Path,
    rel: &Path,
    profile: &ParameterProfile,
    master_seed: u64,
) -> Result<ImageResult> {
    let src = input_dir.join(rel);
    let grid = match load_label_grid(&src, profile.ignore_value) {
        Ok(g) => ingest(g, profile),
        Err(e) => {
            warn!("skipping {}: {e}", src.display());
            return Ok(ImageResult::Unreadable);
        }
    };
    let key = rel_key(rel);
    let seed = stable_hash(master_seed, key.as_bytes());
    let generated = generate_image(&grid, profile, seed);
    let dst = output_dir.join(rel);
    if let Some(parent) = dst.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    write_scribble_grid(&generated.records, grid.width(), grid.height(), profile.ignore_value, &dst)?;
    Sidecar::new(key, grid.width(), grid.height(), profile.ignore_value, &generated.records)
        .write(&dst.with_extension("json"))?;
    Ok(ImageResult::Done(generated.summary))
}

/// Generates scribbles for every label raster under `input_dir`.
///
/// Writes, mirroring the input layout, one scribble raster and one sidecar
/// JSON per image, plus `summary.json` and `manifest.json` at the top of
/// `output_dir`. Per-image seeds depend only on `master_seed` and the
/// relative path, so outputs do not depend on `parallelism` or on file order.
/// Unreadable inputs are logged and counted; write failures abort.
pub fn run_dataset(
    input_dir: &Path,
    output_dir: &Path,
    profile: &ParameterProfile,
    master_seed: u64,
    parallelism: usize,
) -> Result<GenerationSummary> {
    let start = Instant::now();
    profile.validate()?;
    let files = list_label_files(input_dir)?;
    fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Result<ImageResult>> = pool.install(|| {
        files.par_iter().map(|rel| process_one(input_dir, output_dir, rel, profile, master_seed)).collect()
    });
    let mut summary = GenerationSummary::default();
    for r in results {
        match r? {
            ImageResult::Done(s) => summary += &s,
            ImageResult::Unreadable => summary.n_images_unreadable += 1,
        }
    }
    summary.wall_time_seconds = start.elapsed().as_secs_f64();
    info!(
        "{} images, {} scribbles, {} failed, {} skipped small",
        summary.n_images, summary.n_scribbles_emitted, summary.n_blobs_failed, summary.n_blobs_skipped_small
    );

    write_pretty(&output_dir.join("summary.json"), &summary)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: master_seed,
        profile: profile.clone(),
    };
    write_pretty(&output_dir.join("manifest.json"), &manifest)?;
    Ok(summary)
}

/// Totals over an ablation run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AblationSummary {
    pub n_images: usize,
    pub n_records: usize,
    pub labeled_px_before: usize,
    pub labeled_px_after: usize,
}

/// Shrinks every sidecar record under `scribble_dir` to `ratio` of its arc
/// length and writes the re-rasterized dataset to `output_dir`. Image size
/// and ignore value come from the sidecar, falling back to the raster and
/// the default ignore value.
pub fn ablate_dataset(scribble_dir: &Path, output_dir: &Path, ratio: f64) -> Result<AblationSummary> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidArgument(format!("shrink ratio must lie in (0, 1], got {ratio}")));
    }
    let mut summary = AblationSummary::default();
    for rel in list_label_files(scribble_dir)? {
        let raster = scribble_dir.join(&rel);
        let sidecar_path = raster.with_extension("json");
        if !sidecar_path.is_file() {
            warn!("no sidecar for {}, skipping", raster.display());
            continue;
        }
        let sidecar = Sidecar::read(&sidecar_path)?;
        let ignore = sidecar.ignore_value.unwrap_or(DEFAULT_IGNORE);
        let (w, h) = match (sidecar.width, sidecar.height) {
            (Some(w), Some(h)) => (w, h),
            _ => {
                let g = load_label_grid(&raster, ignore)?;
                (g.width(), g.height())
            }
        };
        let before = sidecar.records();
        let after = before.iter().map(|r| shrink_scribble(r, ratio)).collect::<Result<Vec<_>>>()?;
        summary.n_images += 1;
        summary.n_records += after.len();
        summary.labeled_px_before += before.iter().map(|r| r.pixels.len()).sum::<usize>();
        summary.labeled_px_after += after.iter().map(|r| r.pixels.len()).sum::<usize>();
        let dst = output_dir.join(&rel);
        if let Some(parent) = dst.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        write_scribble_grid(&after, w, h, ignore, &dst)?;
        let out = Sidecar { scribbles: after.iter().map(SidecarScribble::from).collect(), ..sidecar };
        out.write(&dst.with_extension("json"))?;
    }
    Ok(summary)
}

pub(crate) fn write_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
