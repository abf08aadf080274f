//! Dataset-scale orchestration around the single-blob generator.

mod dataset;
pub mod preprocess;
mod profile;
mod shrink;

use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

pub(crate) use dataset::write_pretty;
pub use dataset::{ablate_dataset, list_label_files, run_dataset, AblationSummary, RunManifest};
pub use preprocess::{preprocess_objects, PreparedObject, Preprocessed};
pub use profile::{epsilon1, Epsilon1, NoiseMode, ParameterProfile};
pub use shrink::shrink_scribble;

use crate::fit::{generate_from_seed, BlobFailure, RngStream};
use crate::model::{LabelGrid, ScribbleRecord};

/// Counts over one or more images.
///
/// `n_objects_considered` counts skipped small blobs plus every prepared
/// object (a blob split by the initial erosion counts once per part), so
/// `emitted + failed + skipped_small == considered`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub n_images: usize,
    pub n_images_unreadable: usize,
    pub n_objects_considered: usize,
    pub n_scribbles_emitted: usize,
    pub n_blobs_skipped_small: usize,
    pub n_blobs_failed: usize,
    pub wall_time_seconds: f64,
}

impl GenerationSummary {
    pub fn is_balanced(&self) -> bool {
        self.n_scribbles_emitted + self.n_blobs_failed + self.n_blobs_skipped_small == self.n_objects_considered
    }
}

impl AddAssign<&GenerationSummary> for GenerationSummary {
    fn add_assign(&mut self, o: &GenerationSummary) {
        self.n_images += o.n_images;
        self.n_images_unreadable += o.n_images_unreadable;
        self.n_objects_considered += o.n_objects_considered;
        self.n_scribbles_emitted += o.n_scribbles_emitted;
        self.n_blobs_skipped_small += o.n_blobs_skipped_small;
        self.n_blobs_failed += o.n_blobs_failed;
        self.wall_time_seconds += o.wall_time_seconds;
    }
}

/// What happened to one prepared object.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectOutcome {
    pub class_id: u16,
    pub instance_id: u32,
    pub part: u32,
    pub area: usize,
    /// Index into [`ImageGeneration::records`] on success.
    pub result: Result<usize, BlobFailure>,
}

#[derive(Debug, Clone, Default)]
pub struct ImageGeneration {
    pub records: Vec<ScribbleRecord>,
    pub summary: GenerationSummary,
    pub outcomes: Vec<ObjectOutcome>,
}

/// Runs preprocessing and per-object generation for one image. Object `k`
/// draws from `RngStream::new(image_seed).child(k)`.
pub fn generate_image(grid: &LabelGrid, profile: &ParameterProfile, image_seed: u64) -> ImageGeneration {
    let pre = preprocess_objects(grid, profile);
    let root = RngStream::new(image_seed);
    let mut out = ImageGeneration {
        summary: GenerationSummary {
            n_images: 1,
            n_blobs_skipped_small: pre.skipped_small,
            n_objects_considered: pre.skipped_small + pre.objects.len(),
            ..Default::default()
        },
        ..Default::default()
    };
    for (k, obj) in pre.objects.iter().enumerate() {
        let stream = root.child(k as u64);
        let result = match generate_from_seed(&obj.blob, &obj.seed, profile, &stream) {
            Ok(rec) => {
                out.records.push(rec);
                out.summary.n_scribbles_emitted += 1;
                Ok(out.records.len() - 1)
            }
            Err(e) => {
                out.summary.n_blobs_failed += 1;
                Err(e)
            }
        };
        out.outcomes.push(ObjectOutcome {
            class_id: obj.blob.class_id,
            instance_id: obj.blob.instance_id,
            part: obj.part,
            area: obj.blob.area,
            result,
        });
    }
    out
}

/// Applies the profile's ingestion remapping to a freshly loaded grid.
pub fn ingest(grid: LabelGrid, profile: &ParameterProfile) -> LabelGrid {
    if profile.reduce_zero_label {
        reduce_zero_label(&grid, profile.ignore_value)
    } else {
        grid
    }
}

/// Label 0 and the old ignore value become `ignore_value`; every other label
/// shifts down by one.
pub fn reduce_zero_label(grid: &LabelGrid, ignore_value: u16) -> LabelGrid {
    let old_ignore = grid.ignore_value();
    grid.map_labels(ignore_value, |v| if v == 0 || v == old_ignore { ignore_value } else { v - 1 })
}
