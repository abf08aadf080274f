use crate::fit::raster::{rasterize_curve_within, validate_scribble};
use crate::fit::sampling::sample_points;
use crate::fit::{choose_axis, farthest_pair, fit_polynomial, perturb_com, sample_intermediate, RngStream};
use crate::model::{BinaryBlob, BoundingBox, LabelGrid, Mask, PointF, PointI, ScribbleRecord};
use crate::morphology::{
    binary_erode, center_of_mass, edge_cells, largest_component, nearest_skeleton_point, skeletonize,
};
use crate::pipeline::{preprocess::erode_for_seed, ParameterProfile};

/// Why a blob received no scribble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlobFailure {
    /// The seed eroded away before any attempt could be made.
    ErodedAway,
    /// Attempts were made at some erosion level, but none validated in any
    /// restart.
    Exhausted,
}

/// Full single-blob generation: area-dependent erosion of `blob` (keeping
/// the largest remaining part), then [`generate_from_seed`].
pub fn generate_for_blob(
    blob: &BinaryBlob,
    grid: &LabelGrid,
    profile: &ParameterProfile,
    stream: &RngStream,
) -> Option<ScribbleRecord> {
    let seed = erode_for_seed(blob, grid.len(), profile);
    let seed = largest_component(&seed, profile.connectivity)?.mask;
    generate_from_seed(blob, &seed, profile, stream).ok()
}

/// One erosion level of the fitting loop with everything the attempts need.
/// Levels depend only on the seed and the profile, so restarts reuse them.
struct Level {
    mask: Mask,
    edge_cells: Vec<PointI>,
    com: Option<PointF<f64>>,
    area: usize,
    bounds: BoundingBox,
}

impl Level {
    fn new(mask: Mask) -> Option<Self> {
        let edge_cells = edge_cells(&mask);
        let mut com: Option<PointF<f64>> = center_of_mass(&mask).ok();
        if let Some(c) = com {
            if !mask.contains(c.round()) {
                let skeleton = skeletonize(&mask);
                com = nearest_skeleton_point(&skeleton, c).ok().map(|p| p.to_f());
            }
        }
        let area = mask.count();
        let bounds = mask.bbox()?;
        Some(Self { mask, edge_cells, com, area, bounds })
    }
}

/// Erode-and-fit loop starting from an already eroded seed mask.
///
/// Each pass repeatedly erodes the working mask by `eps2`, keeps its largest
/// component and makes up to `retries` fit attempts, until the mask is empty.
/// Passes restart from `seed` with a fresh child stream, at most
/// `max_restarts` times.
pub fn generate_from_seed(
    original: &BinaryBlob,
    seed: &Mask,
    profile: &ParameterProfile,
    stream: &RngStream,
) -> Result<ScribbleRecord, BlobFailure> {
    let mut attempted = false;
    let mut levels: Vec<Level> = Vec::new();
    let mut exhausted_levels = false;
    for pass in 0..profile.max_restarts.max(1) {
        let mut rng = stream.child(pass as u64);
        let mut k = 0;
        loop {
            if k == levels.len() {
                if exhausted_levels {
                    break;
                }
                let prev = levels.last().map_or(seed, |l| &l.mask);
                let next = largest_component(&binary_erode(prev, profile.eps2), profile.connectivity)
                    .and_then(|c| Level::new(c.mask));
                match next {
                    Some(level) => levels.push(level),
                    None => {
                        exhausted_levels = true;
                        break;
                    }
                }
            }
            if let Some(rec) = attempt_level(original, &levels[k], profile, &mut rng, &mut attempted) {
                return Ok(rec);
            }
            k += 1;
            if profile.eps2 == 0 {
                // no erosion progress possible; one level per pass
                break;
            }
        }
    }
    Err(if attempted { BlobFailure::Exhausted } else { BlobFailure::ErodedAway })
}

fn attempt_level(
    original: &BinaryBlob,
    level: &Level,
    profile: &ParameterProfile,
    rng: &mut RngStream,
    attempted: &mut bool,
) -> Option<ScribbleRecord> {
    let com = level.com?;
    for _ in 0..profile.retries {
        let Ok(samples) = sample_points(&level.edge_cells, profile.edge_samples, rng) else {
            return None;
        };
        let Ok((p1, p2)) = farthest_pair(&samples) else {
            return None;
        };
        let Ok(axis) = choose_axis(p1, p2) else {
            return None;
        };
        *attempted = true;
        let c_hat = perturb_com(com, level.area, profile, rng);
        let (ta, tb) = (axis.along_i(p1) as f64, axis.along_i(p2) as f64);
        let t_range = (ta.min(tb), ta.max(tb));
        let (p1f, p2f) = (p1.to_f::<f64>(), p2.to_f::<f64>());
        let Ok(f2) = fit_polynomial(&[p1f, p2f, c_hat], 2, axis) else {
            continue;
        };
        let f2 = f2.with_t_range(t_range);
        let (p3, p4) = sample_intermediate(&f2, level.area, profile, rng);
        let Ok(f4) = fit_polynomial(&[p1f, p2f, p3, p4, c_hat], 4, axis) else {
            continue;
        };
        let f4 = f4.with_t_range(t_range);
        let Ok(stroke) = rasterize_curve_within(&f4, profile.thickness, Some(level.bounds)) else {
            continue;
        };
        if validate_scribble(&stroke.centerline, &stroke.pixels, &level.mask, &original.mask) {
            let c = f4.coeffs();
            return Some(ScribbleRecord {
                class_id: original.class_id,
                instance_id: original.instance_id,
                axis,
                coeffs: [c[0], c[1], c[2], c[3], c[4]],
                t_range,
                centerline: stroke.centerline,
                pixels: stroke.pixels,
                thickness: profile.thickness,
            });
        }
    }
    None
}
