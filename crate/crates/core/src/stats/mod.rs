//! Dataset characterization: labeled share, boundary proximity, scribble
//! counts and per-class distributions for paired dense/scribble rasters.

mod report;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::LabelGrid;
use crate::morphology::{boundary_distance_field, DistanceField};

pub use report::{
    dataset_stats, image_stats, render_report, ClassStats, DatasetStats, ImageStats, StatsAccumulator, StatsOptions,
    Threshold,
};

/// Share of the image covered by scribbles, in percent.
pub fn pct_labeled(scribble: &LabelGrid, total_px: usize) -> Result<f64> {
    if total_px == 0 {
        return Err(Error::Empty("zero-size image"));
    }
    Ok(100.0 * scribble.labeled_count() as f64 / total_px as f64)
}

fn check_pair(scribble: &LabelGrid, dense: &LabelGrid) -> Result<()> {
    if (scribble.width(), scribble.height()) != (dense.width(), dense.height()) {
        return Err(Error::InvalidGrid(format!(
            "scribble grid is {}x{} but dense grid is {}x{}",
            scribble.width(),
            scribble.height(),
            dense.width(),
            dense.height()
        )));
    }
    Ok(())
}

/// Whether a boundary distance is at most `d`. Distances are square roots of
/// integers, so this comparison is exact.
pub(crate) fn within(dist: f64, d: u32) -> bool {
    dist <= d as f64
}

/// `alpha_share` against a precomputed boundary distance field.
pub fn alpha_share_in(scribble: &LabelGrid, field: &DistanceField<f64>, d: u32) -> Result<f64> {
    let mut labeled = 0usize;
    let mut near = 0usize;
    for (i, &v) in scribble.labels().iter().enumerate() {
        if v == scribble.ignore_value() {
            continue;
        }
        labeled += 1;
        if within(field.values()[i], d) {
            near += 1;
        }
    }
    if labeled == 0 {
        return Err(Error::Empty("no scribble-labeled cells"));
    }
    Ok(100.0 * near as f64 / labeled as f64)
}

/// Percentage of scribble-labeled cells within `d` pixels of a class boundary
/// of `dense`. The ignore value counts as a class of its own.
pub fn alpha_share(scribble: &LabelGrid, dense: &LabelGrid, d: u32) -> Result<f64> {
    check_pair(scribble, dense)?;
    alpha_share_in(scribble, &boundary_distance_field(dense, true), d)
}

pub fn avg_scribbles(counts: &[usize]) -> Result<f64> {
    if counts.is_empty() {
        return Err(Error::Empty("no images"));
    }
    Ok(counts.iter().sum::<usize>() as f64 / counts.len() as f64)
}

/// Per class: (share of all scribble pixels, share of all non-ignore dense
/// pixels), both in percent.
pub fn class_distribution(pairs: &[(LabelGrid, LabelGrid)]) -> Result<BTreeMap<u16, (f64, f64)>> {
    let mut acc = StatsAccumulator::new(&[]);
    for (s, d) in pairs {
        acc.add(image_stats(s, d, &[], true, None)?);
    }
    let stats = acc.finish();
    Ok(stats.per_class.into_iter().map(|(c, cs)| (c, (cs.scribble_share, cs.dense_share))).collect())
}

/// [`alpha_share`] restricted to each class's scribble cells, pooled over
/// all pairs. Classes present only in the dense grids map to `None`.
pub fn per_class_boundary_share(pairs: &[(LabelGrid, LabelGrid)], d: u32) -> Result<BTreeMap<u16, Option<f64>>> {
    let mut acc = StatsAccumulator::new(&[d]);
    for (s, g) in pairs {
        acc.add(image_stats(s, g, &[d], true, None)?);
    }
    let stats = acc.finish();
    Ok(stats
        .per_class
        .into_iter()
        .map(|(c, cs)| (c, cs.boundary_share.get(&Threshold(d)).copied().flatten()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize, labels: Vec<u16>) -> LabelGrid {
        LabelGrid::new(w, h, labels, 255).unwrap()
    }

    #[test]
    fn labeled_share() {
        let mut l = vec![255u16; 100];
        l[..4].fill(3);
        assert_eq!(pct_labeled(&grid(10, 10, l), 100).unwrap(), 4.0);
        assert_eq!(pct_labeled(&grid(10, 10, vec![255; 100]), 100).unwrap(), 0.0);
        assert!(pct_labeled(&grid(10, 10, vec![255; 100]), 0).is_err());
    }

    #[test]
    fn alpha_basics() {
        // dense: left half 0, right half 1; boundary at x = 4 and 5
        let dense = grid(10, 4, (0..40).map(|i| u16::from(i % 10 >= 5)).collect());
        let mut s = vec![255u16; 40];
        s[4] = 0;
        s[10] = 0;
        let scrib = grid(10, 4, s);
        assert_eq!(alpha_share(&scrib, &dense, 10).unwrap(), 100.0);
        assert_eq!(alpha_share(&scrib, &dense, 3).unwrap(), 50.0);
        let flat = grid(10, 4, vec![0; 40]);
        assert_eq!(alpha_share(&scrib, &flat, 10).unwrap(), 0.0);
        assert!(alpha_share(&grid(10, 4, vec![255; 40]), &dense, 10).is_err());
    }

    #[test]
    fn averages() {
        assert_eq!(avg_scribbles(&[4, 6]).unwrap(), 5.0);
        assert_eq!(avg_scribbles(&[0]).unwrap(), 0.0);
        assert!(avg_scribbles(&[]).is_err());
    }

    #[test]
    fn distributions() {
        let dense = grid(4, 1, vec![1, 1, 2, 2]);
        let one = grid(4, 1, vec![1, 255, 255, 255]);
        let d = class_distribution(&[(one.clone(), grid(4, 1, vec![1; 4]))]).unwrap();
        assert_eq!(d[&1], (100.0, 100.0));
        let two = grid(4, 1, vec![1, 255, 2, 255]);
        let d = class_distribution(&[(two, dense.clone())]).unwrap();
        assert_eq!(d[&1].0, 50.0);
        assert_eq!(d[&2].0, 50.0);
        let b = per_class_boundary_share(&[(one, dense)], 10).unwrap();
        assert_eq!(b[&1], Some(100.0));
        assert_eq!(b[&2], None);
    }
}
