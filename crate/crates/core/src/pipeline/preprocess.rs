use crate::model::{BinaryBlob, LabelGrid, Mask};
use crate::morphology::erosion::{l1_depth, threshold_depth};
use crate::morphology::{connected_components, label_components};
use crate::pipeline::{epsilon1, ParameterProfile};

/// One unit of generation work: an original blob and one seed part of its
/// area-dependent erosion.
#[derive(Debug, Clone)]
pub struct PreparedObject {
    pub blob: BinaryBlob,
    pub seed: Mask,
    /// Index of this part among the kept parts of `blob`.
    pub part: u32,
}

#[derive(Debug, Clone, Default)]
pub struct Preprocessed {
    pub objects: Vec<PreparedObject>,
    /// Components below `min_blob_px`.
    pub skipped_small: usize,
}

/// Erodes `blob` by its area-dependent radius. If that empties it, the radius
/// is halved (floor) until something survives; radius 0 returns the blob.
pub(crate) fn erode_for_seed(blob: &BinaryBlob, total_px: usize, profile: &ParameterProfile) -> Mask {
    let fraction = blob.area as f64 / total_px.max(1) as f64;
    let mut radius = epsilon1(fraction, profile);
    let depth = l1_depth(&blob.mask);
    let deepest = depth.iter().copied().max().unwrap_or(0);
    while radius > 0 && deepest <= radius {
        radius /= 2;
    }
    threshold_depth(&blob.mask, &depth, radius)
}

/// Class separation, component analysis, size filtering and initial erosion.
///
/// When the initial erosion splits a blob, every part of at least
/// `min_blob_px` becomes its own object; if no part is that large, only the
/// largest part is kept. Instance ids number all components of the image in
/// class-then-raster order, small ones included.
pub fn preprocess_objects(grid: &LabelGrid, profile: &ParameterProfile) -> Preprocessed {
    let mut out = Preprocessed::default();
    for blob in label_components(grid, profile.connectivity) {
        if blob.area < profile.min_blob_px {
            out.skipped_small += 1;
            continue;
        }
        let seed = erode_for_seed(&blob, grid.len(), profile);
        let mut parts = connected_components(&seed, profile.connectivity);
        if parts.len() > 1 {
            let largest = parts
                .iter()
                .enumerate()
                .max_by(|(ia, a), (ib, b)| a.area.cmp(&b.area).then(ib.cmp(ia)))
                .map(|(i, _)| i)
                .expect("non-empty");
            let big: Vec<BinaryBlob> = parts.iter().filter(|p| p.area >= profile.min_blob_px).cloned().collect();
            parts = if big.is_empty() { vec![parts.swap_remove(largest)] } else { big };
        }
        for (k, part) in parts.into_iter().enumerate() {
            out.objects.push(PreparedObject { blob: blob.clone(), seed: part.mask, part: k as u32 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_from(rows: &[&str]) -> LabelGrid {
        let h = rows.len();
        let w = rows[0].len();
        let labels = rows.iter().flat_map(|r| r.bytes().map(|b| if b == b'#' { 1 } else { 0 })).collect();
        LabelGrid::new(w, h, labels, 255).unwrap()
    }

    #[test]
    fn square_is_one_object() {
        let labels: Vec<u16> = (0..100 * 100)
            .map(|i| {
                let (x, y) = (i % 100, i / 100);
                u16::from((20..70).contains(&x) && (20..70).contains(&y))
            })
            .collect();
        let g = LabelGrid::new(100, 100, labels, 255).unwrap();
        let mut p = ParameterProfile::s4pascal();
        p.min_blob_px = 80;
        let pre = preprocess_objects(&g, &p);
        // background ring and the square
        assert_eq!(pre.objects.len(), 2);
        let sq = pre.objects.iter().find(|o| o.blob.class_id == 1).unwrap();
        assert_eq!(sq.blob.area, 2500);
    }

    #[test]
    fn small_blob_dropped() {
        let mut labels = vec![0u16; 200 * 200];
        for i in 0..79 {
            labels[(50 + i / 10) * 200 + 50 + i % 10] = 1;
        }
        let g = LabelGrid::new(200, 200, labels, 255).unwrap();
        let pre = preprocess_objects(&g, &ParameterProfile::s4pascal());
        assert_eq!(pre.skipped_small, 1);
        assert!(pre.objects.iter().all(|o| o.blob.class_id == 0));
    }

    #[test]
    fn dumbbell_splits_into_two_objects() {
        let mut rows = Vec::new();
        for y in 0..15 {
            let row: String = (0..40)
                .map(|x| {
                    let left = (1..14).contains(&x) && (1..14).contains(&y);
                    let right = (26..39).contains(&x) && (1..14).contains(&y);
                    let bar = (14..26).contains(&x) && y == 7;
                    if left || right || bar {
                        '#'
                    } else {
                        '.'
                    }
                })
                .collect();
            rows.push(row);
        }
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let g = grid_from(&refs);
        let mut p = ParameterProfile::s4pascal();
        // radius 20 -> 10 -> 5 leaves two 3x3 cores; the bar is gone
        p.min_blob_px = 5;
        let pre = preprocess_objects(&g, &p);
        let ones: Vec<_> = pre.objects.iter().filter(|o| o.blob.class_id == 1).collect();
        assert_eq!(ones.len(), 2);
        assert_eq!(ones[0].blob.instance_id, ones[1].blob.instance_id);
        let seeds_disjoint = ones[0].seed.points().all(|q| !ones[1].seed.contains(q));
        assert!(seeds_disjoint);
    }

    #[test]
    fn radius_halves_until_something_survives() {
        let g = grid_from(&["......", ".####.", ".####.", "......"]);
        let mut p = ParameterProfile::s4pascal();
        p.min_blob_px = 1;
        p.eps1.cap = 8.0;
        let pre = preprocess_objects(&g, &p);
        let obj = pre.objects.iter().find(|o| o.blob.class_id == 1).unwrap();
        // radius 8 -> 4 -> 2 -> 1 all empty a 2-row bar; 0 keeps it whole
        assert_eq!(obj.seed.count(), 8);
    }
}
