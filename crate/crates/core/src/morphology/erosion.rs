use crate::model::Mask;

/// City-block distance from every window cell to the nearest false cell,
/// with everything outside the window counting as false; 0 on false cells.
pub(crate) fn l1_depth(mask: &Mask) -> Vec<u32> {
    let (_, _, w, h) = mask.window_rect();
    let cells = mask.local_cells();
    let mut d = vec![0u32; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if cells[i] {
                let up = if y > 0 { d[i - w] } else { 0 };
                let left = if x > 0 { d[i - 1] } else { 0 };
                d[i] = up.min(left) + 1;
            }
        }
    }
    for y in (0..h).rev() {
        for x in (0..w).rev() {
            let i = y * w + x;
            if d[i] > 1 {
                let down = if y + 1 < h { d[i + w] } else { 0 };
                let right = if x + 1 < w { d[i + 1] } else { 0 };
                d[i] = d[i].min(down.min(right) + 1);
            }
        }
    }
    d
}

/// Cells of `mask` whose city-block depth exceeds `radius`.
pub(crate) fn threshold_depth(mask: &Mask, depth: &[u32], radius: u32) -> Mask {
    mask.with_cells(depth.iter().map(|&v| v > radius).collect())
}

/// `radius` iterations of erosion by the 3×3 cross. Cells outside the mask
/// window (and the frame) count as false.
///
/// Computed in one pass as a threshold of the city-block distance transform:
/// `radius` cross erosions equal one erosion by the L1 ball of that radius.
pub fn binary_erode(mask: &Mask, radius: u32) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    threshold_depth(mask, &l1_depth(mask), radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PointI;

    #[test]
    fn square_erodes_to_center() {
        let m = Mask::from_ascii(&[".....", ".###.", ".###.", ".###.", "....."]);
        let e = binary_erode(&m, 1);
        assert_eq!(e.points().collect::<Vec<_>>(), vec![PointI::new(2, 2)]);
        assert!(binary_erode(&m, 2).is_clear());
    }

    #[test]
    fn radius_zero_is_identity() {
        let m = Mask::from_ascii(&["#.#", "###", ".#."]);
        assert_eq!(binary_erode(&m, 0), m);
    }

    #[test]
    fn frame_edge_counts_as_background() {
        let m = Mask::from_ascii(&["###", "###", "###"]);
        let e = binary_erode(&m, 1);
        assert_eq!(e.points().collect::<Vec<_>>(), vec![PointI::new(1, 1)]);
    }
}
