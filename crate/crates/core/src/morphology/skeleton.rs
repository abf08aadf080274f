use crate::error::{Error, Result};
use crate::model::{Mask, PointF, PointI};
use crate::morphology::center_of_mass;
use crate::scalar::Scalar;

/// Zhang–Suen thinning run to a fixpoint.
///
/// Thinning can erase some shapes outright (a 2×2 block, for instance); in
/// that case the input cell nearest the input's center of mass is kept so a
/// non-empty mask always yields a non-empty skeleton.
pub fn skeletonize(mask: &Mask) -> Mask {
    let (_, _, w, h) = mask.window_rect();
    // one-cell false border so neighbor reads need no bounds checks
    let pw = w + 2;
    let mut grid = vec![false; pw * (h + 2)];
    for (i, &c) in mask.local_cells().iter().enumerate() {
        grid[(i / w + 1) * pw + i % w + 1] = c;
    }
    // P2..P9 clockwise from north
    let offsets: [isize; 8] =
        [-(pw as isize), -(pw as isize) + 1, 1, pw as isize + 1, pw as isize, pw as isize - 1, -1, -(pw as isize) - 1];
    let nbrs = |grid: &[bool], i: usize| -> [bool; 8] { offsets.map(|o| grid[(i as isize + o) as usize]) };
    // Only cells with at most six set neighbors can be deleted, and a cell's
    // neighborhood changes only when a neighbor is deleted, so each
    // sub-iteration revisits just the border cells and the neighbors of the
    // previous deletions.
    let mut candidates: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] && nbrs(&grid, i).contains(&false)).collect();
    let mut queued = vec![false; grid.len()];
    let mut doomed = Vec::new();
    let mut idle_steps = 0;
    let mut step = 0;
    while idle_steps < 2 {
        doomed.clear();
        for &i in &candidates {
            if !grid[i] {
                continue;
            }
            let n = nbrs(&grid, i);
            let b = n.iter().filter(|&&v| v).count();
            if !(2..=6).contains(&b) {
                continue;
            }
            let a = (0..8).filter(|&k| !n[k] && n[(k + 1) % 8]).count();
            if a != 1 {
                continue;
            }
            let (p2, p4, p6, p8) = (n[0], n[2], n[4], n[6]);
            let ok =
                if step == 0 { !(p2 && p4 && p6) && !(p4 && p6 && p8) } else { !(p2 && p4 && p8) && !(p2 && p6 && p8) };
            if ok {
                doomed.push(i);
            }
        }
        for &i in &doomed {
            grid[i] = false;
        }
        idle_steps = if doomed.is_empty() { idle_steps + 1 } else { 0 };
        let mut next: Vec<usize> = Vec::with_capacity(candidates.len());
        for &i in candidates.iter().chain(&doomed) {
            for j in std::iter::once(i).chain(offsets.iter().map(|&o| (i as isize + o) as usize)) {
                if grid[j] && !queued[j] {
                    queued[j] = true;
                    next.push(j);
                }
            }
        }
        for &j in &next {
            queued[j] = false;
        }
        next.retain(|&j| nbrs(&grid, j).contains(&false));
        candidates = next;
        step = 1 - step;
    }
    let cells: Vec<bool> = (0..w * h).map(|i| grid[(i / w + 1) * pw + i % w + 1]).collect();
    let out = mask.with_cells(cells);
    if out.is_clear() {
        if let Ok(com) = center_of_mass::<f64>(mask) {
            let keep = nearest_skeleton_point(mask, com).expect("mask is non-empty");
            let mut single = mask.empty_like();
            single.set(keep.x as usize, keep.y as usize, true);
            return single;
        }
    }
    out
}

/// Skeleton cell closest to `p` in Euclidean distance; ties go to the cell
/// first in raster order.
pub fn nearest_skeleton_point<T: Scalar>(skeleton: &Mask, p: PointF<T>) -> Result<PointI> {
    let mut best: Option<(T, PointI)> = None;
    for q in skeleton.points() {
        let d = q.to_f::<T>().dist2(&p);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, q));
        }
    }
    best.map(|(_, q)| q).ok_or(Error::Empty("skeleton has no cells"))
}
