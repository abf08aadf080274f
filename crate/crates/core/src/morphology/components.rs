use serde::{Deserialize, Serialize};

use crate::model::{BinaryBlob, LabelGrid, Mask};

/// Pixel adjacency used for component analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Connectivity {
    #[serde(rename = "4")]
    Four,
    #[default]
    #[serde(rename = "8")]
    Eight,
}

/// One full-frame mask per class present, in ascending class order. The
/// ignore value gets no mask.
pub fn separate_classes(grid: &LabelGrid) -> Vec<(u16, Mask)> {
    let (w, h) = (grid.width(), grid.height());
    grid.classes_present()
        .into_iter()
        .map(|class| {
            let cells = grid.labels().iter().map(|&v| v == class).collect();
            (class, Mask::from_cells(w, h, cells).expect("same shape as grid"))
        })
        .collect()
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let p = parent[i as usize];
        parent[i as usize] = parent[p as usize];
        i = p;
    }
    i
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // keep the older (smaller) label as root so first-seen order survives
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Two-pass union-find labeling of a `w × h` raster. `fg(i)` marks
/// foreground cells and `same(i, j)` whether two foreground cells may join.
/// Returns per-cell labels (0 = background, components numbered from 1 in
/// raster order of their first cell) and the component count.
fn label_raster(
    w: usize,
    h: usize,
    connectivity: Connectivity,
    fg: impl Fn(usize) -> bool,
    same: impl Fn(usize, usize) -> bool,
) -> (Vec<u32>, usize) {
    let mut labels = vec![0u32; w * h];
    let mut parent: Vec<u32> = vec![0];
    let eight = connectivity == Connectivity::Eight;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !fg(i) {
                continue;
            }
            if eight && y > 0 && labels[i - w] != 0 && same(i, i - w) {
                // the other upper and left neighbors touch the one above, so
                // any of them that qualify already share its set
                labels[i] = labels[i - w];
                continue;
            }
            let mut neighbors = [0u32; 4];
            let mut n = 0;
            let mut consider = |j: usize| {
                if labels[j] != 0 && same(i, j) {
                    neighbors[n] = labels[j];
                    n += 1;
                }
            };
            if x > 0 {
                consider(i - 1);
            }
            if y > 0 {
                consider(i - w);
                if eight && x > 0 {
                    consider(i - w - 1);
                }
                if eight && x + 1 < w {
                    consider(i - w + 1);
                }
            }
            if n == 0 {
                let l = parent.len() as u32;
                parent.push(l);
                labels[i] = l;
            } else {
                let l = *neighbors[..n].iter().min().expect("n > 0");
                labels[i] = l;
                for &other in &neighbors[..n] {
                    union(&mut parent, l, other);
                }
            }
        }
    }
    // Provisional labels are created in raster order and roots are always
    // the smallest member, so relabelling roots in increasing order yields
    // components ordered by their first cell.
    let mut dense = vec![0u32; parent.len()];
    let mut count = 0usize;
    for l in 1..parent.len() as u32 {
        let r = find(&mut parent, l);
        if r == l {
            count += 1;
            dense[l as usize] = count as u32;
        } else {
            dense[l as usize] = dense[r as usize];
        }
    }
    for l in labels.iter_mut() {
        *l = dense[*l as usize];
    }
    (labels, count)
}

/// Cuts labeled components out of a raster whose window starts at `(x0, y0)`
/// in a `fw × fh` frame. Masks are cropped to bbox plus a one-pixel margin.
/// Only labels for which `wanted` holds are cut; others map to `None`.
fn extract(
    labels: &[u32],
    count: usize,
    w: usize,
    (x0, y0): (usize, usize),
    (fw, fh): (usize, usize),
    wanted: impl Fn(usize) -> bool,
) -> Vec<Option<Mask>> {
    let mut boxes: Vec<Option<(usize, usize, usize, usize)>> = vec![None; count];
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let (x, y) = (i % w, i / w);
        let b = &mut boxes[l as usize - 1];
        *b = Some(match *b {
            None => (x, y, x, y),
            Some((a, b0, c, d)) => (a.min(x), b0.min(y), c.max(x), d.max(y)),
        });
    }
    // windows in local coordinates, one-pixel margin clipped to the frame
    let rects: Vec<(usize, usize, usize, usize)> = boxes
        .iter()
        .map(|b| {
            let (mx, my, xx, xy) = b.expect("every label has cells");
            let wx0 = (x0 + mx).saturating_sub(1);
            let wy0 = (y0 + my).saturating_sub(1);
            let wx1 = (x0 + xx + 1).min(fw - 1);
            let wy1 = (y0 + xy + 1).min(fh - 1);
            (wx0, wy0, wx1 - wx0 + 1, wy1 - wy0 + 1)
        })
        .collect();
    let mut out: Vec<Option<Mask>> = rects
        .iter()
        .enumerate()
        .map(|(k, &(wx, wy, ww, wh))| wanted(k).then(|| Mask::window(fw, fh, wx, wy, ww, wh)))
        .collect();
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let k = l as usize - 1;
        if let Some(m) = out[k].as_mut() {
            let (wx, wy, ww, _) = rects[k];
            let (x, y) = (x0 + i % w, y0 + i / w);
            m.local_cells_mut()[(y - wy) * ww + (x - wx)] = true;
        }
    }
    out
}

/// Connected components of `mask`, ordered by their first cell in raster
/// order. Each blob mask is cropped to its bounding box plus a one-pixel
/// margin. `class_id` is 0 and `instance_id` is the component index.
pub fn connected_components(mask: &Mask, connectivity: Connectivity) -> Vec<BinaryBlob> {
    let (x0, y0, w, h) = mask.window_rect();
    let cells = mask.local_cells();
    let (labels, count) = label_raster(w, h, connectivity, |i| cells[i], |_, _| true);
    extract(&labels, count, w, (x0, y0), (mask.frame_width(), mask.frame_height()), |_| true)
        .into_iter()
        .enumerate()
        .map(|(i, m)| BinaryBlob::from_mask(m.expect("all wanted"), 0, i as u32).expect("component is non-empty"))
        .collect()
}

/// Single-class connected components of every non-ignore class in one
/// labeling pass. Ordered by class, then by first cell in raster order; the
/// same blobs as [`separate_classes`] followed by [`connected_components`].
/// `instance_id` is the position in the returned list.
pub fn label_components(grid: &LabelGrid, connectivity: Connectivity) -> Vec<BinaryBlob> {
    let (w, h) = (grid.width(), grid.height());
    let v = grid.labels();
    let ignore = grid.ignore_value();
    let (labels, count) = label_raster(w, h, connectivity, |i| v[i] != ignore, |i, j| v[i] == v[j]);
    let mut class_of = vec![0u16; count];
    for (i, &l) in labels.iter().enumerate() {
        if l != 0 {
            class_of[l as usize - 1] = v[i];
        }
    }
    let mut blobs: Vec<BinaryBlob> = extract(&labels, count, w, (0, 0), (w, h), |_| true)
        .into_iter()
        .zip(class_of)
        .map(|(m, c)| BinaryBlob::from_mask(m.expect("all wanted"), c, 0).expect("component is non-empty"))
        .collect();
    blobs.sort_by_key(|b| b.class_id);
    for (i, b) in blobs.iter_mut().enumerate() {
        b.instance_id = i as u32;
    }
    blobs
}

/// The component with the largest area; ties go to the one whose first cell
/// comes first in raster order.
pub fn largest_component(mask: &Mask, connectivity: Connectivity) -> Option<BinaryBlob> {
    let (x0, y0, w, h) = mask.window_rect();
    let cells = mask.local_cells();
    let (labels, count) = label_raster(w, h, connectivity, |i| cells[i], |_, _| true);
    if count == 0 {
        return None;
    }
    let mut areas = vec![0usize; count];
    for &l in &labels {
        if l != 0 {
            areas[l as usize - 1] += 1;
        }
    }
    let best = (0..count).max_by(|&a, &b| areas[a].cmp(&areas[b]).then(b.cmp(&a)))?;
    let m = extract(&labels, count, w, (x0, y0), (mask.frame_width(), mask.frame_height()), |k| k == best)
        .swap_remove(best)
        .expect("wanted");
    Some(BinaryBlob::from_mask(m, 0, best as u32).expect("component is non-empty"))
}
