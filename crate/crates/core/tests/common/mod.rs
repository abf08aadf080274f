//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scribkit::model::write_label_grid;
use scribkit::{LabelGrid, Mask, PointI};

pub const IGNORE: u16 = 255;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct FuzzSpec {
    pub width: usize,
    pub height: usize,
    pub n_classes: u16,
    pub n_shapes: usize,
    /// Half-width of the ignore band painted over class boundaries; 0 for none.
    pub band: usize,
}

impl FuzzSpec {
    pub fn random(r: &mut ChaCha8Rng, min_side: usize, max_side: usize) -> Self {
        Self {
            width: r.random_range(min_side..=max_side),
            height: r.random_range(min_side..=max_side),
            n_classes: r.random_range(2..=20),
            n_shapes: r.random_range(1..=12),
            band: r.random_range(0..=2),
        }
    }
}

fn inside_polygon(poly: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Random multi-class label grid: a background class with rectangles,
/// ellipses and star-shaped polygons painted over it, then optionally an
/// ignore band over every class boundary.
pub fn fuzz_grid(r: &mut ChaCha8Rng, spec: FuzzSpec) -> LabelGrid {
    let (w, h) = (spec.width, spec.height);
    let mut labels = vec![0u16; w * h];
    let (wf, hf) = (w as f64, h as f64);
    for _ in 0..spec.n_shapes {
        let class = r.random_range(1..spec.n_classes.max(2));
        let cx = r.random_range(0.0..wf);
        let cy = r.random_range(0.0..hf);
        let rx = r.random_range(0.05..0.45) * wf;
        let ry = r.random_range(0.05..0.45) * hf;
        match r.random_range(0..3) {
            0 => {
                for y in 0..h {
                    for x in 0..w {
                        if (x as f64 - cx).abs() <= rx && (y as f64 - cy).abs() <= ry {
                            labels[y * w + x] = class;
                        }
                    }
                }
            }
            1 => {
                for y in 0..h {
                    for x in 0..w {
                        let (dx, dy) = ((x as f64 - cx) / rx, (y as f64 - cy) / ry);
                        if dx * dx + dy * dy <= 1.0 {
                            labels[y * w + x] = class;
                        }
                    }
                }
            }
            _ => {
                let k = r.random_range(3..10);
                let mut angles: Vec<f64> = (0..k).map(|_| r.random_range(0.0..std::f64::consts::TAU)).collect();
                angles.sort_by(f64::total_cmp);
                let poly: Vec<(f64, f64)> = angles
                    .iter()
                    .map(|&a| {
                        let s = r.random_range(0.3..1.0);
                        (cx + s * rx * a.cos(), cy + s * ry * a.sin())
                    })
                    .collect();
                for y in 0..h {
                    for x in 0..w {
                        if inside_polygon(&poly, x as f64, y as f64) {
                            labels[y * w + x] = class;
                        }
                    }
                }
            }
        }
    }
    if spec.band > 0 {
        let b = spec.band as i64;
        let mut boundary = vec![false; w * h];
        for y in 0..h {
            for x in 0..w {
                let v = labels[y * w + x];
                let differs = (x + 1 < w && labels[y * w + x + 1] != v) || (y + 1 < h && labels[(y + 1) * w + x] != v);
                boundary[y * w + x] = differs;
            }
        }
        let mut out = labels.clone();
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                if !boundary[(y as usize) * w + x as usize] {
                    continue;
                }
                for yy in (y - b + 1).max(0)..=(y + b).min(h as i64 - 1) {
                    for xx in (x - b + 1).max(0)..=(x + b).min(w as i64 - 1) {
                        out[yy as usize * w + xx as usize] = IGNORE;
                    }
                }
            }
        }
        labels = out;
    }
    LabelGrid::new(w, h, labels, IGNORE).unwrap()
}

/// Random binary mask with density `p` over a `w × h` frame.
pub fn random_mask(r: &mut ChaCha8Rng, w: usize, h: usize, p: f64) -> Mask {
    let cells = (0..w * h).map(|_| r.random_bool(p)).collect();
    Mask::from_cells(w, h, cells).unwrap()
}

/// Random label grid with `k` values per cell (ignore mixed in when `with_ignore`).
pub fn random_grid(r: &mut ChaCha8Rng, w: usize, h: usize, k: u16, with_ignore: bool) -> LabelGrid {
    let labels =
        (0..w * h).map(|_| if with_ignore && r.random_bool(0.1) { IGNORE } else { r.random_range(0..k) }).collect();
    LabelGrid::new(w, h, labels, IGNORE).unwrap()
}

/// Blocky random grid: a few painted rectangles, so components are larger.
pub fn blocky_grid(r: &mut ChaCha8Rng, w: usize, h: usize, k: u16) -> LabelGrid {
    let mut labels = vec![0u16; w * h];
    for _ in 0..r.random_range(1..8) {
        let (x0, y0) = (r.random_range(0..w), r.random_range(0..h));
        let (x1, y1) = (r.random_range(x0..w), r.random_range(y0..h));
        let c = r.random_range(0..k);
        for y in y0..=y1 {
            for x in x0..=x1 {
                labels[y * w + x] = c;
            }
        }
    }
    LabelGrid::new(w, h, labels, IGNORE).unwrap()
}

/// BFS flood fill over a full-frame boolean grid: component sizes in order of
/// their first cell in raster order.
pub fn flood_fill_sizes(cells: &[bool], w: usize, h: usize, eight: bool) -> Vec<usize> {
    let mut seen = vec![false; w * h];
    let mut sizes = Vec::new();
    let mut q = VecDeque::new();
    for start in 0..w * h {
        if !cells[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        q.push_back(start);
        let mut n = 0;
        while let Some(i) = q.pop_front() {
            n += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    if (dx, dy) == (0, 0) || (!eight && dx != 0 && dy != 0) {
                        continue;
                    }
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if cells[j] && !seen[j] {
                        seen[j] = true;
                        q.push_back(j);
                    }
                }
            }
        }
        sizes.push(n);
    }
    sizes
}

/// Boundary cells by direct definition: a 4-neighbor with another value.
pub fn brute_boundary(g: &LabelGrid) -> Vec<(usize, usize)> {
    let (w, h) = (g.width(), g.height());
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = g.get(x, y);
            let nbrs = [(x.wrapping_sub(1), y), (x + 1, y), (x, y.wrapping_sub(1)), (x, y + 1)];
            if nbrs.iter().any(|&(nx, ny)| nx < w && ny < h && g.get(nx, ny) != v) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Squared distance to the nearest boundary cell by exhaustive scan;
/// `None` when the grid has no boundary.
pub fn brute_sq_distance(g: &LabelGrid) -> Vec<Option<i64>> {
    let b = brute_boundary(g);
    let (w, h) = (g.width(), g.height());
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            b.iter().map(|&(bx, by)| (bx as i64 - x).pow(2) + (by as i64 - y).pow(2)).min()
        })
        .collect()
}

/// Per-pixel alpha oracle: scribble cells with brute-force distance ≤ d.
pub fn brute_alpha(scribble: &LabelGrid, dense: &LabelGrid, d: i64) -> Option<f64> {
    let dist = brute_sq_distance(dense);
    let mut labeled = 0;
    let mut near = 0;
    for (i, &v) in scribble.labels().iter().enumerate() {
        if v == scribble.ignore_value() {
            continue;
        }
        labeled += 1;
        if dist[i].is_some_and(|s| s <= d * d) {
            near += 1;
        }
    }
    (labeled > 0).then(|| 100.0 * near as f64 / labeled as f64)
}

/// Independent farthest-pair scan over all ordered pairs, keeping the
/// smallest sorted pair among ties.
pub fn brute_farthest(points: &[PointI]) -> (PointI, PointI) {
    let mut all = Vec::new();
    for &a in points {
        for &b in points {
            if a != b {
                let (lo, hi) = if (a.y, a.x) < (b.y, b.x) { (a, b) } else { (b, a) };
                all.push((-(a.dist2(b)), (lo.y, lo.x), (hi.y, hi.x), lo, hi));
            }
        }
    }
    all.sort_by_key(|e| (e.0, e.1, e.2));
    (all[0].3, all[0].4)
}

/// Writes `n` fuzzed rasters of the given size to `dir` as `img_XXXX.png`.
pub fn write_corpus(dir: &Path, n: usize, width: usize, height: usize, seed: u64, n_shapes: usize) {
    std::fs::create_dir_all(dir).unwrap();
    let mut r = rng(seed);
    for i in 0..n {
        let spec = FuzzSpec { width, height, n_classes: 21, n_shapes, band: r.random_range(0..=2) };
        let g = fuzz_grid(&mut r, spec);
        write_label_grid(&g, &dir.join(format!("img_{i:04}.png"))).unwrap();
    }
}

/// Every file below `dir` with its bytes, keyed by relative path.
pub fn snapshot(dir: &Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            let rel = e.path().strip_prefix(dir).unwrap().to_string_lossy().into_owned();
            (rel, std::fs::read(e.path()).unwrap())
        })
        .collect()
}
