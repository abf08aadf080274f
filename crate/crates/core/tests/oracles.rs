//! Library kernels against independent reference implementations.

mod common;

use std::fs::File;
use std::io::BufWriter;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use scribkit::fit::fit_polynomial;
use scribkit::model::load_label_grid;
use scribkit::morphology::{binary_erode, skeletonize};
use scribkit::{Axis, Mask, PointF64};

use common::{random_mask, rng};

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact least squares through the normal equations, solved by Gauss-Jordan
/// elimination over the rationals.
fn exact_fit(ts: &[i64], vs: &[i64], degree: usize) -> Vec<BigRational> {
    let m = degree + 1;
    let pow = |t: i64, k: usize| rat(t).pow(k as i32);
    let mut a = vec![vec![BigRational::zero(); m + 1]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().take(m).enumerate() {
            *cell = ts.iter().map(|&t| pow(t, i + j)).fold(BigRational::zero(), |s, x| s + x);
        }
        row[m] = ts.iter().zip(vs).map(|(&t, &v)| pow(t, i) * rat(v)).fold(BigRational::zero(), |s, x| s + x);
    }
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero()).expect("normal matrix is singular");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[m].clone()).collect()
}

fn eval_exact(coeffs: &[BigRational], t: i64) -> f64 {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * rat(t) + c.clone()).to_f64().unwrap()
}

#[test]
fn least_squares_matches_exact_rational_solution() {
    let mut r = rng(11);
    for case in 0..300 {
        let degree = if case % 2 == 0 { 2 } else { 4 };
        let n = r.random_range(degree + 1..=12);
        let mut ts: Vec<i64> = Vec::new();
        while ts.len() < n {
            let t = r.random_range(-60..=60);
            // distinct abscissae keep the system full rank
            if !ts.contains(&t) {
                ts.push(t);
            }
        }
        let vs: Vec<i64> = (0..n).map(|_| r.random_range(-80..=80)).collect();
        let axis = if case % 3 == 0 { Axis::Vertical } else { Axis::Horizontal };
        let points: Vec<PointF64> =
            ts.iter().zip(&vs).map(|(&t, &v)| PointF64::from_axis(axis, t as f64, v as f64)).collect();
        let curve = fit_polynomial(&points, degree, axis).unwrap();
        let exact = exact_fit(&ts, &vs, degree);
        for t in -60..=60 {
            let want = eval_exact(&exact, t);
            let got = curve.eval(t as f64);
            assert!((want - got).abs() <= 1e-6 * (1.0 + want.abs()), "case {case} t={t}: {got} vs {want}");
        }
    }
}

/// Textbook Zhang–Suen: scan every cell in both sub-iterations until a full
/// iteration deletes nothing. Outside the frame counts as background.
fn reference_zhang_suen(cells: &[bool], w: usize, h: usize) -> Vec<bool> {
    let mut g = cells.to_vec();
    let at =
        |g: &[bool], x: i64, y: i64| x >= 0 && y >= 0 && x < w as i64 && y < h as i64 && g[y as usize * w + x as usize];
    loop {
        let mut changed = false;
        for sub in 0..2 {
            let mut delete = Vec::new();
            for y in 0..h as i64 {
                for x in 0..w as i64 {
                    if !at(&g, x, y) {
                        continue;
                    }
                    let p = [
                        at(&g, x, y - 1),
                        at(&g, x + 1, y - 1),
                        at(&g, x + 1, y),
                        at(&g, x + 1, y + 1),
                        at(&g, x, y + 1),
                        at(&g, x - 1, y + 1),
                        at(&g, x - 1, y),
                        at(&g, x - 1, y - 1),
                    ];
                    let b = p.iter().filter(|&&v| v).count();
                    let a = (0..8).filter(|&k| !p[k] && p[(k + 1) % 8]).count();
                    let (p2, p4, p6, p8) = (p[0], p[2], p[4], p[6]);
                    let cond = if sub == 0 {
                        !(p2 && p4 && p6) && !(p4 && p6 && p8)
                    } else {
                        !(p2 && p4 && p8) && !(p2 && p6 && p8)
                    };
                    if (2..=6).contains(&b) && a == 1 && cond {
                        delete.push(y as usize * w + x as usize);
                    }
                }
            }
            changed |= !delete.is_empty();
            for i in delete {
                g[i] = false;
            }
        }
        if !changed {
            return g;
        }
    }
}

#[test]
fn thinning_matches_reference() {
    let mut r = rng(12);
    let mut guarded = 0;
    for case in 0..400 {
        let (w, h) = (r.random_range(1..=24), r.random_range(1..=24));
        let m = if case % 2 == 0 {
            let p = r.random_range(0.3..0.9);
            random_mask(&mut r, w, h, p)
        } else {
            let g = common::blocky_grid(&mut r, w, h, 2);
            Mask::from_cells(w, h, g.labels().iter().map(|&v| v == 1).collect()).unwrap()
        };
        let cells: Vec<bool> = (0..w * h).map(|i| m.get((i % w) as i64, (i / w) as i64)).collect();
        let want = reference_zhang_suen(&cells, w, h);
        let got = skeletonize(&m);
        let got_cells: Vec<bool> = (0..w * h).map(|i| got.get((i % w) as i64, (i / w) as i64)).collect();
        if want.iter().any(|&v| v) || m.is_clear() {
            assert_eq!(got_cells, want, "case {case}");
        } else {
            // the reference erased everything; the guard keeps one input cell
            guarded += 1;
            assert_eq!(got.count(), 1, "case {case}");
            assert!(got.is_subset_of(&m));
        }
    }
    assert!(guarded > 0);
}

#[test]
fn erosion_matches_iterated_cross() {
    let mut r = rng(13);
    for _ in 0..200 {
        let (w, h) = (r.random_range(1..=30), r.random_range(1..=30));
        let p = r.random_range(0.5..0.98);
        let m = random_mask(&mut r, w, h, p);
        let mut cur: Vec<bool> = (0..w * h).map(|i| m.get((i % w) as i64, (i / w) as i64)).collect();
        for radius in 0..6u32 {
            let got = binary_erode(&m, radius);
            let got_cells: Vec<bool> = (0..w * h).map(|i| got.get((i % w) as i64, (i / w) as i64)).collect();
            assert_eq!(got_cells, cur, "radius {radius}");
            let at =
                |x: i64, y: i64| x >= 0 && y >= 0 && x < w as i64 && y < h as i64 && cur[y as usize * w + x as usize];
            cur = (0..w * h)
                .map(|i| {
                    let (x, y) = ((i % w) as i64, (i / w) as i64);
                    at(x, y) && at(x - 1, y) && at(x + 1, y) && at(x, y - 1) && at(x, y + 1)
                })
                .collect();
        }
    }
}

fn write_palette_png(path: &std::path::Path, w: u32, h: u32, depth: png::BitDepth, palette: &[u8], indices: &[u8]) {
    let mut enc = png::Encoder::new(BufWriter::new(File::create(path).unwrap()), w, h);
    enc.set_color(png::ColorType::Indexed);
    enc.set_depth(depth);
    enc.set_palette(palette.to_vec());
    let bits = depth as usize;
    let per_byte = 8 / bits;
    let stride = (w as usize).div_ceil(per_byte);
    let mut data = vec![0u8; stride * h as usize];
    for y in 0..h as usize {
        for x in 0..w as usize {
            let shift = 8 - bits * (x % per_byte + 1);
            data[y * stride + x / per_byte] |= indices[y * w as usize + x] << shift;
        }
    }
    let mut writer = enc.write_header().unwrap();
    writer.write_image_data(&data).unwrap();
}

#[test]
fn palette_indices_agree_with_image_decoder() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(14);
    for (depth, n_colors) in [(png::BitDepth::Eight, 256usize), (png::BitDepth::Four, 16), (png::BitDepth::Two, 4)] {
        let (w, h) = (r.random_range(1..40u32), r.random_range(1..40u32));
        let palette: Vec<u8> = (0..n_colors * 3).map(|_| r.random()).collect();
        let indices: Vec<u8> = (0..w * h).map(|_| r.random_range(0..n_colors) as u8).collect();
        let path = dir.path().join(format!("p{}.png", depth as u8));
        write_palette_png(&path, w, h, depth, &palette, &indices);

        let grid = load_label_grid(&path, 255).unwrap();
        let rgb = image::open(&path).unwrap().to_rgb8();
        assert_eq!((grid.width(), grid.height()), (w as usize, h as usize));
        for (i, &idx) in grid.labels().iter().enumerate() {
            assert_eq!(idx, indices[i] as u16);
            let px = rgb.get_pixel(i as u32 % w, i as u32 / w).0;
            let k = idx as usize * 3;
            assert_eq!(px, [palette[k], palette[k + 1], palette[k + 2]], "pixel {i}");
        }
    }
}
