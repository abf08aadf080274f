use crate::model::{Mask, PointI};
use crate::scalar::Scalar;

/// Sobel gradient magnitudes over the window of the source mask.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeGrid<T> {
    x0: usize,
    y0: usize,
    width: usize,
    height: usize,
    magnitudes: Vec<T>,
}

impl<T: Scalar> EdgeGrid<T> {
    /// Magnitude at frame coordinates; zero outside the window.
    pub fn get(&self, x: i64, y: i64) -> T {
        let lx = x - self.x0 as i64;
        let ly = y - self.y0 as i64;
        if lx < 0 || ly < 0 || lx >= self.width as i64 || ly >= self.height as i64 {
            return T::zero();
        }
        self.magnitudes[ly as usize * self.width + lx as usize]
    }

    pub fn window_rect(&self) -> (usize, usize, usize, usize) {
        (self.x0, self.y0, self.width, self.height)
    }

    /// Cells with non-zero magnitude in raster order.
    pub fn nonzero_points(&self) -> Vec<PointI> {
        self.magnitudes
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > T::zero())
            .map(|(i, _)| PointI::new((self.x0 + i % self.width) as i64, (self.y0 + i / self.width) as i64))
            .collect()
    }

    /// Copy with every cell outside `mask` zeroed.
    pub fn restricted_to(&self, mask: &Mask) -> Self {
        let mut out = self.clone();
        for (i, m) in out.magnitudes.iter_mut().enumerate() {
            let p = PointI::new((self.x0 + i % self.width) as i64, (self.y0 + i / self.width) as i64);
            if !mask.contains(p) {
                *m = T::zero();
            }
        }
        out
    }
}

/// `sqrt((Sx * m)^2 + (Sy * m)^2)` with the 3×3 Sobel kernels applied to the
/// 0/1 mask, zero outside the window.
pub fn edge_magnitude<T: Scalar>(mask: &Mask) -> EdgeGrid<T> {
    let (x0, y0, w, h) = mask.window_rect();
    let cells = mask.local_cells();
    let at = |x: isize, y: isize| -> i32 {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0
        } else {
            cells[y as usize * w + x as usize] as i32
        }
    };
    let mut magnitudes = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
            magnitudes.push(T::of_i64((gx * gx + gy * gy) as i64).sqrt());
        }
    }
    EdgeGrid { x0, y0, width: w, height: h, magnitudes }
}

/// Cells of `mask` whose Sobel magnitude is non-zero, in raster order. Same
/// set as `edge_magnitude(mask).restricted_to(mask).nonzero_points()`.
pub(crate) fn edge_cells(mask: &Mask) -> Vec<PointI> {
    let (x0, y0, w, h) = mask.window_rect();
    let pw = w + 2;
    let mut pad = vec![0i32; pw * (h + 2)];
    for (i, &c) in mask.local_cells().iter().enumerate() {
        pad[(i / w + 1) * pw + i % w + 1] = c as i32;
    }
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let c = (y + 1) * pw + x + 1;
            if pad[c] == 0 {
                continue;
            }
            let (n, s) = (c - pw, c + pw);
            let ring = pad[n - 1] + pad[n] + pad[n + 1] + pad[c - 1] + pad[c + 1] + pad[s - 1] + pad[s] + pad[s + 1];
            if ring == 8 {
                continue;
            }
            let gx = (pad[n + 1] + 2 * pad[c + 1] + pad[s + 1]) - (pad[n - 1] + 2 * pad[c - 1] + pad[s - 1]);
            let gy = (pad[s - 1] + 2 * pad[s] + pad[s + 1]) - (pad[n - 1] + 2 * pad[n] + pad[n + 1]);
            if gx != 0 || gy != 0 {
                out.push(PointI::new((x0 + x) as i64, (y0 + y) as i64));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_cells_match_full_magnitude() {
        let mut state = 0x2545_f491_u64;
        for _ in 0..50 {
            let cells: Vec<bool> = (0..13 * 11)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    !state.is_multiple_of(3)
                })
                .collect();
            let m = Mask::from_cells(13, 11, cells).unwrap();
            assert_eq!(edge_cells(&m), edge_magnitude::<f64>(&m).restricted_to(&m).nonzero_points());
        }
    }

    #[test]
    fn single_pixel_hand_convolution() {
        let m = Mask::from_ascii(&[".....", ".....", "..#..", ".....", "....."]);
        let e = edge_magnitude::<f64>(&m);
        let s2 = 2f64.sqrt();
        let expected = [
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, s2, 2.0, s2, 0.0],
            [0.0, 2.0, 0.0, 2.0, 0.0],
            [0.0, s2, 2.0, s2, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0],
        ];
        for (y, row) in expected.iter().enumerate() {
            for (x, &v) in row.iter().enumerate() {
                assert!((e.get(x as i64, y as i64) - v).abs() < 1e-12, "({x},{y})");
            }
        }
        assert_eq!(e.nonzero_points().len(), 8);
    }

    #[test]
    fn all_true_is_flat_inside() {
        let m = Mask::from_cells(6, 5, vec![true; 30]).unwrap();
        let e = edge_magnitude::<f32>(&m);
        for y in 1..4 {
            for x in 1..5 {
                assert_eq!(e.get(x, y), 0.0);
            }
        }
        assert!(e.get(0, 2) > 0.0);
    }

    #[test]
    fn vertical_half_plane() {
        let rows: Vec<String> = (0..7).map(|_| "...####".to_string()).collect();
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let e = edge_magnitude::<f64>(&Mask::from_ascii(&refs));
        for y in 1..6 {
            assert_eq!(e.get(2, y), 4.0);
            assert_eq!(e.get(3, y), 4.0);
            assert_eq!(e.get(1, y), 0.0);
            assert_eq!(e.get(4, y), 0.0);
        }
    }
}
