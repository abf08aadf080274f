use crate::model::LabelGrid;
use crate::scalar::Scalar;

/// Per-cell real values over a label grid's frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField<T> {
    width: usize,
    height: usize,
    values: Vec<T>,
}

impl<T: Scalar> DistanceField<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.values[y * self.width + x]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// Exact 1-D squared Euclidean distance transform (lower envelope of
/// parabolas). Infinite entries are not sites; if every entry is infinite the
/// output is all infinite.
pub fn squared_edt_1d<T: Scalar>(f: &[T], out: &mut [T]) {
    let n = f.len();
    debug_assert_eq!(out.len(), n);
    let mut v: Vec<usize> = Vec::with_capacity(n);
    let mut z: Vec<T> = Vec::with_capacity(n + 1);
    let two = T::of(2.0);
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let fq = f[q] + T::of_usize(q * q);
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    z.clear();
                    z.push(T::neg_infinity());
                    z.push(T::infinity());
                    break;
                }
                Some(&p) => {
                    let fp = f[p] + T::of_usize(p * p);
                    let s = (fq - fp) / (two * T::of_usize(q - p));
                    let k = v.len() - 1;
                    if s <= z[k] {
                        v.pop();
                        z.pop();
                        continue;
                    }
                    z[k + 1] = s;
                    v.push(q);
                    z.push(T::infinity());
                    break;
                }
            }
        }
    }
    if v.is_empty() {
        out.fill(T::infinity());
        return;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        let tq = T::of_usize(q);
        while z[k + 1] < tq {
            k += 1;
        }
        let d = T::of_i64(q as i64 - v[k] as i64);
        *o = d * d + f[v[k]];
    }
}

/// Euclidean distance from every cell to the nearest class-boundary cell.
///
/// A boundary cell has a 4-neighbor with a different label. With
/// `ignore_is_class` the ignore value is treated like any other label;
/// otherwise ignore cells are never boundaries and ignore neighbors do not
/// make a boundary. Grids without boundary cells map to `+inf` everywhere.
pub fn boundary_distance_field<T: Scalar>(grid: &LabelGrid, ignore_is_class: bool) -> DistanceField<T> {
    let (w, h) = (grid.width(), grid.height());
    let labels = grid.labels();
    let ignore = grid.ignore_value();
    let counts = |v: u16| ignore_is_class || v != ignore;
    let mut f = vec![T::infinity(); w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let v = labels[i];
            if !counts(v) {
                continue;
            }
            let differs = |j: usize| labels[j] != v && counts(labels[j]);
            let boundary = (x > 0 && differs(i - 1))
                || (x + 1 < w && differs(i + 1))
                || (y > 0 && differs(i - w))
                || (y + 1 < h && differs(i + w));
            if boundary {
                f[i] = T::zero();
            }
        }
    }
    let mut col = vec![T::zero(); h];
    let mut col_out = vec![T::zero(); h];
    for x in 0..w {
        for y in 0..h {
            col[y] = f[y * w + x];
        }
        squared_edt_1d(&col, &mut col_out);
        for y in 0..h {
            f[y * w + x] = col_out[y];
        }
    }
    let mut row_out = vec![T::zero(); w];
    for y in 0..h {
        squared_edt_1d(&f[y * w..(y + 1) * w], &mut row_out);
        for (x, d) in row_out.iter().enumerate() {
            f[y * w + x] = d.sqrt();
        }
    }
    DistanceField { width: w, height: h, values: f }
}
