use crate::error::{Error, Result};
use crate::model::{Axis, PointF};
use crate::scalar::Scalar;

/// Polynomial curve `v = F(t)` where `t` is the coordinate along `axis`.
///
/// Coefficients are kept in two forms: the raw `β0..βd` in pixel units (what
/// gets written out) and the normalized form the fit actually produced,
/// `v = vc + vs · Σ a_k ((t − tc)/ts)^k`, which is what [`FitCurve::eval`]
/// uses.
#[derive(Debug, Clone, PartialEq)]
pub struct FitCurve<T> {
    pub axis: Axis,
    pub t_range: (T, T),
    coeffs: Vec<T>,
    normalized: Vec<T>,
    t_center: T,
    t_scale: T,
    v_center: T,
    v_scale: T,
}

impl<T: Scalar> FitCurve<T> {
    /// Curve from raw coefficients `β0..βd`.
    pub fn from_coeffs(axis: Axis, coeffs: Vec<T>, t_range: (T, T)) -> Self {
        Self {
            axis,
            t_range,
            normalized: coeffs.clone(),
            coeffs,
            t_center: T::zero(),
            t_scale: T::one(),
            v_center: T::zero(),
            v_scale: T::one(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Raw coefficients `β0..βd`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn with_t_range(mut self, t_range: (T, T)) -> Self {
        self.t_range = t_range;
        self
    }

    pub fn eval(&self, t: T) -> T {
        let u = (t - self.t_center) / self.t_scale;
        let acc = self.normalized.iter().rev().fold(T::zero(), |acc, &a| acc * u + a);
        self.v_center + self.v_scale * acc
    }

    /// Value of the normalized polynomial at normalized abscissa `u`.
    pub fn eval_normalized(&self, u: T) -> T {
        self.normalized.iter().rev().fold(T::zero(), |acc, &a| acc * u + a)
    }

    pub fn normalize_t(&self, t: T) -> T {
        (t - self.t_center) / self.t_scale
    }

    pub fn normalize_v(&self, v: T) -> T {
        (v - self.v_center) / self.v_scale
    }

    pub fn point_at(&self, t: T) -> PointF<T> {
        PointF::from_axis(self.axis, t, self.eval(t))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite()) && self.normalized.iter().all(|c| c.is_finite())
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Least-squares polynomial of `degree` in the coordinate along `axis`,
/// predicting the coordinate across it.
///
/// Both coordinates are mapped to `[-1, 1]` and the Vandermonde system is
/// solved with Householder QR. `t_range` of the result spans the input
/// abscissae.
pub fn fit_polynomial<T: Scalar>(points: &[PointF<T>], degree: usize, axis: Axis) -> Result<FitCurve<T>> {
    let m = degree + 1;
    let n = points.len();
    if n < m {
        return Err(Error::Degenerate("fewer points than coefficients"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Degenerate("non-finite input point"));
    }
    let ts: Vec<T> = points.iter().map(|p| p.along(axis)).collect();
    let vs: Vec<T> = points.iter().map(|p| p.across(axis)).collect();
    let (t_min, t_max) = min_max(&ts);
    if t_max <= t_min {
        return Err(Error::RankDeficient);
    }
    let half = T::of(0.5);
    let t_center = (t_min + t_max) * half;
    let t_scale = (t_max - t_min) * half;
    let (v_min, v_max) = min_max(&vs);
    let v_center = (v_min + v_max) * half;
    let v_scale = if v_max > v_min { (v_max - v_min) * half } else { T::one() };

    // Column-major n×m Vandermonde matrix in normalized abscissae.
    let mut a = vec![T::zero(); n * m];
    let mut b: Vec<T> = vs.iter().map(|&v| (v - v_center) / v_scale).collect();
    for (i, &t) in ts.iter().enumerate() {
        let u = (t - t_center) / t_scale;
        let mut pow = T::one();
        for k in 0..m {
            a[k * n + i] = pow;
            pow = pow * u;
        }
    }

    let mut diag = vec![T::zero(); m];
    for k in 0..m {
        let col = &mut a[k * n..(k + 1) * n];
        let norm = col[k..].iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
        if norm == T::zero() {
            return Err(Error::RankDeficient);
        }
        let alpha = if col[k] > T::zero() { -norm } else { norm };
        // v = x - alpha e1, stored in place of the column
        col[k] = col[k] - alpha;
        let vnorm2 = col[k..].iter().fold(T::zero(), |s, &x| s + x * x);
        diag[k] = alpha;
        if vnorm2 == T::zero() {
            continue;
        }
        let v: Vec<T> = col[k..].to_vec();
        for j in k + 1..m {
            let cj = &mut a[j * n..(j + 1) * n];
            let dot = v.iter().zip(&cj[k..]).fold(T::zero(), |s, (&x, &y)| s + x * y);
            let f = T::of(2.0) * dot / vnorm2;
            for (c, &x) in cj[k..].iter_mut().zip(&v) {
                *c = *c - f * x;
            }
        }
        let dot = v.iter().zip(&b[k..]).fold(T::zero(), |s, (&x, &y)| s + x * y);
        let f = T::of(2.0) * dot / vnorm2;
        for (c, &x) in b[k..].iter_mut().zip(&v) {
            *c = *c - f * x;
        }
    }

    let max_diag = diag.iter().fold(T::zero(), |s, d| s.max(d.abs()));
    let tol = max_diag * T::epsilon() * T::of(1e4);
    if diag.iter().any(|d| d.abs() <= tol) {
        return Err(Error::RankDeficient);
    }

    let mut coef = vec![T::zero(); m];
    for k in (0..m).rev() {
        let mut s = b[k];
        for j in k + 1..m {
            s = s - a[j * n + k] * coef[j];
        }
        coef[k] = s / diag[k];
    }
    if coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::RankDeficient);
    }

    // Expand Σ a_k ((t − tc)/ts)^k into raw powers of t.
    let mut raw = vec![T::zero(); m];
    for (k, &ak) in coef.iter().enumerate() {
        let scaled = ak / t_scale.powi(k as i32);
        for (j, r) in raw.iter_mut().enumerate().take(k + 1) {
            let c = T::of(binomial(k, j)) * (-t_center).powi((k - j) as i32);
            *r = *r + scaled * c;
        }
    }
    for r in raw.iter_mut() {
        *r = *r * v_scale;
    }
    raw[0] = raw[0] + v_center;

    Ok(FitCurve { axis, t_range: (t_min, t_max), coeffs: raw, normalized: coef, t_center, t_scale, v_center, v_scale })
}

fn min_max<T: Scalar>(xs: &[T]) -> (T, T) {
    xs.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}
