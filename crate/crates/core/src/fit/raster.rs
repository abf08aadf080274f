use crate::error::{Error, Result};
use crate::fit::FitCurve;
use crate::model::{Axis, BoundingBox, Mask, PointI};
use crate::scalar::Scalar;

/// Rasterized scribble: ordered centerline cells and the thick stroke.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stroke {
    pub centerline: Vec<PointI>,
    pub pixels: Vec<PointI>,
}

const MAX_CENTERLINE: usize = 1 << 22;
const MAX_DEPTH: u32 = 60;
const COORD_LIMIT: f64 = 1e9;

/// Offsets of the digital disc of diameter `thickness`: cells whose distance
/// from the disc center is at most `(d − 1)/2`, with a half-pixel² slack so
/// that diameter 3 is the 3×3 cross and diameter 5 the 13-cell disc. Even
/// diameters are centered half a pixel down-right.
pub fn footprint(thickness: u32) -> Vec<(i64, i64)> {
    let d = thickness.max(1) as i64;
    let lo = -(d - 1) / 2;
    let hi = lo + d - 1;
    let c = (d - 1) as f64 / 2.0 + lo as f64;
    let r = (d - 1) as f64 / 2.0;
    let limit = r * r + 0.5;
    let mut out = Vec::new();
    for dy in lo..=hi {
        for dx in lo..=hi {
            let (fx, fy) = (dx as f64 - c, dy as f64 - c);
            if fx * fx + fy * fy <= limit {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Stamps the disc footprint on every centerline cell, keeping only cells
/// whose coordinate along `axis` lies within the centerline's own span.
/// Result is sorted in raster order without duplicates.
pub fn stamp_stroke(centerline: &[PointI], axis: Axis, thickness: u32) -> Vec<PointI> {
    let Some((lo, hi)) = centerline
        .iter()
        .map(|&p| axis.along_i(p))
        .fold(None, |acc: Option<(i64, i64)>, t| Some(acc.map_or((t, t), |(a, b)| (a.min(t), b.max(t)))))
    else {
        return Vec::new();
    };
    let fp = footprint(thickness);
    let mut pixels: Vec<PointI> = Vec::with_capacity(centerline.len() * fp.len());
    for &c in centerline {
        for &(dx, dy) in &fp {
            let p = PointI::new(c.x + dx, c.y + dy);
            let t = axis.along_i(p);
            if t >= lo && t <= hi {
                pixels.push(p);
            }
        }
    }
    pixels.sort_unstable();
    pixels.dedup();
    pixels
}

fn bresenham(a: PointI, b: PointI, out: &mut Vec<PointI>) {
    let (dx, dy) = ((b.x - a.x).abs(), -(b.y - a.y).abs());
    let (sx, sy) = (if a.x < b.x { 1 } else { -1 }, if a.y < b.y { 1 } else { -1 });
    let (mut x, mut y, mut err) = (a.x, a.y, dx + dy);
    while (x, y) != (b.x, b.y) {
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
        out.push(PointI::new(x, y));
    }
}

struct Tracer<'a, T> {
    curve: &'a FitCurve<T>,
    bounds: Option<BoundingBox>,
    out: Vec<PointI>,
}

impl<T: Scalar> Tracer<'_, T> {
    fn sample(&self, t: T) -> Result<PointI> {
        let v = self.curve.eval(t);
        let vf = v.to_f64_lossy();
        if !vf.is_finite() || vf.abs() > COORD_LIMIT || t.to_f64_lossy().abs() > COORD_LIMIT {
            return Err(Error::CurveOutOfRange);
        }
        Ok(self.curve.point_at(t).round())
    }

    fn push(&mut self, p: PointI) -> Result<()> {
        if let Some(bb) = self.bounds {
            if !bb.contains(p) {
                return Err(Error::CurveOutOfRange);
            }
        }
        if self.out.last() != Some(&p) {
            if self.out.len() >= MAX_CENTERLINE {
                return Err(Error::CurveOutOfRange);
            }
            self.out.push(p);
        }
        Ok(())
    }

    /// Emits cells strictly after `pa` up to and including `pb`.
    fn refine(&mut self, ta: T, pa: PointI, tb: T, pb: PointI, depth: u32) -> Result<()> {
        if pa.chebyshev(pb) <= 1 {
            return self.push(pb);
        }
        let tm = (ta + tb) * T::of(0.5);
        if depth >= MAX_DEPTH || tm <= ta || tm >= tb {
            // Parameter resolution exhausted; bridge the gap with a digital line.
            let mut bridge = Vec::new();
            bresenham(pa, pb, &mut bridge);
            for p in bridge {
                self.push(p)?;
            }
            return Ok(());
        }
        let pm = self.sample(tm)?;
        self.refine(ta, pa, tm, pm, depth + 1)?;
        self.refine(tm, pm, tb, pb, depth + 1)
    }
}

/// [`rasterize_curve`] that fails with [`Error::CurveOutOfRange`] as soon as
/// the centerline leaves `bounds`.
pub fn rasterize_curve_within<T: Scalar>(
    curve: &FitCurve<T>,
    thickness: u32,
    bounds: Option<BoundingBox>,
) -> Result<Stroke> {
    if thickness == 0 {
        return Err(Error::InvalidArgument("stroke thickness must be >= 1".into()));
    }
    let (t0, t1) = curve.t_range;
    if !(t0 < t1) || !curve.is_finite() {
        return Err(Error::Degenerate("curve needs finite coefficients and t_start < t_end"));
    }
    let mut tracer = Tracer { curve, bounds, out: Vec::new() };
    let steps = (t1 - t0).ceil().to_usize().unwrap_or(usize::MAX).clamp(1, MAX_CENTERLINE);
    let mut ta = t0;
    let mut pa = tracer.sample(ta)?;
    tracer.push(pa)?;
    for i in 1..=steps {
        let tb = if i == steps { t1 } else { t0 + (t1 - t0) * T::of_usize(i) / T::of_usize(steps) };
        let pb = tracer.sample(tb)?;
        tracer.refine(ta, pa, tb, pb, 0)?;
        ta = tb;
        pa = pb;
    }
    let centerline = tracer.out;
    let pixels = stamp_stroke(&centerline, curve.axis, thickness);
    Ok(Stroke { centerline, pixels })
}

/// Samples `(t, F(t))` over `t_range` finely enough that consecutive rounded
/// cells are 8-adjacent, then stamps the stroke.
pub fn rasterize_curve<T: Scalar>(curve: &FitCurve<T>, thickness: u32) -> Result<Stroke> {
    rasterize_curve_within(curve, thickness, None)
}

/// Centerline inside the eroded blob and the whole stroke inside the original
/// blob.
pub fn validate_scribble(centerline: &[PointI], pixels: &[PointI], eroded: &Mask, original: &Mask) -> bool {
    !centerline.is_empty()
        && centerline.iter().all(|&p| eroded.contains(p))
        && pixels.iter().all(|&p| original.contains(p))
}
