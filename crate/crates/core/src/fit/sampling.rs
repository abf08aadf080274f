use rand::seq::index;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fit::FitCurve;
use crate::model::{Axis, PointF, PointI};
use crate::morphology::EdgeGrid;
use crate::pipeline::ParameterProfile;
use crate::scalar::Scalar;

/// `min(q, #edge cells)` distinct non-zero edge cells, drawn uniformly without
/// replacement and returned in raster order.
pub fn sample_edge_points<T: Scalar, R: RngCore + ?Sized>(
    edges: &EdgeGrid<T>,
    q: usize,
    rng: &mut R,
) -> Result<Vec<PointI>> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("edge sample count must be >= 2, got {q}")));
    }
    sample_points(&edges.nonzero_points(), q, rng)
}

/// [`sample_edge_points`] over a precomputed list of edge cells.
pub(crate) fn sample_points<R: RngCore + ?Sized>(cells: &[PointI], q: usize, rng: &mut R) -> Result<Vec<PointI>> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("edge sample count must be >= 2, got {q}")));
    }
    if cells.is_empty() {
        return Err(Error::Empty("no edge cells"));
    }
    let k = q.min(cells.len());
    let mut picked = index::sample(rng, cells.len(), k).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| cells[i]).collect())
}

/// Pair at maximal Euclidean distance by exhaustive scan.
///
/// Each pair is reported as `(min, max)` in raster order; among equally
/// distant pairs the lexicographically smallest wins.
pub fn farthest_pair(points: &[PointI]) -> Result<(PointI, PointI)> {
    if points.len() < 2 {
        return Err(Error::Degenerate("farthest pair needs at least two points"));
    }
    let mut best: Option<(i64, PointI, PointI)> = None;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let d = a.dist2(b);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let better = match best {
                None => true,
                Some((bd, bl, bh)) => d > bd || (d == bd && (lo, hi) < (bl, bh)),
            };
            if better {
                best = Some((d, lo, hi));
            }
        }
    }
    let (_, lo, hi) = best.expect("at least one pair");
    Ok((lo, hi))
}

fn normal<T: Scalar, R: RngCore + ?Sized>(rng: &mut R) -> T {
    let z: f64 = rng.sample(StandardNormal);
    T::of(z)
}

/// Center of mass plus isotropic Gaussian noise, σ from the profile's
/// center-of-mass divisor.
pub fn perturb_com<T: Scalar, R: RngCore + ?Sized>(
    com: PointF<T>,
    area_px: usize,
    profile: &ParameterProfile,
    rng: &mut R,
) -> PointF<T> {
    let sigma = T::of(profile.sigma_com(area_px));
    let dx: T = normal(rng);
    let dy: T = normal(rng);
    PointF::new(com.x + sigma * dx, com.y + sigma * dy)
}

/// Horizontal when `|Δx| >= |Δy|`.
pub fn choose_axis(p1: PointI, p2: PointI) -> Result<Axis> {
    if p1 == p2 {
        return Err(Error::Degenerate("identical endpoints"));
    }
    if (p2.x - p1.x).abs() >= (p2.y - p1.y).abs() {
        Ok(Axis::Horizontal)
    } else {
        Ok(Axis::Vertical)
    }
}

/// Two points on `curve` at parameters uniform in the middle 80% of its
/// `t_range`, each with Gaussian noise on the dependent coordinate only.
pub fn sample_intermediate<T: Scalar, R: RngCore + ?Sized>(
    curve: &FitCurve<T>,
    area_px: usize,
    profile: &ParameterProfile,
    rng: &mut R,
) -> (PointF<T>, PointF<T>) {
    let sigma = T::of(profile.sigma_intermediate(area_px));
    let (t0, t1) = curve.t_range;
    let len = t1 - t0;
    let draw = |rng: &mut R| {
        let u: f64 = rng.random();
        let t = t0 + len * T::of(0.1 + 0.8 * u);
        let n: T = normal(rng);
        PointF::from_axis(curve.axis, t, curve.eval(t) + sigma * n)
    };
    let p3 = draw(rng);
    let p4 = draw(rng);
    (p3, p4)
}
