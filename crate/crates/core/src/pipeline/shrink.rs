use crate::error::{Error, Result};
use crate::fit::stamp_stroke;
use crate::model::ScribbleRecord;

/// Trims the centerline symmetrically about its arc-length midpoint to
/// `ratio` of its arc length and re-stamps the stroke.
///
/// The kept endpoints are the centerline cells whose cumulative arc length is
/// nearest to the trimmed interval's ends. The result's pixels are a subset
/// of the original's; its `t_range` is the along-axis span of the kept cells
/// and may collapse to a point for very short results.
pub fn shrink_scribble(record: &ScribbleRecord, ratio: f64) -> Result<ScribbleRecord> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidArgument(format!("shrink ratio must lie in (0, 1], got {ratio}")));
    }
    if ratio == 1.0 || record.centerline.len() < 2 {
        return Ok(record.clone());
    }
    let mut cum = Vec::with_capacity(record.centerline.len());
    let mut s = 0.0;
    cum.push(0.0);
    for w in record.centerline.windows(2) {
        s += (w[0].dist2(w[1]) as f64).sqrt();
        cum.push(s);
    }
    let total = s;
    let keep = ratio * total;
    let lo = (total - keep) / 2.0;
    let hi = (total + keep) / 2.0;
    let nearest = |target: f64| -> usize {
        let mut best = 0;
        for (i, &c) in cum.iter().enumerate() {
            if (c - target).abs() < (cum[best] - target).abs() {
                best = i;
            }
        }
        best
    };
    let a = nearest(lo);
    let b = nearest(hi).max(a);
    let centerline = record.centerline[a..=b].to_vec();
    let pixels = stamp_stroke(&centerline, record.axis, record.thickness);
    let (t0, t1) = centerline
        .iter()
        .map(|&p| record.axis.along_i(p))
        .fold((i64::MAX, i64::MIN), |(lo, hi), t| (lo.min(t), hi.max(t)));
    Ok(ScribbleRecord { centerline, pixels, t_range: (t0 as f64, t1 as f64), ..record.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axis, PointI};

    fn straight(n: i64) -> ScribbleRecord {
        let centerline: Vec<PointI> = (0..n).map(|x| PointI::new(x, 5)).collect();
        ScribbleRecord {
            class_id: 1,
            instance_id: 0,
            axis: Axis::Horizontal,
            coeffs: [5.0, 0.0, 0.0, 0.0, 0.0],
            t_range: (0.0, (n - 1) as f64),
            pixels: stamp_stroke(&centerline, Axis::Horizontal, 3),
            centerline,
            thickness: 3,
        }
    }

    #[test]
    fn ratio_one_is_identity() {
        let r = straight(40);
        assert_eq!(shrink_scribble(&r, 1.0).unwrap(), r);
    }

    #[test]
    fn half_of_straight_line() {
        let r = straight(100);
        let s = shrink_scribble(&r, 0.5).unwrap();
        assert!((49..=51).contains(&s.centerline.len()), "{}", s.centerline.len());
        let mid = (s.centerline[0].x + s.centerline.last().unwrap().x) as f64 / 2.0;
        assert!((mid - 49.5).abs() <= 1.0);
        assert!(s.pixels.iter().all(|p| r.pixels.binary_search(p).is_ok()));
    }

    #[test]
    fn bad_ratios() {
        let r = straight(10);
        for bad in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(shrink_scribble(&r, bad).is_err());
        }
    }
}
