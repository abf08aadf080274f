use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Integer pixel coordinate. `x` is the column, `y` the row, origin top-left.
///
/// Ordering is lexicographic by `(y, x)`, i.e. raster-scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PointI {
    pub x: i64,
    pub y: i64,
}

impl PointI {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn dist2(self, other: PointI) -> i64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Chebyshev distance; 1 means 8-adjacent.
    pub fn chebyshev(self, other: PointI) -> i64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn to_f<T: Scalar>(self) -> PointF<T> {
        PointF::new(T::of_i64(self.x), T::of_i64(self.y))
    }
}

impl Ord for PointI {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for PointI {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PointI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Real-valued pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointF<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> PointF<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist2(&self, other: &PointF<T>) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Nearest pixel, rounding half away from zero.
    pub fn round(&self) -> PointI {
        PointI::new(self.x.round().to_i64().unwrap_or(i64::MAX), self.y.round().to_i64().unwrap_or(i64::MAX))
    }

    /// Coordinate along `axis`.
    pub fn along(&self, axis: Axis) -> T {
        match axis {
            Axis::Horizontal => self.x,
            Axis::Vertical => self.y,
        }
    }

    /// Coordinate across `axis` (the dependent coordinate of a fit).
    pub fn across(&self, axis: Axis) -> T {
        match axis {
            Axis::Horizontal => self.y,
            Axis::Vertical => self.x,
        }
    }

    /// Builds a point from its (independent, dependent) coordinates.
    pub fn from_axis(axis: Axis, t: T, v: T) -> Self {
        match axis {
            Axis::Horizontal => Self::new(t, v),
            Axis::Vertical => Self::new(v, t),
        }
    }
}

/// Independent variable of a scribble fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// `y = F(x)`
    #[serde(rename = "x")]
    Horizontal,
    /// `x = F(y)`
    #[serde(rename = "y")]
    Vertical,
}

impl Axis {
    pub fn along_i(self, p: PointI) -> i64 {
        match self {
            Axis::Horizontal => p.x,
            Axis::Vertical => p.y,
        }
    }

    pub fn across_i(self, p: PointI) -> i64 {
        match self {
            Axis::Horizontal => p.y,
            Axis::Vertical => p.x,
        }
    }

    pub fn point_i(self, t: i64, v: i64) -> PointI {
        match self {
            Axis::Horizontal => PointI::new(t, v),
            Axis::Vertical => PointI::new(v, t),
        }
    }
}

/// Inclusive pixel bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub min_x: usize,
    pub min_y: usize,
    pub max_x: usize,
    pub max_y: usize,
}

impl BoundingBox {
    pub fn width(&self) -> usize {
        self.max_x - self.min_x + 1
    }

    pub fn height(&self) -> usize {
        self.max_y - self.min_y + 1
    }

    pub fn contains(&self, p: PointI) -> bool {
        p.x >= self.min_x as i64 && p.x <= self.max_x as i64 && p.y >= self.min_y as i64 && p.y <= self.max_y as i64
    }

    pub(crate) fn include(&mut self, x: usize, y: usize) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }
}
