//! Raster kernels: class separation, connected components, erosion, Sobel
//! edges, center of mass, Zhang–Suen thinning and the Euclidean distance to
//! class boundaries.
//!
//! Everything here is a pure function of its inputs.

mod components;
mod distance;
pub(crate) mod erosion;
mod skeleton;
mod sobel;

pub use components::{connected_components, label_components, largest_component, separate_classes, Connectivity};
pub use distance::{boundary_distance_field, squared_edt_1d, DistanceField};
pub use erosion::binary_erode;
pub use skeleton::{nearest_skeleton_point, skeletonize};
pub(crate) use sobel::edge_cells;
pub use sobel::{edge_magnitude, EdgeGrid};

use crate::error::{Error, Result};
use crate::model::{Mask, PointF};
use crate::scalar::Scalar;

/// Arithmetic mean of the true-cell coordinates.
pub fn center_of_mass<T: Scalar>(mask: &Mask) -> Result<PointF<T>> {
    let (mut sx, mut sy, mut n) = (0i128, 0i128, 0i128);
    for p in mask.points() {
        sx += p.x as i128;
        sy += p.y as i128;
        n += 1;
    }
    if n == 0 {
        return Err(Error::Empty("center of mass of an empty mask"));
    }
    Ok(PointF::new(T::of(sx as f64 / n as f64), T::of(sy as f64 / n as f64)))
}
