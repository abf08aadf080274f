//! Label rasters, binary masks and scribble records, plus their file formats.

mod blob;
mod geometry;
mod grid;
pub mod io;
mod record;

pub use blob::BinaryBlob;
pub use geometry::{Axis, BoundingBox, PointF, PointI};
pub use grid::{LabelGrid, Mask, DEFAULT_IGNORE};
pub use io::{load_label_grid, rasterize_records, write_label_grid, write_scribble_grid};
pub use record::{ScribbleRecord, Sidecar, SidecarScribble};
