//! Scribble label synthesis for weakly supervised semantic segmentation.
//!
//! Dense label rasters go in, one freehand-looking scribble per object comes
//! out. The crate is organized bottom-up:
//!
//! - [`model`]: label grids, binary masks, blobs, scribble records and their
//!   on-disk formats.
//! - [`morphology`]: raster kernels (components, erosion, Sobel, thinning,
//!   Euclidean distance to class boundaries).
//! - [`fit`]: the stochastic curve construction for a single blob.
//! - [`pipeline`]: parameter profiles, preprocessing, dataset runs and the
//!   scribble-length ablation.
//! - [`stats`]: dataset characterization metrics and reports.
//! - [`cli`] / [`overlay`]: the command-line front end.
//!
//! Real-valued geometry is generic over [`Scalar`]; the pipeline itself runs
//! in `f64` and the aliases below name those instantiations.

pub mod cli;
pub mod error;
pub mod fit;
pub mod model;
pub mod morphology;
pub mod overlay;
pub mod pipeline;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use fit::{Axis, FitCurve, RngStream};
pub use model::{BinaryBlob, BoundingBox, LabelGrid, Mask, PointF, PointI, ScribbleRecord};
pub use morphology::EdgeGrid;
pub use pipeline::{GenerationSummary, NoiseMode, ParameterProfile};
pub use scalar::Scalar;
pub use stats::DatasetStats;

/// Real point in pixel coordinates, double precision.
pub type PointF64 = PointF<f64>;
/// Real point in pixel coordinates, single precision.
pub type PointF32 = PointF<f32>;
/// Polynomial scribble curve in double precision; what the pipeline emits.
pub type FitCurve64 = FitCurve<f64>;
/// Polynomial scribble curve in single precision.
pub type FitCurve32 = FitCurve<f32>;
/// Sobel magnitudes in double precision.
pub type EdgeGrid64 = EdgeGrid<f64>;
/// Boundary distance field in double precision.
pub type DistanceField64 = morphology::DistanceField<f64>;
