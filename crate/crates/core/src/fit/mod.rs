//! Stochastic construction of one scribble inside one blob.
//!
//! Per attempt: sample edge points, take the farthest pair, perturb the
//! center of mass, fit a quadratic through the three, sample two noisy
//! intermediate points from it, fit a quartic through all five, rasterize and
//! check containment. [`generate_for_blob`] wraps attempts in the erosion and
//! restart loops.

mod generate;
mod polyfit;
pub mod raster;
mod rng;
mod sampling;

pub use crate::model::Axis;
pub use generate::{generate_for_blob, generate_from_seed, BlobFailure};
pub use polyfit::{fit_polynomial, FitCurve};
pub use raster::{rasterize_curve, rasterize_curve_within, stamp_stroke, validate_scribble, Stroke};
pub use rng::{mix64, stable_hash, RngStream};
pub use sampling::{choose_axis, farthest_pair, perturb_com, sample_edge_points, sample_intermediate};
