//! Layered soft geometric random graphs over planar point sets.
//!
//! A connection function maps inter-point distance to an edge probability
//! through a sequence of distance bands. Generating a graph adds, band by
//! band, every pair whose distance falls in that band with the band's
//! probability; the cumulative edge sets form nested layers. On top of the
//! generator the crate provides:
//!
//! * [`spectral`]: the smallest non-zero eigenvalue of the normalized
//!   Laplacian (matrix-free Lanczos), dense spectra, brute-force conductance
//!   and expansion, and a Cheeger-inequality check.
//! * [`stats`]: clustering coefficients, sparsity and valency summaries.
//! * [`walks`]: simple and replicating random walks, exact step
//!   distributions and the stationary law.
//! * [`runner`]: the scenario experiments (France model tables, the
//!   uniform-square layer curves and the threshold-radius sweep).

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod connection;
pub mod error;
pub mod graphgen;
pub mod io;
pub mod pointset;
pub mod rng;
pub mod runner;
pub mod spectral;
pub mod stats;
pub mod walks;

pub use connection::ConnectionFunction;
pub use error::{Error, Result};
pub use graphgen::{Graph, LayeredGraph};
pub use pointset::{CitySpec, Point, PointSet};
pub use spectral::SpectralReport;
