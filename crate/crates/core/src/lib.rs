//! Spectra of the regularized normalized Laplacian for random geometric
//! graphs on the unit torus and their deterministic lattice counterparts.
//!
//! The crate covers the whole pipeline: torus geometry and graph
//! construction ([`geometry`], [`graphs`]), Laplacian assembly
//! ([`laplacian`]), dense and circulant eigensolves ([`spectra`]), closed-form
//! lattice spectra ([`analytic`]), distances between spectral distributions
//! ([`metrics`]) and a seeded experiment harness ([`experiments`], [`io`]).

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod graphs;
pub mod io;
pub mod laplacian;
pub mod metrics;
pub mod spectra;

pub use error::{Error, ErrorClass, Result};
pub use geometry::{Metric, Point, PointSet};
pub use graphs::{build_dgg, sample_rgg, GeometricGraph, GraphKind};
pub use laplacian::{assemble, assemble_circulant, RegularizedLaplacian};
pub use metrics::{ks_distance, levy_distance, DistanceReport};
pub use spectra::{EigenOptions, SpectralDistribution};
