//! Optimal Teichmüller geodesics between filling Busemann points, computed
//! on square-tiled surfaces.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom up:
//!
//! - [`origami`]: permutation-pair surfaces, cylinders, weighted flat
//!   structures, extremal-length bounds and distance intervals.
//! - [`multicurve`]: weighted multicurves on cylinder cores, Busemann-point
//!   specifications and filling diagnostics.
//! - [`perron`]: Gram matrices, primitivity and the Perron eigenpair.
//! - [`geodesic`]: the eigenvector construction of the geodesic joining two
//!   Busemann points, the flow along it and its limits at both ends.
//! - [`horo`]: horofunction, Busemann and Gromov-product enclosures, plus the
//!   inequality audits.
#![no_std]

extern crate alloc;

pub mod geodesic;
pub mod horo;
pub mod interval;
pub mod math;
pub mod matrix;
pub mod multicurve;
pub mod origami;
pub mod perron;
pub mod weight;

pub use geodesic::{optimal_geodesic, GeodesicError, GeodesicLine};
pub use horo::{HoroError, Status};
pub use interval::{DistanceInterval, ValueInterval};
pub use multicurve::{BusemannSpec, Coeff, FillingStatus, IntersectionMatrix, WeightedMulticurve};
pub use origami::{CoreId, Origami, OrigamiError, Side, SurfaceError, WeightedSurface};
pub use perron::{perron_solve, PerronError, PerronOptions, PerronResult};
pub use weight::Rational;
