//! Simulation of intertwined Brownian particle / set-valued dual processes.
//!
//! A Brownian particle `X` is coupled to a random domain `D_t` so that, given
//! the history of the domain, `X_t` is uniformly distributed in `D_t`. The
//! crate builds the one-dimensional, radial and planar constructions, the
//! discrete-curve geometry they need, and the statistics used to check them.
//!
//! Every numeric kernel is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod dual1d;
pub mod error;
pub mod geometry;
pub mod planar;
pub mod quadrature;
pub mod radial;
pub mod scalar;
pub mod sde;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point = geometry::Vec2<f64>;
pub type Curve = geometry::DiscreteCurve<f64>;
pub type SymmetricCurve = geometry::SymmetricConvexCurve<f64>;
pub type Domain = geometry::Region<f64>;
pub type Segment = geometry::SkeletonSegment<f64>;
pub type Grid = sde::TimeGrid<f64>;
pub type Path = sde::PathRecord<f64>;
pub type Profile = radial::RadialProfile<f64>;
pub type DiskState = radial::DiskDualState<f64>;
pub type AnnulusState = radial::AnnulusDualState<f64>;
pub type PlanarState = planar::PlanarDualState<f64>;
