//! Stochastic-calculus plumbing: time grids, seeded Gaussian noise, path
//! records, local-time estimators and the Skorokhod reflection map.

mod grid;
mod local_time;
mod noise;
mod path;
mod reflect;
mod stop;

pub use grid::TimeGrid;
pub use local_time::{
    occupation_local_time_step, tanaka_local_time, tanaka_local_time_channel, BandwidthPolicy,
    EstimatorKind, LocalTimeAccumulator,
};
pub use noise::{gaussian_increments, GaussianSource, NoiseStream, RNG_ALGORITHM};
pub use path::PathRecord;
pub use reflect::skorokhod_reflect;
pub use stop::StopReason;
