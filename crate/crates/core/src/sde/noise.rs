use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Identifier of the random-number pipeline, echoed in every config fingerprint.
pub const RNG_ALGORITHM: &str =
    "chacha8(seed_from_u64(seed), stream = replica*256 + channel) + rand_distr-0.5 ziggurat StandardNormal";

/// A named, reproducible noise source for one replica.
///
/// Every `(seed, replica_index, channel)` triple selects an independent ChaCha8
/// stream, so replicas can be simulated in any order or in parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseStream {
    pub seed: u64,
    pub replica_index: u64,
    pub channel: u8,
    pub dimension: usize,
}

impl NoiseStream {
    pub fn new(seed: u64, replica_index: u64, dimension: usize) -> Self {
        Self {
            seed,
            replica_index,
            channel: 0,
            dimension,
        }
    }

    pub fn with_channel(mut self, channel: u8) -> Self {
        self.channel = channel;
        self
    }

    pub fn source(&self) -> GaussianSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(
            self.replica_index
                .wrapping_mul(256)
                .wrapping_add(self.channel as u64),
        );
        GaussianSource { rng }
    }
}

/// Sequential draws from one stream.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha8Rng,
}

impl GaussianSource {
    #[inline]
    pub fn standard_normal<T: Real>(&mut self) -> T {
        let z: f64 = self.rng.sample(StandardNormal);
        T::lit(z)
    }

    /// Centered Gaussian with variance `dt`.
    #[inline]
    pub fn increment<T: Real>(&mut self, sqrt_dt: T) -> T {
        sqrt_dt * self.standard_normal::<T>()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform<T: Real>(&mut self) -> T {
        let u: f64 = self.rng.random();
        T::lit(u)
    }
}

/// `n_steps` i.i.d. `N(0, dt I)` increment vectors of the stream's dimension.
pub fn gaussian_increments<T: Real>(
    stream: &NoiseStream,
    grid: &TimeGrid<T>,
) -> Result<Vec<Vec<T>>> {
    if stream.dimension == 0 {
        return Err(Error::Config("noise dimension must be at least 1".into()));
    }
    let sqrt_dt = grid.dt().sqrt();
    let mut src = stream.source();
    Ok((0..grid.n_steps())
        .map(|_| {
            (0..stream.dimension)
                .map(|_| src.increment(sqrt_dt))
                .collect()
        })
        .collect())
}
