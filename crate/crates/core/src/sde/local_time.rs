use super::path::PathRecord;
use crate::error::{Error, Result};
use crate::scalar::{sign0, Real};

/// One step of the band-occupation estimator: `(1/2β) 1{|x - level| <= β} qv`.
#[inline]
pub fn occupation_local_time_step<T: Real>(x: T, level: T, qv: T, beta: T) -> T {
    if (x - level).abs() <= beta {
        qv / (T::two() * beta)
    } else {
        T::zero()
    }
}

/// Discrete Tanaka residual `|X_k| - |X_0| - Σ sign(X_j)(X_{j+1} - X_j)` with `sign(0) = 0`.
///
/// Every summand is nonnegative, so the result is nondecreasing.
pub fn tanaka_local_time<T: Real>(x: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len());
    let mut l = T::zero();
    for (i, &xi) in x.iter().enumerate() {
        if i > 0 {
            let prev = x[i - 1];
            l = l + xi.abs() - prev.abs() - sign0(prev) * (xi - prev);
        }
        out.push(l);
    }
    out
}

/// [`tanaka_local_time`] applied to a named channel of a path record.
pub fn tanaka_local_time_channel<T: Real>(path: &PathRecord<T>, channel: &str) -> Result<Vec<T>> {
    Ok(tanaka_local_time(path.channel(channel)?))
}

/// Bandwidth tied to the grid: `β = c √dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthPolicy<T> {
    pub c: T,
}

impl<T: Real> BandwidthPolicy<T> {
    pub fn new(c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Config(format!(
                "bandwidth.c must be positive, got {c}"
            )));
        }
        Ok(Self { c })
    }

    pub fn beta(&self, dt: T) -> T {
        self.c * dt.sqrt()
    }
}

impl<T: Real> Default for BandwidthPolicy<T> {
    fn default() -> Self {
        Self { c: T::one() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Occupation,
    TanakaResidual,
}

/// Running local time of `x - level`, where the level may itself move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTimeAccumulator<T> {
    pub kind: EstimatorKind,
    pub beta: T,
    pub value: T,
}

impl<T: Real> LocalTimeAccumulator<T> {
    pub fn new(kind: EstimatorKind, beta: T) -> Result<Self> {
        if !(beta > T::zero()) {
            return Err(Error::Config(format!(
                "bandwidth must be positive, got {beta}"
            )));
        }
        Ok(Self {
            kind,
            beta,
            value: T::zero(),
        })
    }

    /// Advances over one step from `(x, level)` to `(x_next, level_next)` and
    /// returns the increment.
    pub fn step(&mut self, x: T, level: T, x_next: T, level_next: T) -> T {
        let y = x - level;
        let y_next = x_next - level_next;
        let inc = match self.kind {
            EstimatorKind::Occupation => {
                let dy = y_next - y;
                occupation_local_time_step(y, T::zero(), dy * dy, self.beta)
            }
            EstimatorKind::TanakaResidual => y_next.abs() - y.abs() - sign0(y) * (y_next - y),
        };
        self.value = self.value + inc;
        inc
    }
}
