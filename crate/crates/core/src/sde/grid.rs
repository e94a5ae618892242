use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform time discretization of `[0, t_end]`.
///
/// Node times are computed from the index (`t_end * i / n_steps`), never by
/// repeated addition of `dt`, so the last node is exactly `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_end: T,
    n_steps: usize,
    dt: T,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_end: T, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Config("grid.n_steps must be positive".into()));
        }
        if !(t_end > T::zero()) || !t_end.is_finite() {
            return Err(Error::Config(format!(
                "grid.t_end must be positive and finite, got {t_end}"
            )));
        }
        Ok(Self {
            t_end,
            n_steps,
            dt: t_end / T::from_usize_lossy(n_steps),
        })
    }

    /// Grid with the given step size; `t_end / dt` is rounded to the nearest integer.
    pub fn with_dt(t_end: T, dt: T) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::Config(format!("dt must be positive, got {dt}")));
        }
        let n = (t_end / dt).round().to_usize().unwrap_or(0);
        Self::new(t_end, n)
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn time(&self, i: usize) -> T {
        if i == self.n_steps {
            self.t_end
        } else {
            self.t_end * T::from_usize_lossy(i) / T::from_usize_lossy(self.n_steps)
        }
    }

    /// Index of the first node with time `>= t`.
    pub fn index_at_or_after(&self, t: T) -> usize {
        let raw = (t / self.t_end * T::from_usize_lossy(self.n_steps))
            .ceil()
            .to_usize()
            .unwrap_or(0);
        raw.min(self.n_steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_node_is_exact() {
        let g = TimeGrid::new(0.3f64, 7).unwrap();
        assert_eq!(g.time(7), 0.3);
        assert_eq!(g.time(0), 0.0);
        assert!((g.dt() * 7.0 - 0.3).abs() < 1e-16);
    }

    #[test]
    fn zero_steps_is_config_error() {
        assert!(matches!(TimeGrid::new(1.0f64, 0), Err(Error::Config(_))));
        assert!(TimeGrid::new(-1.0f64, 3).is_err());
    }

    #[test]
    fn with_dt_rounds() {
        let g = TimeGrid::with_dt(0.5f64, 1e-4).unwrap();
        assert_eq!(g.n_steps(), 5000);
        assert_eq!(g.index_at_or_after(0.1), 1000);
    }
}
