use crate::error::{Error, Result};
use crate::sde::PathRecord;

use super::ks::EmpiricalSample;
use super::report::{Check, StatReport};

/// Channel names read by [`tanaka_residual`].
pub mod channels {
    /// Distance `ρ⁺` from the particle to the boundary.
    pub const RHO_PLUS: &str = "rho_plus";
    pub const X1: &str = "x1";
    pub const X2: &str = "x2";
    /// Components of the inward normal at the foot point of the particle.
    pub const N1: &str = "n1";
    pub const N2: &str = "n2";
    /// Curvature of the level line through the particle.
    pub const H: &str = "h";
    pub const SIN_THETA: &str = "sin_theta";
    /// Cumulative skeleton local time.
    pub const LOCAL_TIME: &str = "local_time";
}

/// `r_t = ρ⁺(X_t) - ρ⁺(X_0) - Σ[⟨N, ΔX⟩ - ½h dt - sinθ ΔL]`, all integrands at the left point.
///
/// Channels `x2`/`n2` are optional; without them the path is one-dimensional.
pub fn tanaka_residual(path: &PathRecord<f64>) -> Result<Vec<f64>> {
    use channels::*;
    let rho = path.channel(RHO_PLUS)?;
    let x1 = path.channel(X1)?;
    let n1 = path.channel(N1)?;
    let h = path.channel(H)?;
    let st = path.channel(SIN_THETA)?;
    let l = path.channel(LOCAL_TIME)?;
    let second = match (path.channel(X2), path.channel(N2)) {
        (Ok(x2), Ok(n2)) => Some((x2, n2)),
        (Err(_), Err(_)) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let dt = path.grid().dt();
    let mut out = Vec::with_capacity(rho.len());
    out.push(0.0);
    let mut sum = 0.0;
    for k in 0..rho.len() - 1 {
        let mut dot = n1[k] * (x1[k + 1] - x1[k]);
        if let Some((x2, n2)) = second {
            dot += n2[k] * (x2[k + 1] - x2[k]);
        }
        sum += dot - 0.5 * h[k] * dt - st[k] * (l[k + 1] - l[k]);
        out.push(rho[k + 1] - rho[0] - sum);
    }
    Ok(out)
}

pub fn tanaka_sup_residual(path: &PathRecord<f64>) -> Result<f64> {
    Ok(tanaka_residual(path)?
        .into_iter()
        .fold(0.0, |m, r| m.max(r.abs())))
}

/// Tolerance constant `c` in `c dt^{1/4}` fitted so that `p95` is met exactly at `dt`.
pub fn calibrate_tanaka_constant(p95: f64, dt: f64) -> f64 {
    p95 / dt.powf(0.25)
}

/// 95th percentile of the per-path sup residuals against `c dt^{1/4}`.
pub fn tanaka_residual_check(
    name: &str,
    sup_residuals: &[f64],
    dt: f64,
    c: f64,
) -> Result<StatReport> {
    let sample = EmpiricalSample::from_unsorted(sup_residuals.to_vec()).map_err(|e| match e {
        Error::InsufficientData { .. } => e,
        other => Error::Contract(format!("sup residuals: {other}")),
    })?;
    let p95 = sample.quantile(0.95);
    Ok(StatReport::new(name)
        .with_check(Check::new("sup_residual.p95", p95, c * dt.powf(0.25)))
        .with_value("sup_residual.median", sample.quantile(0.5))
        .with_value("tolerance.c", c)
        .with_value("paths", sample.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual1d::brownian_path;
    use crate::sde::{occupation_local_time_step, tanaka_local_time, NoiseStream, TimeGrid};
    use crate::stats::report::Verdict;

    fn interval_path(
        seed: u64,
        grid: &TimeGrid<f64>,
        radius: f64,
        l: &dyn Fn(&[f64]) -> Vec<f64>,
    ) -> PathRecord<f64> {
        let x = brownian_path(&mut NoiseStream::new(seed, 0, 1).source(), grid, 0.1);
        let n = x.len();
        PathRecord::new(*grid)
            .with_channel(
                channels::RHO_PLUS,
                x.iter().map(|v| radius - v.abs()).collect(),
            )
            .unwrap()
            .with_channel(
                channels::N1,
                x.iter().map(|&v| -crate::scalar::sign0(v)).collect(),
            )
            .unwrap()
            .with_channel(channels::H, vec![0.0; n])
            .unwrap()
            .with_channel(channels::SIN_THETA, vec![1.0; n])
            .unwrap()
            .with_channel(channels::LOCAL_TIME, l(&x))
            .unwrap()
            .with_channel(channels::X1, x)
            .unwrap()
    }

    // With the discrete Tanaka local time the 1D identity is exact.
    #[test]
    fn interval_with_tanaka_local_time_is_exact() {
        let grid = TimeGrid::new(0.5, 5000).unwrap();
        let p = interval_path(1, &grid, 10.0, &|x| tanaka_local_time(x));
        assert!(tanaka_sup_residual(&p).unwrap() < 1e-12);
    }

    #[test]
    fn interval_with_occupation_local_time_is_small() {
        let grid = TimeGrid::<f64>::new(0.1, 10_000).unwrap();
        let beta = grid.dt().sqrt();
        let occ = |x: &[f64]| {
            let mut l = vec![0.0];
            for k in 0..x.len() - 1 {
                let dx = x[k + 1] - x[k];
                l.push(l[k] + occupation_local_time_step(x[k], 0.0, dx * dx, beta));
            }
            l
        };
        let sups: Vec<f64> = (0..40)
            .map(|s| tanaka_sup_residual(&interval_path(s, &grid, 10.0, &occ)).unwrap())
            .collect();
        let r = tanaka_residual_check("interval", &sups, grid.dt(), 2.0).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{}", r.to_text());
    }

    #[test]
    fn missing_channel_is_reported() {
        let grid = TimeGrid::new(0.1, 10).unwrap();
        let p = PathRecord::new(grid)
            .with_channel(channels::RHO_PLUS, vec![0.0; 11])
            .unwrap();
        assert!(matches!(tanaka_residual(&p), Err(Error::MissingChannel(_))));
    }

    #[test]
    fn calibration_inverts_tolerance() {
        let c = calibrate_tanaka_constant(0.05, 1e-4);
        assert!((c * 1e-4f64.powf(0.25) - 0.05).abs() < 1e-15);
    }
}
