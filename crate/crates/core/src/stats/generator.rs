use crate::error::{Error, Result};

use super::ks::MIN_SAMPLE;
use super::report::{Check, StatReport};

/// Per-path summary for the Dynkin and carré du champ comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DynkinPath {
    pub f0: f64,
    pub ft: f64,
    /// `∫ 𝓛̃F(D_s) ds` by the left-point rule.
    pub generator_integral: f64,
    /// Realized quadratic variation `Σ (ΔF)²`.
    pub qv: f64,
    /// `∫ Γ(F, F)(D_s) ds` by the left-point rule.
    pub gamma_integral: f64,
}

impl DynkinPath {
    pub fn start(f0: f64) -> Self {
        Self {
            f0,
            ft: f0,
            ..Self::default()
        }
    }

    /// Records one step from the current value to `f_next`; `generator` and `gamma` are evaluated before the step.
    pub fn step(&mut self, f_next: f64, generator: f64, gamma: f64, dt: f64) {
        let df = f_next - self.ft;
        self.qv += df * df;
        self.generator_integral += generator * dt;
        self.gamma_integral += gamma * dt;
        self.ft = f_next;
    }
}

fn mean_and_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Compares `(E F(D_t) - F(D_0))/t` with `E ∫ 𝓛̃F / t`, and `E Σ(ΔF)²` with `E ∫ Γ(F,F)`.
///
/// Checks `drift` and `qv` are relative errors against `tolerance`.
pub fn dynkin_check(
    name: &str,
    paths: &[DynkinPath],
    t: f64,
    tolerance: f64,
) -> Result<StatReport> {
    if paths.len() < MIN_SAMPLE {
        return Err(Error::InsufficientData {
            got: paths.len(),
            need: MIN_SAMPLE,
        });
    }
    let (emp, emp_se) = mean_and_stderr(paths.iter().map(|p| (p.ft - p.f0) / t));
    let (pred, pred_se) = mean_and_stderr(paths.iter().map(|p| p.generator_integral / t));
    let (qv, _) = mean_and_stderr(paths.iter().map(|p| p.qv / t));
    let (gamma, _) = mean_and_stderr(paths.iter().map(|p| p.gamma_integral / t));
    let rel = |a: f64, b: f64| {
        if b == 0.0 {
            if a == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            ((a - b) / b).abs()
        }
    };
    Ok(StatReport::new(name)
        .with_check(Check::new("drift", rel(emp, pred), tolerance))
        .with_check(Check::new("qv", rel(qv, gamma), tolerance))
        .with_value("drift.empirical", emp)
        .with_value("drift.empirical_stderr", emp_se)
        .with_value("drift.predicted", pred)
        .with_value("drift.predicted_stderr", pred_se)
        .with_value("qv.empirical", qv)
        .with_value("qv.predicted", gamma)
        .with_value("paths", paths.len() as f64))
}

/// Running sums for the no-intercept regression `y ≈ a·x1 + c·x2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegressionAccumulator {
    pub n: usize,
    s11: f64,
    s12: f64,
    s22: f64,
    s1y: f64,
    s2y: f64,
}

impl RegressionAccumulator {
    pub fn push(&mut self, x1: f64, x2: f64, y: f64) {
        self.n += 1;
        self.s11 += x1 * x1;
        self.s12 += x1 * x2;
        self.s22 += x2 * x2;
        self.s1y += x1 * y;
        self.s2y += x2 * y;
    }

    pub fn merge(&mut self, o: &Self) {
        self.n += o.n;
        self.s11 += o.s11;
        self.s12 += o.s12;
        self.s22 += o.s22;
        self.s1y += o.s1y;
        self.s2y += o.s2y;
    }

    /// Least-squares slopes, or `None` when the design is singular.
    pub fn slopes(&self) -> Option<(f64, f64)> {
        let det = self.s11 * self.s22 - self.s12 * self.s12;
        if !(self.s11 > 0.0 && self.s22 > 0.0) || det <= 1e-12 * self.s11 * self.s22 {
            return None;
        }
        Some((
            (self.s22 * self.s1y - self.s12 * self.s2y) / det,
            (self.s11 * self.s2y - self.s12 * self.s1y) / det,
        ))
    }
}

/// Regresses increments of `μ_t(k)` on the predicted drift (`x1`) and diffusion (`x2`) terms.
///
/// Checks `slope.drift` and `slope.diffusion` are `|slope - 1|`; a singular
/// design yields degenerate checks instead of failures.
pub fn measure_evolution_check(
    name: &str,
    acc: &RegressionAccumulator,
    tolerance: f64,
) -> Result<StatReport> {
    if acc.n < MIN_SAMPLE {
        return Err(Error::InsufficientData {
            got: acc.n,
            need: MIN_SAMPLE,
        });
    }
    let report = StatReport::new(name).with_value("increments", acc.n as f64);
    Ok(match acc.slopes() {
        Some((a, c)) => report
            .with_check(Check::new("slope.drift", (a - 1.0).abs(), tolerance))
            .with_check(Check::new("slope.diffusion", (c - 1.0).abs(), tolerance))
            .with_value("slope.drift", a)
            .with_value("slope.diffusion", c),
        None => report
            .with_check(Check::degenerate("slope.drift", tolerance))
            .with_check(Check::degenerate("slope.diffusion", tolerance)),
    })
}
