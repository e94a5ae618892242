use crate::error::{Error, Result};

use super::ks::{ks_one_sample, pearson, uniform_cdf, EmpiricalSample};
use super::report::{Check, StatReport};

/// Fewest surviving pairs accepted by [`conditional_uniformity`].
pub const MIN_PAIRS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityThresholds {
    pub ks: f64,
    pub corr: f64,
    /// Per-quartile KS bound; `None` skips the stratified test.
    pub stratified: Option<f64>,
}

impl UniformityThresholds {
    /// Twice the 99% sampling quantiles at sample size `n`.
    pub fn calibrated(n: usize) -> Self {
        let n = n as f64;
        Self {
            ks: 2.0 * 1.63 / n.sqrt(),
            corr: 2.0 * 2.576 / n.sqrt(),
            stratified: Some(2.0 * 1.63 / (n / 4.0).sqrt()),
        }
    }
}

/// Tests that `pushforward(particle, domain)` is Uniform(0,1) and unrelated to the domain statistic.
///
/// Checks: `ks`, `corr` (absolute Pearson correlation of U with the domain
/// statistic) and, if enabled, `strat.q1`..`strat.q4` (KS of U within each
/// quartile of the domain statistic).
pub fn conditional_uniformity(
    name: &str,
    pairs: &[(f64, f64)],
    pushforward: impl Fn(f64, f64) -> f64,
    thresholds: &UniformityThresholds,
) -> Result<StatReport> {
    if pairs.len() < MIN_PAIRS {
        return Err(Error::InsufficientData {
            got: pairs.len(),
            need: MIN_PAIRS,
        });
    }
    let u: Vec<f64> = pairs.iter().map(|&(p, d)| pushforward(p, d)).collect();
    let dom: Vec<f64> = pairs.iter().map(|&(_, d)| d).collect();
    let sample = EmpiricalSample::from_unsorted(u.clone())?;
    let mut report = StatReport::new(name)
        .with_check(Check::new(
            "ks",
            ks_one_sample(&sample, uniform_cdf),
            thresholds.ks,
        ))
        .with_check(Check::new("corr", pearson(&u, &dom).abs(), thresholds.corr));
    if let Some(limit) = thresholds.stratified {
        let mut order: Vec<usize> = (0..u.len()).collect();
        order.sort_by(|&a, &b| dom[a].total_cmp(&dom[b]).then(a.cmp(&b)));
        let n = order.len();
        for q in 0..4 {
            let bin: Vec<f64> = order[q * n / 4..(q + 1) * n / 4]
                .iter()
                .map(|&i| u[i])
                .collect();
            let s = EmpiricalSample::from_unsorted(bin)?;
            report = report.with_check(Check::new(
                format!("strat.q{}", q + 1),
                ks_one_sample(&s, uniform_cdf),
                limit,
            ));
        }
    }
    Ok(report.with_value("pairs", pairs.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::NoiseStream;
    use crate::stats::report::Verdict;

    fn uniform_pairs(seed: u64, n: usize) -> Vec<(f64, f64)> {
        let mut src = NoiseStream::new(seed, 0, 2).source();
        (0..n)
            .map(|_| (src.uniform(), 1.0 + src.uniform::<f64>()))
            .collect()
    }

    #[test]
    fn exact_uniform_passes() {
        let pairs = uniform_pairs(1, 10_000);
        let th = UniformityThresholds::calibrated(pairs.len());
        let r = conditional_uniformity("null", &pairs, |p, _| p, &th).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{}", r.to_text());
        assert!(r.check("ks").unwrap().statistic < 0.02);
    }

    // sup_u |u^{1/2} - u| is attained at u = 1/4.
    #[test]
    fn squared_uniform_fails() {
        let pairs = uniform_pairs(2, 10_000);
        let th = UniformityThresholds::calibrated(pairs.len());
        let r = conditional_uniformity("biased", &pairs, |p, _| p * p, &th).unwrap();
        let d = r.check("ks").unwrap().statistic;
        assert!(d > 0.2 && (d - 0.25).abs() < 0.02, "{d}");
        assert_eq!(r.verdict(), Verdict::Fail);
    }

    #[test]
    fn dependence_on_domain_is_caught() {
        let pairs = uniform_pairs(3, 10_000);
        let th = UniformityThresholds::calibrated(pairs.len());
        // Marginally uniform, but U tracks the domain statistic.
        let r = conditional_uniformity("dep", &pairs, |_, d| d - 1.0, &th).unwrap();
        assert_eq!(r.check("ks").unwrap().verdict, Verdict::Pass);
        assert_eq!(r.check("corr").unwrap().verdict, Verdict::Fail);
        assert_eq!(r.check("strat.q1").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn too_few_pairs() {
        let pairs = uniform_pairs(4, 99);
        let th = UniformityThresholds::calibrated(99);
        assert!(matches!(
            conditional_uniformity("small", &pairs, |p, _| p, &th),
            Err(Error::InsufficientData { got: 99, need: 100 })
        ));
    }

    #[test]
    fn calibration_pass_rate() {
        let trials = 400;
        let passes = (0..trials)
            .filter(|&s| {
                let pairs = uniform_pairs(100 + s, 1000);
                let th = UniformityThresholds::calibrated(pairs.len());
                conditional_uniformity("cal", &pairs, |p, _| p, &th)
                    .unwrap()
                    .verdict()
                    == Verdict::Pass
            })
            .count();
        assert!(passes as f64 >= 0.99 * trials as f64, "{passes}/{trials}");
    }
}
