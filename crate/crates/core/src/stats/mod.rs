//! Statistical and numerical verification: KS tests, conditional uniformity,
//! generator and measure-evolution checks, Itô–Tanaka residuals, and the
//! key/value report they all produce.

mod generator;
mod ks;
mod report;
mod tanaka;
mod uniformity;

pub use generator::{dynkin_check, measure_evolution_check, DynkinPath, RegressionAccumulator};
pub use ks::{ks_one_sample, ks_two_sample, pearson, uniform_cdf, EmpiricalSample, MIN_SAMPLE};
pub use report::{format_real, parse_reports, Check, Fingerprint, StatReport, Verdict};
pub use tanaka::{
    calibrate_tanaka_constant, channels, tanaka_residual, tanaka_residual_check,
    tanaka_sup_residual,
};
pub use uniformity::{conditional_uniformity, UniformityThresholds, MIN_PAIRS};
