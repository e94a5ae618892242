//! Geometry suite: Stokes identity, tube area and skeleton motion.

use dualflow::geometry::{
    annulus_skeleton_speed, ellipse, ellipse_endpoint_speed, endpoint_speed_finite_difference,
    parse_curve_text, symmetric_shape, CorpusShape, DiscreteCurve, Region, Skeleton,
    SymmetricConvexCurve, TestFunction, TubeOptions, TubeQuadrature,
};
use dualflow::stats::{Check, StatReport};
use dualflow::{Error, Result};

pub const STOKES_TOLERANCE: f64 = 1e-3;
pub const AREA_TOLERANCE: f64 = 1e-3;
pub const SKELETON_SPEED_TOLERANCE: f64 = 1e-10;
pub const ENDPOINT_TOLERANCE: f64 = 0.02;
/// Node count and step of the endpoint finite difference.
pub const ENDPOINT_NODES: usize = 4096;
pub const ENDPOINT_DT: f64 = 1e-5;

/// A corpus member or a user-supplied curve.
#[derive(Debug, Clone)]
pub enum ShapeSource {
    Corpus(CorpusShape),
    File { name: String, curve: DiscreteCurve<f64> },
}

impl ShapeSource {
    /// A corpus name, or else a path to a curve file.
    pub fn resolve(arg: &str) -> Result<Self> {
        if let Ok(s) = arg.parse::<CorpusShape>() {
            return Ok(ShapeSource::Corpus(s));
        }
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::Config(format!("shape: {arg:?} is neither a corpus shape nor a readable file ({e})")))?;
        let nodes = parse_curve_text(&text).map_err(|e| Error::Config(format!("shape: malformed curve file {arg:?}: {e}")))?;
        let curve = DiscreteCurve::new(nodes).map_err(|e| Error::Config(format!("shape: invalid curve in {arg:?}: {e}")))?;
        Ok(ShapeSource::File { name: arg.to_string(), curve })
    }

    pub fn name(&self) -> &str {
        match self {
            ShapeSource::Corpus(s) => s.name(),
            ShapeSource::File { name, .. } => name,
        }
    }

    fn build(&self, nodes: usize) -> Result<(Region<f64>, Skeleton<f64>, f64)> {
        match self {
            ShapeSource::Corpus(s) => {
                let (r, sk) = s.build(nodes)?;
                Ok((r, sk, s.area()))
            }
            ShapeSource::File { name, curve } => {
                let area = curve.signed_area();
                let (r, sk) = symmetric_shape(curve.clone())
                    .map_err(|e| Error::Config(format!("shape: {name:?} is not a doubly symmetric convex curve: {e}")))?;
                Ok((r, sk, area))
            }
        }
    }
}

/// Runs the suite for one shape over the chosen test functions.
pub fn check_shape(shape: &ShapeSource, functions: &[TestFunction], nodes: usize) -> Result<StatReport> {
    let (region, skeleton, exact_area) = shape.build(nodes)?;
    let q = TubeQuadrature::new(&region, TubeOptions::default())?;
    let area = q.integrate(|_| 1.0);
    let mut report = StatReport::new(format!("geometry.{}", shape.name()))
        .with_check(Check::new("tube_area", ((area - exact_area) / exact_area).abs(), AREA_TOLERANCE))
        .with_value("tube_area", area)
        .with_value("exact_area", exact_area);
    for f in functions {
        let s = q.stokes(&skeleton, f.g, f.grad);
        report = report
            .with_check(Check::new(format!("stokes.{}", f.name), s.residual.abs(), STOKES_TOLERANCE))
            .with_value(format!("stokes.{}.lhs", f.name), s.lhs)
            .with_value(format!("stokes.{}.rhs", f.name), s.rhs);
    }
    match shape {
        ShapeSource::Corpus(CorpusShape::Annulus12) => {
            let v = annulus_skeleton_speed(1.0, 2.0)?;
            report = report
                .with_check(Check::new("skeleton_speed", (v + 0.375).abs(), SKELETON_SPEED_TOLERANCE))
                .with_value("skeleton_speed", v);
        }
        ShapeSource::Corpus(s @ (CorpusShape::Ellipse21 | CorpusShape::Ellipse31)) => {
            let a = if *s == CorpusShape::Ellipse21 { 2.0 } else { 3.0 };
            let c = SymmetricConvexCurve::new(ellipse(a, 1.0, ENDPOINT_NODES)?)?;
            let fd = endpoint_speed_finite_difference(&c, ENDPOINT_DT)?;
            let exact = ellipse_endpoint_speed(a, 1.0);
            report = report
                .with_check(Check::new("endpoint_speed", ((fd - exact) / exact).abs(), ENDPOINT_TOLERANCE))
                .with_value("endpoint_speed.finite_difference", fd)
                .with_value("endpoint_speed.closed_form", exact);
        }
        _ => {}
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dualflow::stats::Verdict;

    #[test]
    fn disk_with_constant() {
        let r = check_shape(&ShapeSource::Corpus(CorpusShape::Disk), &TestFunction::ALL[..1], 512).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{}", r.to_text());
    }

    #[test]
    fn missing_file_is_a_config_error() {
        assert!(matches!(ShapeSource::resolve("/nonexistent/curve.txt"), Err(Error::Config(_))));
    }
}
