use super::curve::DiscreteCurve;
use super::distance::foot_point;
use super::point::Vec2;
use super::symmetric::SymmetricConvexCurve;
use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;
use crate::scalar::Real;

/// Horizontal skeleton `[-x*, x*] × {0}` of a symmetric convex domain with
/// the angle profile `θ(x)` sampled on a uniform grid over `[0, x*]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSegment<T> {
    pub half_length: T,
    theta: Vec<T>,
}

impl<T: Real> SkeletonSegment<T> {
    pub fn new(half_length: T, theta: Vec<T>) -> Self {
        Self { half_length, theta }
    }

    pub fn profile(&self) -> &[T] {
        &self.theta
    }

    /// `θ` at abscissa `x`, extended by symmetry and set to 0 for `|x| >= x*`.
    pub fn theta(&self, x: T) -> T {
        let x = x.abs();
        let n = self.theta.len();
        if x >= self.half_length || n < 2 {
            return T::zero();
        }
        let pos = x / self.half_length * T::from_usize_lossy(n - 1);
        let i = pos.floor().to_usize().unwrap_or(0).min(n - 2);
        let u = pos - T::from_usize_lossy(i);
        self.theta[i] + (self.theta[i + 1] - self.theta[i]) * u
    }

    /// Same profile shape stretched to a new half-length.
    pub fn rescaled(&self, half_length: T) -> Self {
        Self {
            half_length,
            theta: self.theta.clone(),
        }
    }
}

/// Skeleton of the domains the crate handles.
#[derive(Debug, Clone, PartialEq)]
pub enum Skeleton<T> {
    /// Center of a disk.
    Point(Vec2<T>),
    Segment(SkeletonSegment<T>),
    /// Mid-circle of a concentric annulus.
    Circle {
        center: Vec2<T>,
        radius: T,
    },
}

impl<T: Real> Skeleton<T> {
    /// Mid-circle of an annulus bounded by two concentric discrete circles.
    pub fn annulus(outer: &DiscreteCurve<T>, inner: &DiscreteCurve<T>) -> Self {
        let mean_radius = |c: &DiscreteCurve<T>| {
            c.nodes().iter().fold(T::zero(), |s, p| s + p.norm()) / T::from_usize_lossy(c.len())
        };
        Skeleton::Circle {
            center: Vec2::zero(),
            radius: (mean_radius(outer) + mean_radius(inner)) * T::half(),
        }
    }

    /// `∫_S g sin θ dμ̲` over the regular part of the skeleton.
    pub fn weighted_integral(&self, g: &impl Fn(Vec2<T>) -> T) -> T {
        let rule = CompositeRule::new(8, 256);
        match self {
            Skeleton::Point(_) => T::zero(),
            Skeleton::Segment(s) => {
                if s.half_length <= T::zero() {
                    return T::zero();
                }
                rule.integrate(-s.half_length, s.half_length, |x| {
                    g(Vec2::new(x, T::zero())) * s.theta(x).sin()
                })
            }
            Skeleton::Circle { center, radius } => {
                let tau = T::two() * T::PI();
                rule.integrate(T::zero(), tau, |phi| {
                    g(*center + Vec2::new(phi.cos(), phi.sin()) * *radius) * *radius
                })
            }
        }
    }
}

pub const DEFAULT_PROFILE_POINTS: usize = 2049;

/// Medial axis of a symmetric convex curve.
///
/// `x*` is the center of curvature of the right horizontal vertex. `θ(x)` is
/// the angle between the horizontal axis and the segment from `(x, 0)` to its
/// nearest boundary point.
pub fn medial_axis<T: Real>(
    curve: &SymmetricConvexCurve<T>,
    profile_points: usize,
) -> Result<SkeletonSegment<T>> {
    let half_length = skeleton_half_length(curve)?;
    let n = profile_points.max(2);
    let mut theta = Vec::with_capacity(n);
    for j in 0..n {
        if j == n - 1 || half_length == T::zero() {
            theta.push(T::zero());
            continue;
        }
        let x = half_length * T::from_usize_lossy(j) / T::from_usize_lossy(n - 1);
        let f = foot_point(Vec2::new(x, T::zero()), curve.base())?;
        theta.push(f.foot.y.abs().atan2((x - f.foot.x).abs()));
    }
    Ok(SkeletonSegment { half_length, theta })
}

/// `x* = v - 1/κ(v)`; small negative values from discretization clamp to 0.
pub fn skeleton_half_length<T: Real>(curve: &SymmetricConvexCurve<T>) -> Result<T> {
    let v = curve.vertex_x();
    let k = curve.curvature_at(0);
    if !(k > T::zero()) {
        return Err(Error::InvariantViolation(format!(
            "vertex curvature {k} is not positive"
        )));
    }
    let x = v - T::one() / k;
    if x < -T::lit(1e-6) * v {
        return Err(Error::InvariantViolation(format!(
            "vertex center of curvature lies left of the origin (x* = {x})"
        )));
    }
    Ok(x.max(T::zero()))
}

/// Skeleton of a single symmetric convex boundary.
pub fn symmetric_skeleton<T: Real>(curve: &SymmetricConvexCurve<T>) -> Result<Skeleton<T>> {
    Ok(Skeleton::Segment(medial_axis(
        curve,
        DEFAULT_PROFILE_POINTS,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{circle, ellipse};
    use std::f64::consts::FRAC_PI_2;

    fn sym(a: f64, b: f64, n: usize) -> SymmetricConvexCurve<f64> {
        SymmetricConvexCurve::new(ellipse(a, b, n).unwrap()).unwrap()
    }

    #[test]
    fn ellipse_half_length_and_theta() {
        let s = medial_axis(&sym(2.0, 1.0, 2048), 129).unwrap();
        assert!((s.half_length - 1.5).abs() < 1e-3);
        assert!((s.theta(0.0) - FRAC_PI_2).abs() < 1e-9);
        assert_eq!(s.theta(1.5), 0.0);
        assert!(s.theta(1.4) < s.theta(0.5));
    }

    // Oracle: scan the axis with a dense analytic boundary and find where the
    // nearest point stops being the vertex.
    #[test]
    fn half_length_matches_two_nearest_point_test() {
        let dense: Vec<Vec2<f64>> = (0..200_000)
            .map(|i| {
                let t = i as f64 / 200_000.0 * std::f64::consts::TAU;
                Vec2::new(2.0 * t.cos(), t.sin())
            })
            .collect();
        let nearest_y = |x: f64| {
            let q = Vec2::new(x, 0.0);
            dense
                .iter()
                .min_by(|a, b| a.dist(q).total_cmp(&b.dist(q)))
                .unwrap()
                .y
                .abs()
        };
        let (mut lo, mut hi) = (1.0, 1.9);
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if nearest_y(mid) > 1e-3 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = medial_axis(&sym(2.0, 1.0, 2048), 2).unwrap().half_length;
        assert!((x - lo).abs() < 2e-3, "{x} vs {lo}");
    }

    #[test]
    fn circle_skeleton_is_a_point() {
        let c = SymmetricConvexCurve::new(circle::<f64>(1.0, 1024).unwrap()).unwrap();
        assert!(skeleton_half_length(&c).unwrap() < 1e-5);
    }

    #[test]
    fn half_length_converges_under_refinement() {
        let x = |n| skeleton_half_length(&sym(2.0, 1.0, n)).unwrap();
        let (a, b, c) = (x(256), x(512), x(1024));
        assert!((b - c).abs() <= (a - b).abs());
    }

    #[test]
    fn skeleton_integrals() {
        let ann = Skeleton::Circle {
            center: Vec2::zero(),
            radius: 1.5,
        };
        let v = ann.weighted_integral(&|_| 1.0f64);
        assert!((v - 3.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(
            Skeleton::Point(Vec2::zero()).weighted_integral(&|_| 1.0f64),
            0.0
        );
    }
}
