use super::curve::DiscreteCurve;
use super::point::Vec2;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Boundary normal speed `H` at the two feet of a skeleton point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpeed<T> {
    pub h1: T,
    /// Tangential gradient of `H` at `y1`.
    pub grad_h1: Vec2<T>,
    pub h2: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonVelocity<T> {
    pub normal: Vec2<T>,
    pub tangential: Vec2<T>,
}

/// Velocity of the skeleton point `x` with feet `y1`, `y2` when the boundary
/// moves inward with normal speed `H` (flat plane).
pub fn skeleton_motion<T: Real>(
    y1: Vec2<T>,
    y2: Vec2<T>,
    x: Vec2<T>,
    speed: BoundarySpeed<T>,
    theta: T,
) -> Result<SkeletonVelocity<T>> {
    if !(theta > T::zero()) || theta > T::FRAC_PI_2() + T::lit(1e-12) {
        return Err(Error::Domain(format!(
            "skeleton angle {theta} outside (0, pi/2]"
        )));
    }
    let r1 = x.dist(y1);
    let r2 = x.dist(y2);
    if (r1 - r2).abs() > T::lit(1e-6) * T::one().max(r1) {
        return Err(Error::Equidistance(r1.to_f64_lossy(), r2.to_f64_lossy()));
    }
    let n1 = (x - y1).normalized();
    let n2 = (x - y2).normalized();
    let s = theta.sin();
    let jump = (speed.h1 - speed.h2) / (T::lit(4.0) * s * s);
    let normal = (n1 - n2) * jump;

    let n_s = (n1 - n2) * (T::one() / (T::two() * s));
    let t_s = n_s.perp();
    let jacobi = speed.grad_h1 * (-r1);
    let along = -jacobi.dot(n_s) / (T::two() * s) + jump;
    let tangential = t_s * jacobi.dot(t_s) + (n1 + n2) * along;
    Ok(SkeletonVelocity { normal, tangential })
}

/// Limit speed of a skeleton endpoint: `ρ²/2 · h''` with `ρ` the radius of
/// curvature at the vertex and `h''` the second arc-length derivative of the
/// boundary curvature there.
pub fn endpoint_speed<T: Real>(rho: T, h_ss: T) -> T {
    rho * rho * T::half() * h_ss
}

/// Moves every node along its inward normal by `speed(i, κ_i) · dt`.
pub fn normal_flow<T: Real>(
    curve: &DiscreteCurve<T>,
    dt: T,
    speed: impl Fn(usize, T) -> T,
) -> DiscreteCurve<T> {
    let nodes = (0..curve.len())
        .map(|i| curve.nodes()[i] + curve.inward_normal(i) * (speed(i, curve.curvature_at(i)) * dt))
        .collect();
    DiscreteCurve::from_nodes_unchecked(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::ellipse;
    use crate::geometry::medial::skeleton_half_length;
    use crate::geometry::symmetric::SymmetricConvexCurve;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn symmetric_input_is_still() {
        let v = skeleton_motion(
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, -1.0),
            Vec2::new(0.0, 0.0),
            BoundarySpeed {
                h1: 0.3,
                grad_h1: Vec2::zero(),
                h2: 0.3,
            },
            FRAC_PI_2,
        )
        .unwrap();
        assert_eq!(v.normal, Vec2::zero());
        assert_eq!(v.tangential, Vec2::zero());
    }

    // Under boundary speed h/2 the annulus radii move as r' = -1/(2r) (outer)
    // and r' = +1/(2r) (inner); the mid-radius moves at (-1/4 - 1/2)/2.
    #[test]
    fn annulus_mid_circle_speed() {
        let v = skeleton_motion(
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.5, 0.0),
            BoundarySpeed {
                h1: 0.25,
                grad_h1: Vec2::zero(),
                h2: -0.5,
            },
            FRAC_PI_2,
        )
        .unwrap();
        assert!((v.normal.x + 0.375).abs() < 1e-12);
        assert_eq!(v.normal.y, 0.0);
        assert!(v.tangential.norm() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        let s = BoundarySpeed {
            h1: 0.0,
            grad_h1: Vec2::zero(),
            h2: 0.0,
        };
        let (a, b) = (Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.0));
        assert!(matches!(
            skeleton_motion(a, b, Vec2::new(1.2, 0.0), s, 1.0),
            Err(Error::Equidistance(..))
        ));
        assert!(matches!(
            skeleton_motion(a, b, Vec2::new(1.5, 0.0), s, 0.0),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        // Exchanging only the speed data flips the normal part; exchanging
        // the feet together with their data describes the same configuration.
        #[test]
        fn normal_part_under_exchange(phi in 0.1f64..1.5, h1 in -2.0f64..2.0, h2 in -2.0f64..2.0) {
            let y1 = Vec2::new(phi.cos(), phi.sin());
            let y2 = Vec2::new(phi.cos(), -phi.sin());
            let x = Vec2::new(0.0, 0.0);
            let theta = phi.sin().atan2(phi.cos().abs()).min(FRAC_PI_2);
            let fwd = skeleton_motion(y1, y2, x, BoundarySpeed { h1, grad_h1: Vec2::zero(), h2 }, theta).unwrap();
            let data_swap = skeleton_motion(y1, y2, x, BoundarySpeed { h1: h2, grad_h1: Vec2::zero(), h2: h1 }, theta).unwrap();
            let full_swap = skeleton_motion(y2, y1, x, BoundarySpeed { h1: h2, grad_h1: Vec2::zero(), h2: h1 }, theta).unwrap();
            prop_assert!((fwd.normal + data_swap.normal).norm() < 1e-12);
            prop_assert!((fwd.normal - full_swap.normal).norm() < 1e-12);
        }
    }

    fn ellipse_kappa(a: f64, b: f64, t: f64) -> f64 {
        a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5)
    }

    // Near the endpoint, with the feet on the analytic ellipse (2, 1) and
    // H = h/2, the tangential speed approaches ρ²/2 · h'' = 0.125 · (-18).
    #[test]
    fn endpoint_limit_of_tangential_speed() {
        let (a, b) = (2.0f64, 1.0f64);
        let c = a * a - b * b;
        let xstar = c / a;
        let exact = endpoint_speed(0.5, -3.0 * a * c / b.powi(6));
        assert!((exact + 2.25).abs() < 1e-12);
        let at = |delta: f64| {
            let x = Vec2::new(xstar - delta, 0.0);
            let t = (a * x.x / c).acos();
            let speed = (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
            let tangent = Vec2::new(-a * t.sin(), b * t.cos()) * (1.0 / speed);
            let q = a * a * t.sin().powi(2) + b * b * t.cos().powi(2);
            let dk_dt = -3.0 * a * b * c * t.sin() * t.cos() / q.powf(2.5);
            let y1 = Vec2::new(a * t.cos(), b * t.sin());
            let y2 = Vec2::new(y1.x, -y1.y);
            let h = 0.5 * ellipse_kappa(a, b, t);
            let theta = y1.y.abs().atan2((x.x - y1.x).abs());
            let grad = tangent * (0.5 * dk_dt / speed);
            skeleton_motion(
                y1,
                y2,
                x,
                BoundarySpeed {
                    h1: h,
                    grad_h1: grad,
                    h2: h,
                },
                theta,
            )
            .unwrap()
            .tangential
            .x
        };
        let v = at(1e-5);
        assert!((v / exact - 1.0).abs() < 0.02, "{v}");
    }

    // Finite-difference oracle: one explicit step of the flow H = h/2 and a
    // fresh medial axis.
    #[test]
    fn endpoint_law_matches_finite_difference() {
        let dt = 1e-5;
        let c0 = SymmetricConvexCurve::new(ellipse::<f64>(2.0, 1.0, 4096).unwrap()).unwrap();
        let moved = normal_flow(c0.base(), dt, |_, k| 0.5 * k);
        let c1 = SymmetricConvexCurve::with_tolerance(moved, 1e-9).unwrap();
        let rate = (skeleton_half_length(&c1).unwrap() - skeleton_half_length(&c0).unwrap()) / dt;
        assert!((rate / -2.25 - 1.0).abs() < 0.02, "{rate}");
    }
}
