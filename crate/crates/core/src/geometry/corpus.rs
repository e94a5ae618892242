//! Reference shapes and test functions with known closed forms.

use std::f64::consts::PI;
use std::str::FromStr;

use super::curve::{circle, ellipse, DiscreteCurve};
use super::distance::Region;
use super::medial::{skeleton_half_length, symmetric_skeleton, Skeleton};
use super::motion::{endpoint_speed, normal_flow, skeleton_motion, BoundarySpeed};
use super::point::Vec2;
use super::symmetric::SymmetricConvexCurve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusShape {
    Disk,
    Ellipse21,
    Ellipse31,
    Annulus12,
}

impl CorpusShape {
    pub const ALL: [CorpusShape; 4] = [
        CorpusShape::Disk,
        CorpusShape::Ellipse21,
        CorpusShape::Ellipse31,
        CorpusShape::Annulus12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorpusShape::Disk => "disk",
            CorpusShape::Ellipse21 => "ellipse-2-1",
            CorpusShape::Ellipse31 => "ellipse-3-1",
            CorpusShape::Annulus12 => "annulus-1-2",
        }
    }

    pub fn area(self) -> f64 {
        match self {
            CorpusShape::Disk => PI,
            CorpusShape::Ellipse21 => 2.0 * PI,
            CorpusShape::Ellipse31 => 3.0 * PI,
            CorpusShape::Annulus12 => 3.0 * PI,
        }
    }

    /// Region with `n` nodes per boundary component, and its skeleton.
    pub fn build(self, n: usize) -> Result<(Region<f64>, Skeleton<f64>)> {
        match self {
            CorpusShape::Disk => Ok((Region::from(circle(1.0, n)?), Skeleton::Point(Vec2::zero()))),
            CorpusShape::Ellipse21 | CorpusShape::Ellipse31 => {
                let a = if self == CorpusShape::Ellipse21 {
                    2.0
                } else {
                    3.0
                };
                symmetric_shape(ellipse(a, 1.0, n)?)
            }
            CorpusShape::Annulus12 => {
                let outer: DiscreteCurve<f64> = circle(2.0, n)?;
                let inner =
                    DiscreteCurve::new_hole(circle::<f64>(1.0, n)?.reversed().into_nodes())?;
                let skel = Skeleton::annulus(&outer, &inner);
                Ok((Region::new(vec![outer, inner])?, skel))
            }
        }
    }
}

impl FromStr for CorpusShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorpusShape::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown shape {s:?}")))
    }
}

/// Region and skeleton of a convex curve symmetric about both axes.
pub fn symmetric_shape(curve: DiscreteCurve<f64>) -> Result<(Region<f64>, Skeleton<f64>)> {
    let c = SymmetricConvexCurve::with_tolerance(curve, 1e-9)?;
    let skel = symmetric_skeleton(&c)?;
    Ok((Region::from(c.into_base()), skel))
}

/// Scalar test function with its gradient.
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    pub g: fn(Vec2<f64>) -> f64,
    pub grad: fn(Vec2<f64>) -> Vec2<f64>,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [
        TestFunction {
            name: "one",
            g: |_| 1.0,
            grad: |_| Vec2 { x: 0.0, y: 0.0 },
        },
        TestFunction {
            name: "x",
            g: |p| p.x,
            grad: |_| Vec2 { x: 1.0, y: 0.0 },
        },
        TestFunction {
            name: "x2+2",
            g: |p| p.x * p.x + 2.0,
            grad: |p| Vec2 {
                x: 2.0 * p.x,
                y: 0.0,
            },
        },
        TestFunction {
            name: "exp(x/4)",
            g: |p| (p.x / 4.0).exp(),
            grad: |p| Vec2 {
                x: 0.25 * (p.x / 4.0).exp(),
                y: 0.0,
            },
        },
    ];

    pub fn by_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::Config(format!("unknown test function {name:?}")))
    }
}

/// Endpoint speed of the ellipse `(a, b)` skeleton under the flow `H = h/2`:
/// `ρ²/2 · h''` with `ρ = b²/a` and `h'' = -3a(a² - b²)/b⁶` at the vertex.
pub fn ellipse_endpoint_speed(a: f64, b: f64) -> f64 {
    endpoint_speed(b * b / a, -3.0 * a * (a * a - b * b) / b.powi(6))
}

/// Rate of change of `x*` after one explicit step of the flow `H = h/2`.
pub fn endpoint_speed_finite_difference(curve: &SymmetricConvexCurve<f64>, dt: f64) -> Result<f64> {
    let moved = normal_flow(curve.base(), dt, |_, k| 0.5 * k);
    let next = SymmetricConvexCurve::with_tolerance(moved, 1e-9)?;
    Ok((skeleton_half_length(&next)? - skeleton_half_length(curve)?) / dt)
}

/// Normal speed of the mid-circle of the annulus `A(inner, outer)` when the
/// boundary moves inward at half its curvature.
pub fn annulus_skeleton_speed(inner: f64, outer: f64) -> Result<f64> {
    let mid = 0.5 * (inner + outer);
    let v = skeleton_motion(
        Vec2 { x: outer, y: 0.0 },
        Vec2 { x: inner, y: 0.0 },
        Vec2 { x: mid, y: 0.0 },
        BoundarySpeed {
            h1: 0.5 / outer,
            grad_h1: Vec2 { x: 0.0, y: 0.0 },
            h2: -0.5 / inner,
        },
        std::f64::consts::FRAC_PI_2,
    )?;
    Ok(v.normal.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in CorpusShape::ALL {
            assert_eq!(s.name().parse::<CorpusShape>().unwrap(), s);
        }
        assert!("square".parse::<CorpusShape>().is_err());
        assert_eq!(TestFunction::by_name("x2+2").unwrap().name, "x2+2");
    }

    #[test]
    fn ellipse_endpoint_closed_form() {
        assert!((ellipse_endpoint_speed(2.0, 1.0) + 2.25).abs() < 1e-12);
        // Radii move at -1/(2r) outside and +1/(2r) inside.
        let exact = 0.5 * (-0.5 / 2.0 - 0.5 / 1.0);
        assert!((annulus_skeleton_speed(1.0, 2.0).unwrap() - exact).abs() < 1e-15);
    }

    #[test]
    fn built_areas() {
        for s in CorpusShape::ALL {
            let (r, _) = s.build(1024).unwrap();
            assert!((r.area() / s.area() - 1.0).abs() < 1e-4, "{}", s.name());
        }
    }
}
