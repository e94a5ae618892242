use super::distance::Region;
use super::medial::Skeleton;
use super::point::Vec2;
use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeOptions<T> {
    /// Coarsest scale at which the cut locus along each ray is searched.
    pub ray_step: T,
    /// Gauss–Legendre order per panel along each ray.
    pub order: usize,
    pub panels: usize,
}

impl<T: Real> Default for TubeOptions<T> {
    fn default() -> Self {
        Self {
            ray_step: T::lit(1e-4),
            order: 8,
            panels: 4,
        }
    }
}

/// Inward normal ray from one boundary node, cut where it meets the skeleton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray<T> {
    pub origin: Vec2<T>,
    pub normal: Vec2<T>,
    pub curvature: T,
    pub weight: T,
    pub tau: T,
}

/// Integration over a region in normal coordinates: each boundary node
/// carries a ray `y + r N(y)`, `0 <= r < τ(y)`, with area element
/// `(1 - r κ(y)) dr dμ̲(y)`.
#[derive(Debug, Clone)]
pub struct TubeQuadrature<T> {
    rays: Vec<Ray<T>>,
    rule: CompositeRule,
}

impl<T: Real> TubeQuadrature<T> {
    pub fn new(region: &Region<T>, opts: TubeOptions<T>) -> Result<Self> {
        let (lo, hi) = region.components()[0].bounding_box();
        let scale = (hi - lo).norm();
        if !(opts.ray_step > scale * T::lit(1e-12)) {
            return Err(Error::Resolution(format!(
                "ray step {} is too small",
                opts.ray_step
            )));
        }
        let mut rays = Vec::new();
        for c in region.components() {
            for i in 0..c.len() {
                let origin = c.nodes()[i];
                let normal = c.inward_normal(i);
                let weight = c.node_weight(i);
                let tau = cut_distance(region, origin, normal, weight, opts.ray_step, scale)?;
                rays.push(Ray {
                    origin,
                    normal,
                    curvature: c.curvature_at(i),
                    weight,
                    tau,
                });
            }
        }
        Ok(Self {
            rays,
            rule: CompositeRule::new(opts.order, opts.panels),
        })
    }

    pub fn rays(&self) -> &[Ray<T>] {
        &self.rays
    }

    /// `∫_D g dμ`.
    pub fn integrate(&self, g: impl Fn(Vec2<T>) -> T) -> T {
        self.rays.iter().fold(T::zero(), |s, ray| {
            s + ray.weight
                * self.rule.integrate(T::zero(), ray.tau, |r| {
                    g(ray.origin + ray.normal * r) * (T::one() - r * ray.curvature)
                })
        })
    }

    /// `∫_∂D g dμ̲`.
    pub fn boundary_integral(&self, g: impl Fn(Vec2<T>) -> T) -> T {
        self.rays
            .iter()
            .fold(T::zero(), |s, ray| s + ray.weight * g(ray.origin))
    }

    /// Both sides of `∫_D g h dμ = ∫_∂D g dμ̲ - 2 ∫_S g sin θ dμ̲ + ∫_D <∇g, N> dμ`,
    /// with `h` the level-set curvature and `N` the normal field extended
    /// along the rays.
    pub fn stokes(
        &self,
        skeleton: &Skeleton<T>,
        g: impl Fn(Vec2<T>) -> T,
        grad: impl Fn(Vec2<T>) -> Vec2<T>,
    ) -> StokesResidual<T> {
        // h (1 - r κ) = κ along a ray, so the left side needs no Jacobian.
        let lhs = self.rays.iter().fold(T::zero(), |s, ray| {
            s + ray.weight
                * ray.curvature
                * self
                    .rule
                    .integrate(T::zero(), ray.tau, |r| g(ray.origin + ray.normal * r))
        });
        let flux = self.rays.iter().fold(T::zero(), |s, ray| {
            s + ray.weight
                * self.rule.integrate(T::zero(), ray.tau, |r| {
                    grad(ray.origin + ray.normal * r).dot(ray.normal)
                        * (T::one() - r * ray.curvature)
                })
        });
        let rhs = self.boundary_integral(&g) - T::two() * skeleton.weighted_integral(&g) + flux;
        StokesResidual {
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / T::one().max(lhs.abs()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesResidual<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

/// Distance along the ray at which the nearest boundary point stops being
/// the ray's origin (moves by more than two node spacings).
fn cut_distance<T: Real>(
    region: &Region<T>,
    origin: Vec2<T>,
    normal: Vec2<T>,
    spacing: T,
    ray_step: T,
    scale: T,
) -> Result<T> {
    let consistent = |r: T| {
        let q = origin + normal * r;
        region.contains(q) && region.nearest(q).foot.dist(origin) <= T::two() * spacing
    };
    if !consistent(ray_step) {
        return Err(Error::Resolution(format!(
            "ray from ({}, {}) is cut before the first step {}",
            origin.x, origin.y, ray_step
        )));
    }
    let mut lo = ray_step;
    let mut hi = ray_step * T::two();
    while consistent(hi) {
        lo = hi;
        hi = hi * T::two();
        if hi > scale * T::lit(4.0) {
            return Err(Error::Resolution("ray never meets the cut locus".into()));
        }
    }
    let tol = T::epsilon() * T::lit(64.0) * scale;
    while hi - lo > tol {
        let mid = (lo + hi) * T::half();
        if consistent(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::half())
}

/// `∫_D g dμ` by normal-ray quadrature.
pub fn tube_integrate<T: Real>(
    region: &Region<T>,
    g: impl Fn(Vec2<T>) -> T,
    opts: TubeOptions<T>,
) -> Result<T> {
    Ok(TubeQuadrature::new(region, opts)?.integrate(g))
}

/// Residual of the integration-by-parts identity relating boundary curvature,
/// the skeleton and the normal derivative of `g`.
pub fn stokes_identity_residual<T: Real>(
    region: &Region<T>,
    skeleton: &Skeleton<T>,
    g: impl Fn(Vec2<T>) -> T,
    grad: impl Fn(Vec2<T>) -> Vec2<T>,
    opts: TubeOptions<T>,
) -> Result<StokesResidual<T>> {
    Ok(TubeQuadrature::new(region, opts)?.stokes(skeleton, g, grad))
}
