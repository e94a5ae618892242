//! Planar dual: a Brownian particle coupled to a convex domain symmetric
//! about both axes, whose horizontal skeleton is tracked as it evolves.

use crate::error::{Error, Result};
use crate::geometry::{
    area_left_of, check_convex, foot_point, level_curvature_at_foot, medial_axis, nearest_point,
    skeleton_half_length, DiscreteCurve, SkeletonSegment, SymmetricConvexCurve, Vec2,
};
use crate::scalar::{sign0, Real};
use crate::sde::{occupation_local_time_step, GaussianSource, PathRecord, StopReason, TimeGrid};
use crate::stats::channels;

/// Symmetry tolerance after a step, relative to the domain size.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Offset of a repaired particle from the boundary.
const REPAIR_OFFSET: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarParams<T> {
    /// Local-time bandwidth.
    pub beta: T,
    /// Steps between recomputations of the `θ` profile.
    pub k_skel: usize,
    /// Samples in the `θ` profile.
    pub profile_points: usize,
}

impl<T: Real> PlanarParams<T> {
    pub fn new(beta: T) -> Self {
        Self {
            beta,
            k_skel: 10,
            profile_points: 129,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarDualState<T> {
    pub x: Vec2<T>,
    pub domain: SymmetricConvexCurve<T>,
    pub skeleton: SkeletonSegment<T>,
    /// Accumulated skeleton local time of `X`.
    pub l: T,
    /// Containment repairs so far.
    pub repairs: usize,
    /// Largest distance outside the domain seen before a repair.
    pub max_violation: T,
    since_profile: usize,
}

impl<T: Real> PlanarDualState<T> {
    pub fn new(
        x: Vec2<T>,
        domain: SymmetricConvexCurve<T>,
        params: &PlanarParams<T>,
    ) -> Result<Self> {
        if !domain.base().contains(x) {
            return Err(Error::Config(format!(
                "initial particle ({}, {}) lies outside the domain",
                x.x, x.y
            )));
        }
        let skeleton = medial_axis(&domain, params.profile_points)?;
        Ok(Self {
            x,
            domain,
            skeleton,
            l: T::zero(),
            repairs: 0,
            max_violation: T::zero(),
            since_profile: 0,
        })
    }

    pub fn area(&self) -> T {
        self.domain.base().signed_area()
    }

    /// Fraction of the area left of `X¹`; uniform when `X` is uniform in the domain.
    pub fn area_fraction(&self) -> T {
        area_left_of(self.domain.base(), self.x.x) / self.area()
    }
}

/// Scalars driving one step, as evaluated at the start of the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarStep<T> {
    pub theta: T,
    pub dw: T,
    pub dl: T,
    /// Curvature of the level line through `X`.
    pub h_x: T,
    /// Distance from `X` to the boundary.
    pub rho_plus: T,
    /// Inward normal at the foot point of `X`.
    pub normal: Vec2<T>,
    pub repaired: bool,
}

/// `θ(X)`: read at the point where the normal line through the foot of `X`
/// meets the horizontal axis, and 0 when that point is off the skeleton.
pub fn theta_at<T: Real>(skeleton: &SkeletonSegment<T>, foot: Vec2<T>, normal: Vec2<T>) -> T {
    if normal.y.abs() <= T::epsilon() {
        return T::zero();
    }
    let xi = foot.x - foot.y / normal.y * normal.x;
    if xi.abs() < skeleton.half_length {
        skeleton.theta(xi)
    } else {
        T::zero()
    }
}

/// Local geometry of the particle: foot, `θ`, level curvature.
pub fn particle_geometry<T: Real>(
    x: Vec2<T>,
    domain: &SymmetricConvexCurve<T>,
    skeleton: &SkeletonSegment<T>,
) -> std::result::Result<(T, T, T, Vec2<T>), StopReason> {
    let f = foot_point(x, domain.base()).map_err(|_| StopReason::FocalCrossing)?;
    let h_x = level_curvature_at_foot(domain.base(), &f).map_err(|_| StopReason::FocalCrossing)?;
    Ok((
        theta_at(skeleton, f.foot, f.inward_normal),
        h_x,
        f.distance,
        f.inward_normal,
    ))
}

/// Moves every node inward by `shift + ½κ dt`, splitting the curvature part into stable substeps.
fn move_nodes<T: Real>(curve: &DiscreteCurve<T>, shift: T, dt: T) -> DiscreteCurve<T> {
    let n = curve.len();
    let mut nodes: Vec<Vec2<T>> = (0..n)
        .map(|i| curve.nodes()[i] + curve.inward_normal(i) * shift)
        .collect();
    if dt > T::zero() {
        let ds_min = (0..n)
            .map(|i| nodes[i].dist(nodes[(i + 1) % n]))
            .fold(T::infinity(), T::min);
        let sub_max = T::half() * ds_min * ds_min;
        let subs = (dt / sub_max).ceil().to_usize().unwrap_or(1).max(1);
        let h = dt / T::from_usize_lossy(subs);
        for _ in 0..subs {
            let c = DiscreteCurve::from_nodes_unchecked(nodes);
            nodes = (0..n)
                .map(|i| c.nodes()[i] + c.inward_normal(i) * (T::half() * c.curvature_at(i) * h))
                .collect();
        }
    }
    DiscreteCurve::from_nodes_unchecked(nodes)
}

/// Resamples at equal arc length from the positive x-axis and re-validates shape.
fn reshape<T: Real>(
    curve: DiscreteCurve<T>,
) -> std::result::Result<SymmetricConvexCurve<T>, StopReason> {
    let n = curve.len();
    let start = curve
        .positive_x_axis_crossing()
        .ok_or(StopReason::ConvexityBreakdown)?;
    let curve = curve.resample_equal_arclength(n, start);
    check_convex(&curve).map_err(|_| StopReason::ConvexityBreakdown)?;
    SymmetricConvexCurve::with_tolerance(curve, T::lit(SYMMETRY_TOLERANCE))
        .map_err(|_| StopReason::SymmetryLoss)
}

fn refresh_skeleton<T: Real>(
    domain: &SymmetricConvexCurve<T>,
    old: &SkeletonSegment<T>,
    recompute: bool,
    points: usize,
) -> std::result::Result<SkeletonSegment<T>, StopReason> {
    if recompute {
        return medial_axis(domain, points).map_err(|_| StopReason::SkeletonFlip);
    }
    let x_star = skeleton_half_length(domain).map_err(|_| StopReason::SkeletonFlip)?;
    Ok(old.rescaled(x_star))
}

/// One step of the planar dual driven by the particle increment `dX`.
///
/// Every node moves inward by `-dW + (½h(y) - h(X))dt - 2 sinθ(X) ΔL`.
pub fn planar_step<T: Real>(
    state: &mut PlanarDualState<T>,
    dx: Vec2<T>,
    dt: T,
    params: &PlanarParams<T>,
) -> std::result::Result<PlanarStep<T>, StopReason> {
    let x = state.x;
    let (theta, h_x, rho_plus, normal) = particle_geometry(x, &state.domain, &state.skeleton)?;
    let (s, c) = theta.sin_cos();
    let dw = sign0(x.x) * c * dx.x + sign0(x.y) * s * dx.y;
    let dl = if x.x.abs() < state.skeleton.half_length {
        occupation_local_time_step(x.y, T::zero(), dx.y * dx.y, params.beta)
    } else {
        T::zero()
    };
    let shift = -dw - h_x * dt - T::two() * s * dl;
    let moved = move_nodes(state.domain.base(), shift, dt);
    let domain = reshape(moved)?;
    state.since_profile += 1;
    let recompute = state.since_profile >= params.k_skel.max(1);
    let skeleton = refresh_skeleton(&domain, &state.skeleton, recompute, params.profile_points)?;
    if recompute {
        state.since_profile = 0;
    }
    let mut nx = x + dx;
    let mut repaired = false;
    if !domain.base().contains(nx) {
        let f = nearest_point(nx, domain.base());
        state.max_violation = state.max_violation.max(f.distance);
        nx = f.foot - f.inward_normal * T::lit(REPAIR_OFFSET);
        if !domain.base().contains(nx) {
            nx = f.foot + domain.base().inward_normal(f.node_index) * T::lit(REPAIR_OFFSET);
        }
        state.repairs += 1;
        repaired = true;
    }
    state.x = nx;
    state.domain = domain;
    state.skeleton = skeleton;
    state.l = state.l + dl;
    Ok(PlanarStep {
        theta,
        dw,
        dl,
        h_x,
        rho_plus,
        normal,
        repaired,
    })
}

/// One step of the deterministic flow with inward normal speed `h/2`.
pub fn deterministic_flow_step<T: Real>(
    domain: &SymmetricConvexCurve<T>,
    dt: T,
) -> std::result::Result<SymmetricConvexCurve<T>, StopReason> {
    reshape(move_nodes(domain.base(), T::zero(), dt))
}

/// Uniform point in the domain by rejection from the bounding box.
pub fn sample_uniform_planar<T: Real>(
    domain: &DiscreteCurve<T>,
    src: &mut GaussianSource,
) -> Result<Vec2<T>> {
    Ok(sample_uniform_planar_counted(domain, src)?.0)
}

/// As [`sample_uniform_planar`], also returning the number of proposals used.
pub fn sample_uniform_planar_counted<T: Real>(
    domain: &DiscreteCurve<T>,
    src: &mut GaussianSource,
) -> Result<(Vec2<T>, usize)> {
    let (lo, hi) = domain.bounding_box();
    for k in 1..=10_000 {
        let p = Vec2::new(
            lo.x + (hi.x - lo.x) * src.uniform::<T>(),
            lo.y + (hi.y - lo.y) * src.uniform::<T>(),
        );
        if domain.contains(p) {
            return Ok((p, k));
        }
    }
    Err(Error::Geometry(
        "10000 consecutive rejections; domain is degenerate".into(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRun<T> {
    pub state: PlanarDualState<T>,
    pub stop: Option<(StopReason, usize)>,
    pub steps: usize,
}

impl<T> PlanarRun<T> {
    /// More than one containment repair per thousand steps.
    pub fn repair_warning(&self) -> bool {
        self.state.repairs * 1000 > self.steps.max(1)
    }
}

/// Runs the planar dual; `observe(step, before, info, after)` sees every accepted step.
pub fn simulate_planar<T: Real>(
    mut state: PlanarDualState<T>,
    grid: &TimeGrid<T>,
    src: &mut GaussianSource,
    params: &PlanarParams<T>,
    mut observe: impl FnMut(usize, Vec2<T>, &PlanarStep<T>, &PlanarDualState<T>),
) -> PlanarRun<T> {
    let dt = grid.dt();
    let sq = dt.sqrt();
    for i in 0..grid.n_steps() {
        let dx = Vec2::new(src.increment(sq), src.increment(sq));
        let before = state.x;
        match planar_step(&mut state, dx, dt, params) {
            Ok(info) => observe(i, before, &info, &state),
            Err(reason) => {
                return PlanarRun {
                    state,
                    stop: Some((reason, i)),
                    steps: i,
                }
            }
        }
    }
    let steps = grid.n_steps();
    PlanarRun {
        state,
        stop: None,
        steps,
    }
}

/// Brownian particle in a frozen domain, recording the channels read by
/// [`tanaka_residual`](crate::stats::tanaka_residual). The record ends at the
/// last grid node before the particle leaves the domain.
pub fn frozen_tanaka_path<T: Real>(
    domain: &SymmetricConvexCurve<T>,
    skeleton: &SkeletonSegment<T>,
    x0: Vec2<T>,
    grid: &TimeGrid<T>,
    src: &mut GaussianSource,
    beta: T,
) -> Result<PathRecord<T>> {
    let dt = grid.dt();
    let sq = dt.sqrt();
    let names = [
        channels::RHO_PLUS,
        channels::X1,
        channels::X2,
        channels::N1,
        channels::N2,
        channels::H,
        channels::SIN_THETA,
        channels::LOCAL_TIME,
    ];
    let mut cols: Vec<Vec<T>> = vec![Vec::with_capacity(grid.n_nodes()); names.len()];
    let (mut x, mut l) = (x0, T::zero());
    for _ in 0..=grid.n_steps() {
        let Ok((theta, h, rho, n)) = particle_geometry(x, domain, skeleton) else {
            break;
        };
        for (col, v) in cols
            .iter_mut()
            .zip([rho, x.x, x.y, n.x, n.y, h, theta.sin(), l])
        {
            col.push(v);
        }
        let dx = Vec2::new(src.increment(sq), src.increment(sq));
        if x.x.abs() < skeleton.half_length {
            l = l + occupation_local_time_step(x.y, T::zero(), dx.y * dx.y, beta);
        }
        x = x + dx;
    }
    let kept = cols[0].len();
    if kept == 0 {
        return Err(Error::Config(
            "initial particle lies outside the frozen domain".into(),
        ));
    }
    let sub = TimeGrid::new(
        dt * T::from_usize_lossy((kept - 1).max(1)),
        (kept - 1).max(1),
    )?;
    let mut rec = PathRecord::new(sub);
    if kept == 1 {
        for col in &mut cols {
            col.push(col[0]);
        }
    }
    for (name, col) in names.into_iter().zip(cols) {
        rec.add_channel(name, col)?;
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ellipse, level_curvature};
    use crate::sde::NoiseStream;

    fn ellipse_state(x: Vec2<f64>, n: usize) -> PlanarDualState<f64> {
        let d = SymmetricConvexCurve::new(ellipse(2.0, 1.0, n).unwrap()).unwrap();
        PlanarDualState::new(x, d, &PlanarParams::new(1e-2)).unwrap()
    }

    // With X = (1.8, 0) the foot is the vertex (2, 0), θ = 0 and the level
    // curvature is 2 / (1 - 0.2·2) = 10/3; the co-vertex has curvature 1/4.
    #[test]
    fn covertex_displacement() {
        let n = 1024;
        let base = ellipse_state(Vec2::new(1.8, 0.0), n);
        let (theta, h_x, _, _) = particle_geometry(base.x, &base.domain, &base.skeleton).unwrap();
        assert_eq!(theta, 0.0);
        assert!((h_x - 10.0 / 3.0).abs() < 1e-3, "{h_x}");
        let (d1, dt) = (1e-3, 1e-6);
        let mut st = base.clone();
        let info = planar_step(&mut st, Vec2::new(d1, 0.0), dt, &PlanarParams::new(1e-2)).unwrap();
        assert_eq!(info.dw, d1);
        assert_eq!(info.dl, 0.0);
        let top = st.domain.vertex_y();
        let expect = 1.0 + d1 - (0.125 - h_x) * dt;
        assert!((top - expect).abs() < 1e-8, "{top} vs {expect}");
    }

    #[test]
    fn zero_noise_step_is_curvature_driven() {
        let mut st = ellipse_state(Vec2::new(0.3, 0.2), 1024);
        let before = st.domain.base().clone();
        let h_x = level_curvature(st.x, &before).unwrap();
        let dt = 1e-5;
        planar_step(&mut st, Vec2::zero(), dt, &PlanarParams::new(1e-2)).unwrap();
        // Vertex (2,0): curvature 2. Co-vertex (0,1): curvature 1/4.
        let v = st.domain.vertex_x();
        assert!((v - (2.0 - (1.0 - h_x) * dt)).abs() < 1e-9, "{v}");
        let t = st.domain.vertex_y();
        assert!((t - (1.0 - (0.125 - h_x) * dt)).abs() < 1e-9, "{t}");
    }

    #[test]
    fn symmetry_preserved_under_noise() {
        let mut st = ellipse_state(Vec2::new(0.4, -0.3), 256);
        let params = PlanarParams::new(1e-2f64.sqrt() * 0.1);
        let mut src = NoiseStream::new(3, 0, 2).source();
        for _ in 0..200 {
            let dx = Vec2::new(src.increment(1e-2), src.increment(1e-2));
            planar_step(&mut st, dx, 1e-4, &params).unwrap();
            assert!(st.domain.symmetry_defect() < 1e-9);
        }
    }

    #[test]
    fn deterministic_flow_keeps_convexity_and_shrinks_skeleton() {
        let mut d = SymmetricConvexCurve::new(ellipse(2.0, 1.0, 128).unwrap()).unwrap();
        let mut x_star = skeleton_half_length(&d).unwrap();
        for _ in 0..200 {
            d = deterministic_flow_step(&d, 1e-3).unwrap();
            let next = skeleton_half_length(&d).unwrap();
            assert!(next <= x_star + 1e-12);
            x_star = next;
        }
    }

    #[test]
    fn theta_extension() {
        let st = ellipse_state(Vec2::new(0.0, 0.5), 1024);
        let (theta, _, _, _) = particle_geometry(st.x, &st.domain, &st.skeleton).unwrap();
        assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        let near_vertex = ellipse_state(Vec2::new(1.9, 0.01), 1024);
        let (theta, _, _, _) =
            particle_geometry(near_vertex.x, &near_vertex.domain, &near_vertex.skeleton).unwrap();
        assert!(theta > 0.0 && theta < 0.01, "{theta}");
        let sk = &st.skeleton;
        assert_eq!(theta_at(sk, Vec2::new(2.0, 0.0), Vec2::new(-1.0, 0.0)), 0.0);
        let n = Vec2::new(-0.99, -0.14).normalized();
        assert_eq!(theta_at(sk, Vec2::new(1.99, 0.05), n), 0.0);
    }

    #[test]
    fn uniform_sampling_acceptance_and_mean() {
        let e = ellipse::<f64>(2.0, 1.0, 1024).unwrap();
        let mut src = NoiseStream::new(4, 0, 2).source();
        let n = 100_000;
        let (mut tries, mut sx, mut sy) = (0usize, 0.0, 0.0);
        for _ in 0..n {
            let (p, k) = sample_uniform_planar_counted(&e, &mut src).unwrap();
            tries += k;
            sx += p.x;
            sy += p.y;
        }
        let acc = n as f64 / tries as f64;
        let exact = e.signed_area() / 8.0;
        assert!((acc - exact).abs() < 0.01, "{acc}");
        assert!((acc - std::f64::consts::FRAC_PI_4).abs() < 0.01);
        // Var(X¹) = a²/4 = 1, Var(X²) = b²/4 = 1/4 for the uniform law on the ellipse.
        assert!((sx / n as f64).abs() < 4.0 * (1.0 / n as f64).sqrt());
        assert!((sy / n as f64).abs() < 4.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn square_like_acceptance_is_near_one() {
        // Superellipse |x|^8 + |y|^8 = 1 is convex and close to the square.
        let m = 256;
        let nodes: Vec<Vec2<f64>> = (0..4 * m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / (4 * m) as f64;
                let (s, c) = t.sin_cos();
                Vec2::new(
                    c.signum() * c.abs().powf(0.25),
                    s.signum() * s.abs().powf(0.25),
                )
            })
            .collect();
        let c = DiscreteCurve::new(nodes).unwrap();
        let mut src = NoiseStream::new(5, 0, 2).source();
        let tries: usize = (0..10_000)
            .map(|_| sample_uniform_planar_counted(&c, &mut src).unwrap().1)
            .sum();
        assert!(10_000.0 / tries as f64 > 0.9);
    }

    #[test]
    fn degenerate_domain_rejects() {
        let nodes: Vec<Vec2<f64>> = (0..16)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                let (u, v) = (t.cos(), 1e-9 * t.sin());
                Vec2::new(u - v, u + v)
            })
            .collect();
        let c = DiscreteCurve::new(nodes).unwrap();
        let mut src = NoiseStream::new(6, 0, 2).source();
        assert!(matches!(
            sample_uniform_planar(&c, &mut src),
            Err(Error::Geometry(_))
        ));
    }
}
