//! Radial duals on rotationally symmetric manifolds `dr² + f(r)² dΘ²`.
//!
//! The disk dual couples the radial part `ρ` of a Brownian particle with a
//! ball of radius `R`; the annulus dual (two dimensions only) couples it with
//! `A(R⁻, R⁺)` and pushes both radii apart by the local time of `ρ` at the
//! mid circle `R⁰`.

use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;
use crate::scalar::{acos_clamped, sign_pos, Real};
use crate::sde::{occupation_local_time_step, GaussianSource, StopReason, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Euclidean,
    Sphere,
    Hyperbolic,
    Custom,
}

/// Warping function `f` of the metric, with its derivative.
#[derive(Debug, Clone, Copy)]
pub struct RadialProfile<T> {
    kind: ProfileKind,
    dimension: usize,
    custom: Option<(fn(T) -> T, fn(T) -> T)>,
}

impl<T: Real> RadialProfile<T> {
    fn model(kind: ProfileKind, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Config(format!(
                "profile dimension must be >= 2, got {dimension}"
            )));
        }
        Ok(Self {
            kind,
            dimension,
            custom: None,
        })
    }

    pub fn euclidean(dimension: usize) -> Result<Self> {
        Self::model(ProfileKind::Euclidean, dimension)
    }

    pub fn sphere(dimension: usize) -> Result<Self> {
        Self::model(ProfileKind::Sphere, dimension)
    }

    pub fn hyperbolic(dimension: usize) -> Result<Self> {
        Self::model(ProfileKind::Hyperbolic, dimension)
    }

    /// User supplied `f` and `f'`; densities and inverses fall back to quadrature.
    pub fn custom(dimension: usize, f: fn(T) -> T, df: fn(T) -> T) -> Result<Self> {
        let mut p = Self::model(ProfileKind::Custom, dimension)?;
        p.custom = Some((f, df));
        Ok(p)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn f(&self, r: T) -> T {
        match self.kind {
            ProfileKind::Euclidean => r,
            ProfileKind::Sphere => r.sin(),
            ProfileKind::Hyperbolic => r.sinh(),
            ProfileKind::Custom => (self.custom.expect("custom profile").0)(r),
        }
    }

    pub fn df(&self, r: T) -> T {
        match self.kind {
            ProfileKind::Euclidean => T::one(),
            ProfileKind::Sphere => r.cos(),
            ProfileKind::Hyperbolic => r.cosh(),
            ProfileKind::Custom => (self.custom.expect("custom profile").1)(r),
        }
    }

    /// Radial drift `(d-1) f'/f`; also the mean curvature of the sphere of radius `r`.
    pub fn b(&self, r: T) -> T {
        T::from_usize_lossy(self.dimension - 1) * self.df(r) / self.f(r)
    }

    pub fn r_max(&self) -> T {
        match self.kind {
            ProfileKind::Sphere => T::PI(),
            _ => T::infinity(),
        }
    }

    /// Area of the unit sphere `S^{d-1}`.
    pub fn omega(&self) -> T {
        let d = self.dimension as f64;
        T::lit(2.0 * std::f64::consts::PI.powf(d / 2.0) / libm::tgamma(d / 2.0))
    }

    /// Radial density `f^{d-1}`.
    pub fn density(&self, r: T) -> T {
        self.f(r).powi(self.dimension as i32 - 1)
    }

    /// `∫_lo^hi f^{d-1} dr`.
    pub fn mass(&self, lo: T, hi: T) -> T {
        match (self.kind, self.dimension) {
            (ProfileKind::Euclidean, d) => {
                let d_i = d as i32;
                (hi.powi(d_i) - lo.powi(d_i)) / T::from_usize_lossy(d)
            }
            (ProfileKind::Sphere, 2) => lo.cos() - hi.cos(),
            (ProfileKind::Hyperbolic, 2) => hi.cosh() - lo.cosh(),
            _ => CompositeRule::new(8, 64).integrate(lo, hi, |r| self.density(r)),
        }
    }

    /// `∫_lo^hi k f^{d-1} dr`.
    pub fn weighted_mass(&self, lo: T, hi: T, k: impl Fn(T) -> T) -> T {
        CompositeRule::new(8, 64).integrate(lo, hi, |r| k(r) * self.density(r))
    }

    fn closed_inverse(&self, lo: T, hi: T, u: T) -> Option<T> {
        match (self.kind, self.dimension) {
            (ProfileKind::Euclidean, d) => {
                let d_i = d as i32;
                let lo_d = lo.powi(d_i);
                Some((lo_d + u * (hi.powi(d_i) - lo_d)).powf(T::one() / T::from_usize_lossy(d)))
            }
            (ProfileKind::Sphere, 2) => Some(acos_clamped(lo.cos() - u * (lo.cos() - hi.cos()))),
            (ProfileKind::Hyperbolic, 2) => Some((lo.cosh() + u * (hi.cosh() - lo.cosh())).acosh()),
            _ => None,
        }
    }
}

/// Inverse-CDF sample of the density `f^{d-1}` on `(r_lo, r_hi)`.
pub fn radial_density_sample<T: Real>(profile: &RadialProfile<T>, r_lo: T, r_hi: T, u: T) -> T {
    let u = u.max(T::zero()).min(T::one());
    if let Some(r) = profile.closed_inverse(r_lo, r_hi, u) {
        return r.max(r_lo).min(r_hi);
    }
    let total = profile.mass(r_lo, r_hi);
    let target = u * total;
    let (mut a, mut b) = (r_lo, r_hi);
    let tol = T::lit(1e-12).max(T::epsilon() * r_hi.abs());
    while b - a > tol {
        let m = (a + b) * T::half();
        if profile.mass(r_lo, m) < target {
            a = m;
        } else {
            b = m;
        }
    }
    (a + b) * T::half()
}

/// Conditional CDF of the radius given the domain: `∫_lo^r f^{d-1} / ∫_lo^hi f^{d-1}`.
pub fn radial_cdf<T: Real>(profile: &RadialProfile<T>, r_lo: T, r_hi: T, r: T) -> T {
    profile.mass(r_lo, r) / profile.mass(r_lo, r_hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskDualState<T> {
    pub rho: T,
    pub radius: T,
}

impl<T: Real> DiskDualState<T> {
    pub fn new(rho: T, radius: T) -> Result<Self> {
        if !(rho > T::zero() && rho < radius) {
            return Err(Error::Config(format!(
                "disk requires 0 < rho0 < radius0, got rho0 = {rho}, radius0 = {radius}"
            )));
        }
        Ok(Self { rho, radius })
    }
}

/// One Euler step of the disk dual; both radii share the increment `dβ`.
pub fn disk_step<T: Real>(
    state: DiskDualState<T>,
    profile: &RadialProfile<T>,
    dbeta: T,
    dt: T,
) -> std::result::Result<DiskDualState<T>, StopReason> {
    let b_rho = profile.b(state.rho);
    // An Euler step can jump over the pole; the radius of the particle is reflected there.
    let rho = (state.rho + dbeta + T::half() * b_rho * dt).abs();
    let radius = state.radius + dbeta + (-T::half() * profile.b(state.radius) + b_rho) * dt;
    let r_max = profile.r_max();
    if !(rho > T::zero()) || !(radius > T::zero()) || !(radius < r_max) {
        return Err(StopReason::Explosion);
    }
    if rho >= radius {
        return Err(StopReason::Ordering);
    }
    Ok(DiskDualState { rho, radius })
}

/// One step of the disk dual with `ρ` advanced as the norm of a `d`-dimensional
/// Gaussian step: `along` is its component along the current radius and
/// `transverse_sq` the squared norm of the other `d - 1` components.
///
/// The radius uses the realized compensator `ρ' - ρ - along` in place of
/// `½b(ρ)dt`, which stays bounded by the step size near the pole where the
/// Euler drift `b(ρ)dt` does not.
pub fn disk_step_polar<T: Real>(
    state: DiskDualState<T>,
    profile: &RadialProfile<T>,
    along: T,
    transverse_sq: T,
    dt: T,
) -> std::result::Result<DiskDualState<T>, StopReason> {
    let d1 = T::from_usize_lossy(profile.dimension() - 1);
    let curvature = profile.b(state.rho) - d1 / state.rho;
    let flat = ((state.rho + along) * (state.rho + along) + transverse_sq).sqrt();
    let rho = flat + T::half() * curvature * dt;
    let radius =
        state.radius + along - T::half() * profile.b(state.radius) * dt + T::two() * (rho - state.rho - along);
    if !(rho > T::zero()) || !(radius > T::zero()) || !(radius < profile.r_max()) {
        return Err(StopReason::Explosion);
    }
    if rho >= radius {
        return Err(StopReason::Ordering);
    }
    Ok(DiskDualState { rho, radius })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusDualState<T> {
    pub rho: T,
    pub r_minus: T,
    pub r_plus: T,
    /// Accumulated local time of `ρ` at `R⁰`.
    pub l: T,
}

impl<T: Real> AnnulusDualState<T> {
    pub fn new(rho: T, r_minus: T, r_plus: T) -> Result<Self> {
        if !(r_minus > T::zero() && r_minus <= rho && rho <= r_plus && r_minus < r_plus) {
            return Err(Error::Config(format!(
                "annulus requires 0 < r_minus <= rho0 <= r_plus, got {r_minus}, {rho}, {r_plus}"
            )));
        }
        Ok(Self {
            rho,
            r_minus,
            r_plus,
            l: T::zero(),
        })
    }

    /// Skeleton radius `R⁰ = (R⁻ + R⁺)/2`.
    pub fn r0(&self) -> T {
        (self.r_minus + self.r_plus) * T::half()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusParams<T> {
    /// Local-time bandwidth.
    pub beta: T,
    pub collar: T,
}

/// Result of a successful annulus step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusStep<T> {
    pub state: AnnulusDualState<T>,
    /// `s = sign(ρ - R⁰)` with `sign(0) = +1`.
    pub s: T,
    /// `dW = s dβ`.
    pub dw: T,
    pub dl: T,
}

pub fn annulus_step<T: Real>(
    state: AnnulusDualState<T>,
    profile: &RadialProfile<T>,
    dbeta: T,
    dt: T,
    params: AnnulusParams<T>,
) -> std::result::Result<AnnulusStep<T>, StopReason> {
    let r0 = state.r0();
    let s = sign_pos(state.rho - r0);
    let b_rho = profile.b(state.rho);
    let dw = s * dbeta;
    let dl = occupation_local_time_step(state.rho, r0, dbeta * dbeta, params.beta);
    let two = T::two();
    let rho = state.rho + dbeta + T::half() * b_rho * dt;
    let r_plus =
        state.r_plus + dw + (-T::half() * profile.b(state.r_plus) + s * b_rho) * dt + two * dl;
    let r_minus =
        state.r_minus - dw + (-T::half() * profile.b(state.r_minus) - s * b_rho) * dt - two * dl;
    if !(r_minus > T::zero()) {
        return Err(StopReason::CollapseToDisk);
    }
    if !(rho > T::zero()) || !(r_plus < profile.r_max()) {
        return Err(StopReason::Explosion);
    }
    if r_plus - r_minus < two * params.collar || r_minus < params.collar {
        return Err(StopReason::Collar);
    }
    let band = two * dt.sqrt();
    if rho < r_minus - band || rho > r_plus + band {
        return Err(StopReason::SchemeFailure);
    }
    Ok(AnnulusStep {
        state: AnnulusDualState {
            rho,
            r_minus,
            r_plus,
            l: state.l + dl,
        },
        s,
        dw,
        dl,
    })
}

/// Volume `2π ∫_{R⁻}^{R⁺} f` of a two-dimensional annulus.
pub fn annulus_volume<T: Real>(state: &AnnulusDualState<T>, profile: &RadialProfile<T>) -> T {
    if state.r_plus <= state.r_minus {
        return T::zero();
    }
    T::two() * T::PI() * profile.mass(state.r_minus, state.r_plus)
}

/// Radial test function `k(r)` with its derivative.
#[derive(Debug, Clone, Copy)]
pub struct RadialField<T> {
    pub name: &'static str,
    pub k: fn(T) -> T,
    pub dk: fn(T) -> T,
}

impl<T: Real> RadialField<T> {
    pub fn one() -> Self {
        Self {
            name: "one",
            k: |_| T::one(),
            dk: |_| T::zero(),
        }
    }

    pub fn r_squared() -> Self {
        Self {
            name: "r2",
            k: |r| r * r,
            dk: |r| T::two() * r,
        }
    }
}

/// A ball or an annulus centred at the pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialDomain<T> {
    Disk { radius: T },
    Annulus { inner: T, outer: T },
}

impl<T: Real> RadialDomain<T> {
    /// `μ(k) = ∫_D k dμ`. The field named `one` uses the closed-form mass where available.
    pub fn volume(&self, p: &RadialProfile<T>, field: &RadialField<T>) -> T {
        let (lo, hi) = self.bounds();
        if field.name == "one" {
            return p.omega() * p.mass(lo, hi);
        }
        p.omega() * p.weighted_mass(lo, hi, field.k)
    }

    /// `μ̲(k) = ∫_∂D k dμ̲`.
    pub fn boundary(&self, p: &RadialProfile<T>, field: &RadialField<T>) -> T {
        let w = p.omega();
        match *self {
            RadialDomain::Disk { radius } => w * (field.k)(radius) * p.density(radius),
            RadialDomain::Annulus { inner, outer } => {
                w * ((field.k)(outer) * p.density(outer) + (field.k)(inner) * p.density(inner))
            }
        }
    }

    /// `μ̲(⟨∇k, N⟩)` with `N` the inward unit normal.
    pub fn boundary_normal_derivative(&self, p: &RadialProfile<T>, field: &RadialField<T>) -> T {
        let w = p.omega();
        match *self {
            RadialDomain::Disk { radius } => -w * (field.dk)(radius) * p.density(radius),
            RadialDomain::Annulus { inner, outer } => {
                w * ((field.dk)(inner) * p.density(inner) - (field.dk)(outer) * p.density(outer))
            }
        }
    }

    /// `𝓛̃F_k(D) = μ̲(k) μ̲(∂D) / μ(D) - ½ μ̲(⟨∇k, N⟩)`.
    pub fn generator(&self, p: &RadialProfile<T>, field: &RadialField<T>) -> T {
        let one = RadialField::one();
        self.boundary(p, field) * self.boundary(p, &one) / self.volume(p, &one)
            - T::half() * self.boundary_normal_derivative(p, field)
    }

    /// `Γ(F_k, F_g) = μ̲(k) μ̲(g)`.
    pub fn carre_du_champ(
        &self,
        p: &RadialProfile<T>,
        k: &RadialField<T>,
        g: &RadialField<T>,
    ) -> T {
        self.boundary(p, k) * self.boundary(p, g)
    }

    fn bounds(&self) -> (T, T) {
        match *self {
            RadialDomain::Disk { radius } => (T::zero(), radius),
            RadialDomain::Annulus { inner, outer } => (inner, outer),
        }
    }
}

impl<T: Real> From<&DiskDualState<T>> for RadialDomain<T> {
    fn from(s: &DiskDualState<T>) -> Self {
        RadialDomain::Disk { radius: s.radius }
    }
}

impl<T: Real> From<&AnnulusDualState<T>> for RadialDomain<T> {
    fn from(s: &AnnulusDualState<T>) -> Self {
        RadialDomain::Annulus {
            inner: s.r_minus,
            outer: s.r_plus,
        }
    }
}

/// Terminal state of a simulated path and, if it stopped early, why and at which step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRun<S> {
    pub state: S,
    pub stop: Option<(StopReason, usize)>,
}

/// Runs the disk dual over `grid`: [`disk_step_polar`] while `ρ < R/2`, where
/// the Euler drift is singular, and [`disk_step`] otherwise, where it keeps
/// `R - ρ` nondecreasing. `observe(step, before, after, dβ)` sees every accepted step.
pub fn simulate_disk<T: Real>(
    profile: &RadialProfile<T>,
    init: DiskDualState<T>,
    grid: &TimeGrid<T>,
    src: &mut GaussianSource,
    mut observe: impl FnMut(usize, &DiskDualState<T>, &DiskDualState<T>, T),
) -> RadialRun<DiskDualState<T>> {
    let dt = grid.dt();
    let sq = dt.sqrt();
    let mut state = init;
    for i in 0..grid.n_steps() {
        let db = src.increment(sq);
        let mut transverse = T::zero();
        for _ in 1..profile.dimension() {
            let z: T = src.increment(sq);
            transverse = transverse + z * z;
        }
        let step = if state.rho < T::half() * state.radius {
            disk_step_polar(state, profile, db, transverse, dt)
        } else {
            disk_step(state, profile, db, dt)
        };
        match step {
            Ok(next) => {
                observe(i, &state, &next, db);
                state = next;
            }
            Err(reason) => {
                return RadialRun {
                    state,
                    stop: Some((reason, i)),
                }
            }
        }
    }
    RadialRun { state, stop: None }
}

/// Runs the annulus dual over `grid`; `observe(step, before, step_result, dβ)`.
pub fn simulate_annulus<T: Real>(
    profile: &RadialProfile<T>,
    init: AnnulusDualState<T>,
    grid: &TimeGrid<T>,
    src: &mut GaussianSource,
    params: AnnulusParams<T>,
    mut observe: impl FnMut(usize, &AnnulusDualState<T>, &AnnulusStep<T>, T),
) -> RadialRun<AnnulusDualState<T>> {
    let dt = grid.dt();
    let sq = dt.sqrt();
    let mut state = init;
    for i in 0..grid.n_steps() {
        let db = src.increment(sq);
        match annulus_step(state, profile, db, dt, params) {
            Ok(step) => {
                observe(i, &state, &step, db);
                state = step.state;
            }
            Err(reason) => {
                return RadialRun {
                    state,
                    stop: Some((reason, i)),
                }
            }
        }
    }
    RadialRun { state, stop: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn euclid2() -> RadialProfile<f64> {
        RadialProfile::euclidean(2).unwrap()
    }

    fn flat(_: f64) -> f64 {
        1.0
    }

    fn zero(_: f64) -> f64 {
        0.0
    }

    #[test]
    fn density_sample_closed_forms() {
        assert!((radial_density_sample(&euclid2(), 0.0, 1.0, 0.25) - 0.5).abs() < 1e-15);
        let e3 = RadialProfile::<f64>::euclidean(3).unwrap();
        assert!((radial_density_sample(&e3, 0.0, 1.0, 0.125) - 0.5).abs() < 1e-15);
        let s2 = RadialProfile::<f64>::sphere(2).unwrap();
        assert!((radial_density_sample(&s2, 0.0, PI / 2.0, 0.5) - PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn density_sample_bisection_matches_closed_form() {
        let custom = RadialProfile::<f64>::custom(2, |r| r.sinh(), |r| r.cosh()).unwrap();
        let h2 = RadialProfile::<f64>::hyperbolic(2).unwrap();
        for u in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let a = radial_density_sample(&custom, 0.2, 1.7, u);
            let b = radial_density_sample(&h2, 0.2, 1.7, u);
            assert!((a - b).abs() < 1e-11, "u={u}: {a} vs {b}");
        }
    }

    #[test]
    fn omega_values() {
        assert!((euclid2().omega() - 2.0 * PI).abs() < 1e-14);
        assert!((RadialProfile::<f64>::euclidean(3).unwrap().omega() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn polar_step_is_the_norm_of_the_planar_step() {
        let s = DiskDualState::new(0.5, 1.0).unwrap();
        let n = disk_step_polar(s, &euclid2(), 0.1, 0.04, 0.01).unwrap();
        let rho = (0.6f64 * 0.6 + 0.04).sqrt();
        assert!((n.rho - rho).abs() < 1e-15);
        assert!((n.radius - (1.0 + 0.1 - 0.005 + 2.0 * (rho - 0.6))).abs() < 1e-15);
        // No transverse motion: no compensator.
        let n = disk_step_polar(s, &euclid2(), -0.2, 0.0, 0.01).unwrap();
        assert!((n.rho - 0.3).abs() < 1e-15 && (n.radius - 0.795).abs() < 1e-15);
    }

    #[test]
    fn polar_step_bounded_near_pole() {
        let s = DiskDualState::new(1e-7, 1.0).unwrap();
        let dt = 1e-4;
        let euler = disk_step(s, &euclid2(), 0.0, dt).unwrap();
        let polar = disk_step_polar(s, &euclid2(), 0.0, dt, dt).unwrap();
        assert!(euler.radius > 100.0);
        assert!((polar.radius - 1.0).abs() < 3.0 * dt.sqrt());
    }

    #[test]
    fn polar_compensator_mean_matches_drift() {
        // E[ρ' - ρ - along] ≈ ½ b(ρ) dt away from the pole, for d = 2 and 3.
        for d in [2usize, 3] {
            let p = RadialProfile::<f64>::euclidean(d).unwrap();
            let (rho, dt) = (0.5, 1e-4f64);
            let s = DiskDualState::new(rho, 1.0).unwrap();
            let mut src = crate::sde::NoiseStream::new(21, d as u64, d).source();
            let n = 200_000;
            let mut sum = 0.0;
            for _ in 0..n {
                let a: f64 = src.increment(dt.sqrt());
                let t: f64 = (1..d).map(|_| src.increment::<f64>(dt.sqrt()).powi(2)).sum();
                sum += disk_step_polar(s, &p, a, t, dt).unwrap().rho - rho - a;
            }
            let mean = sum / n as f64;
            let exact = 0.5 * p.b(rho) * dt;
            assert!((mean / exact - 1.0).abs() < 0.02, "d={d}: {mean} vs {exact}");
        }
    }

    #[test]
    fn disk_step_substitution() {
        let s = DiskDualState::new(0.5, 1.0).unwrap();
        let n = disk_step(s, &euclid2(), 0.1, 0.01).unwrap();
        assert!((n.rho - 0.61).abs() < 1e-15);
        assert!((n.radius - 1.115).abs() < 1e-15);
    }

    #[test]
    fn disk_step_flat_drift_translates() {
        let p = RadialProfile::custom(2, flat, zero).unwrap();
        let s = DiskDualState::new(0.3, 0.9).unwrap();
        let n = disk_step(s, &p, -0.07, 0.01).unwrap();
        assert!((n.rho - 0.23).abs() < 1e-15);
        assert!((n.radius - n.rho - 0.6).abs() < 1e-15);
    }

    #[test]
    fn disk_reflects_at_pole_and_stops_are_typed() {
        let s = DiskDualState::new(0.01, 1.0).unwrap();
        let n = disk_step(s, &euclid2(), -0.5, 1e-4).unwrap();
        assert!((n.rho - (0.49 - 0.5 * 1e-4 / 0.01)).abs() < 1e-15);
        let s = DiskDualState::new(0.2, 0.3).unwrap();
        assert_eq!(
            disk_step(s, &euclid2(), -0.4, 1e-6),
            Err(StopReason::Explosion)
        );
        let sph = RadialProfile::<f64>::sphere(2).unwrap();
        let s = DiskDualState::new(1.0, 3.1).unwrap();
        assert_eq!(disk_step(s, &sph, 0.1, 1e-6), Err(StopReason::Explosion));
        assert!(DiskDualState::new(1.0, 1.0).is_err());
    }

    #[test]
    fn annulus_step_substitution() {
        let s = AnnulusDualState::new(1.2, 1.0, 2.0).unwrap();
        let params = AnnulusParams {
            beta: 1e-3,
            collar: 1e-3,
        };
        let st = annulus_step(s, &euclid2(), 0.1, 0.01, params).unwrap();
        assert_eq!(st.s, -1.0);
        assert_eq!(st.dl, 0.0);
        assert!((st.dw + 0.1).abs() < 1e-15);
        assert!((st.state.rho - (1.3 + 0.005 / 1.2)).abs() < 1e-14);
        assert!((st.state.r_plus - 1.889_166_666_666_667).abs() < 1e-12);
        assert!((st.state.r_minus - 1.103_333_333_333_333).abs() < 1e-12);
        let shift = st.state.r0() - s.r0();
        assert!((shift + 0.00375).abs() < 1e-14);
        assert!((shift + 0.25 * (0.5 + 1.0) * 0.01).abs() < 1e-14);
    }

    #[test]
    fn annulus_in_band_local_time() {
        let s = AnnulusDualState::new(1.5, 1.0, 2.0).unwrap();
        let params = AnnulusParams {
            beta: 0.05,
            collar: 1e-3,
        };
        let db = 0.02;
        let st = annulus_step(s, &euclid2(), db, 1e-4, params).unwrap();
        assert_eq!(st.s, 1.0);
        let expect = db * db / (2.0 * 0.05);
        assert!((st.dl - expect).abs() < 1e-16);
        assert!((st.state.l - expect).abs() < 1e-16);
        let drift = (-0.25 + 1.0 / 1.5) * 1e-4;
        assert!((st.state.r_plus - (2.0 + db + drift + 2.0 * expect)).abs() < 1e-14);
        let drift = (-0.5 - 1.0 / 1.5) * 1e-4;
        assert!((st.state.r_minus - (1.0 - db + drift - 2.0 * expect)).abs() < 1e-14);
    }

    #[test]
    fn annulus_stops() {
        let p = euclid2();
        let params = AnnulusParams {
            beta: 1e-2,
            collar: 1e-3,
        };
        let s = AnnulusDualState::new(0.05, 0.01, 0.5).unwrap();
        assert_eq!(
            annulus_step(s, &p, -0.05, 1e-4, params).unwrap_err(),
            StopReason::CollapseToDisk
        );
        let thin = AnnulusDualState::new(1.0, 0.9995, 1.0015).unwrap();
        assert_eq!(
            annulus_step(thin, &p, 0.0, 1e-8, params).unwrap_err(),
            StopReason::Collar
        );
        let off = AnnulusDualState {
            rho: 3.0,
            r_minus: 1.0,
            r_plus: 2.0,
            l: 0.0,
        };
        assert_eq!(
            annulus_step(off, &p, 0.0, 1e-4, params).unwrap_err(),
            StopReason::SchemeFailure
        );
    }

    #[test]
    fn annulus_volume_examples() {
        let s = AnnulusDualState::new(1.5, 1.0, 2.0).unwrap();
        assert!((annulus_volume(&s, &euclid2()) - 3.0 * PI).abs() < 1e-13);
        let e = AnnulusDualState {
            rho: 1.0,
            r_minus: 1.0,
            r_plus: 1.0,
            l: 0.0,
        };
        assert!(annulus_volume(&e, &euclid2()).abs() < 1e-12);
        let sph = RadialProfile::<f64>::sphere(2).unwrap();
        let s = AnnulusDualState::new(0.8, PI / 6.0, PI / 3.0).unwrap();
        let expect = 2.0 * PI * ((PI / 6.0).cos() - (PI / 3.0).cos());
        assert!((annulus_volume(&s, &sph) - expect).abs() < 1e-14);
    }

    #[test]
    fn generator_closed_forms() {
        let p = euclid2();
        let one = RadialField::one();
        let r2 = RadialField::r_squared();
        let disk = RadialDomain::Disk { radius: 1.0 };
        assert!((disk.generator(&p, &one) - 4.0 * PI).abs() < 1e-12);
        // μ̲(r²)μ̲(1)/μ(1) = 2π·2π/π = 4π and -½μ̲(⟨∇r², N⟩) = ½·2·2π = 2π.
        assert!((disk.generator(&p, &r2) - 6.0 * PI).abs() < 1e-12);
        let ann = RadialDomain::Annulus {
            inner: 1.0,
            outer: 2.0,
        };
        assert!((ann.volume(&p, &one) - 3.0 * PI).abs() < 1e-12);
        assert!((ann.generator(&p, &one) - 12.0 * PI).abs() < 1e-12);
        assert!((ann.carre_du_champ(&p, &one, &one) - 36.0 * PI * PI).abs() < 1e-10);
        // μ̲(r²) = 2π(2·4 + 1·1) = 18π, so Γ(F_1, F_r²) = 6π·18π.
        assert!((ann.carre_du_champ(&p, &one, &r2) - 108.0 * PI * PI).abs() < 1e-9);
        assert!((ann.volume(&p, &r2) - PI / 2.0 * 15.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn disk_gap_nondecreasing(
            rho in 0.01f64..0.99,
            gap in 0.001f64..2.0,
            db in -0.05f64..0.05,
            dt in 1e-6f64..1e-3,
        ) {
            let s = DiskDualState::new(rho, rho + gap).unwrap();
            let reflected = rho + db + 0.5 * dt / rho < 0.0;
            if let (false, Ok(n)) = (reflected, disk_step(s, &euclid2(), db, dt)) {
                prop_assert!(n.radius - n.rho >= gap - 1e-14);
            }
        }

        // The noise and local-time terms cancel in R⁰, leaving -¼(b(R⁺) + b(R⁻))dt.
        #[test]
        fn annulus_midpoint_identity(
            r_minus in 0.2f64..2.0,
            width in 0.1f64..2.0,
            frac in 0.0f64..1.0,
            db in -0.05f64..0.05,
            dt in 1e-6f64..1e-3,
            beta in 1e-3f64..0.5,
        ) {
            let p = euclid2();
            let r_plus = r_minus + width;
            let s = AnnulusDualState::new(r_minus + frac * width, r_minus, r_plus).unwrap();
            let params = AnnulusParams { beta, collar: 1e-6 };
            if let Ok(st) = annulus_step(s, &p, db, dt, params) {
                let expect = -0.25 * (p.b(r_plus) + p.b(r_minus)) * dt;
                prop_assert!((st.state.r0() - s.r0() - expect).abs() < 1e-13);
            }
        }

        #[test]
        fn density_sample_in_range_and_monotone(u in 0.0f64..1.0, v in 0.0f64..1.0, lo in 0.0f64..1.0, w in 0.01f64..1.5) {
            let p = RadialProfile::<f64>::sphere(3).unwrap();
            let hi = (lo + w).min(3.0);
            let a = radial_density_sample(&p, lo, hi, u.min(v));
            let b = radial_density_sample(&p, lo, hi, u.max(v));
            prop_assert!(a >= lo && b <= hi && a <= b + 1e-12);
            prop_assert!((radial_cdf(&p, lo, hi, a) - u.min(v)).abs() < 1e-9);
        }
    }
}
