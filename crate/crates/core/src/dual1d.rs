//! One-dimensional duals: the particle `X` lives in a random interval.
//!
//! * symmetric: `[-R, R]` with `R = |X| + L⁰(X)`,
//! * Pitman: `R = X - 2 min X`,
//! * mirror: `[-R, R]` shrinking when `|X|` grows, pushed at the ends,
//! * free: `[a, b]` driven by an independent Brownian motion `W`.

use crate::error::{Error, Result};
use crate::scalar::{sign0, Real};
use crate::sde::{
    occupation_local_time_step, skorokhod_reflect, tanaka_local_time, GaussianSource, TimeGrid,
};

/// Brownian path on `grid` started at `x0`.
pub fn brownian_path<T: Real>(src: &mut GaussianSource, grid: &TimeGrid<T>, x0: T) -> Vec<T> {
    let sqrt_dt = grid.dt().sqrt();
    let mut x = Vec::with_capacity(grid.n_nodes());
    x.push(x0);
    for i in 0..grid.n_steps() {
        x.push(x[i] + src.increment(sqrt_dt));
    }
    x
}

fn require_origin<T: Real>(x: &[T]) -> Result<()> {
    match x.first() {
        Some(&x0) if x0 == T::zero() => Ok(()),
        Some(&x0) => Err(Error::Contract(format!("path must start at 0, got {x0}"))),
        None => Err(Error::Contract("empty path".into())),
    }
}

/// `R = |X| + L̂` with `L̂` the discrete Tanaka local time at 0.
pub fn symmetric_dual<T: Real>(x: &[T]) -> Result<Vec<T>> {
    require_origin(x)?;
    Ok(x.iter()
        .zip(tanaka_local_time(x))
        .map(|(xi, l)| xi.abs() + l)
        .collect())
}

/// `R_t = X_t - 2 min_{s<=t} X_s`.
pub fn pitman_dual<T: Real>(x: &[T]) -> Result<Vec<T>> {
    require_origin(x)?;
    let mut m = T::zero();
    Ok(x.iter()
        .map(|&v| {
            m = m.min(v);
            v - T::two() * m
        })
        .collect())
}

/// The Pitman dual through the reflection map: `skorokhod_reflect(2X) - X`.
pub fn pitman_dual_via_reflection<T: Real>(x: &[T]) -> Result<Vec<T>> {
    require_origin(x)?;
    let doubled: Vec<T> = x.iter().map(|&v| v * T::two()).collect();
    Ok(skorokhod_reflect(&doubled)?
        .iter()
        .zip(x)
        .map(|(z, v)| *z - *v)
        .collect())
}

/// Output of an interval dual with boundary pushes.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorDualPath<T> {
    pub r: Vec<T>,
    /// Steps at which `R` fell below 0 and was clipped.
    pub clip_events: usize,
    /// Largest distance by which `X` left `[-R, R]` before the push credit.
    pub max_overshoot: T,
}

/// Explicit scheme for
/// `dR = -sign(X) dX - 2 dL⁰(X) + 2 dL⁰(R - X) + 2 dL⁰(R + X)`.
///
/// Each local time is the band-occupation estimator with the step's `ΔX²`.
/// If `X` still leaves `[-R, R]` after a step, `R` is pushed out to `|X|` and
/// the push is credited to the boundary local time.
pub fn mirror_dual<T: Real>(x: &[T], beta: T) -> Result<MirrorDualPath<T>> {
    require_origin(x)?;
    let mut r = Vec::with_capacity(x.len());
    r.push(T::zero());
    let mut clip_events = 0;
    let mut max_overshoot = T::zero();
    for w in x.windows(2) {
        let step = mirror_dual_step(w[0], *r.last().expect("nonempty"), w[1] - w[0], beta);
        clip_events += usize::from(step.clipped);
        max_overshoot = max_overshoot.max(step.overshoot);
        r.push(step.r);
    }
    Ok(MirrorDualPath {
        r,
        clip_events,
        max_overshoot,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorStep<T> {
    pub r: T,
    pub overshoot: T,
    pub clipped: bool,
}

/// One step of the mirror dual from `(x, r)` with particle increment `dx`.
pub fn mirror_dual_step<T: Real>(x: T, r: T, dx: T, beta: T) -> MirrorStep<T> {
    let qv = dx * dx;
    let two = T::two();
    let l0 = occupation_local_time_step(x, T::zero(), qv, beta);
    let lr = occupation_local_time_step(r - x, T::zero(), qv, beta);
    let ll = occupation_local_time_step(r + x, T::zero(), qv, beta);
    let mut rn = r - sign0(x) * dx - two * l0 + two * lr + two * ll;
    let clipped = rn < T::zero();
    if clipped {
        rn = T::zero();
    }
    let xn = x + dx;
    let overshoot = (xn.abs() - rn).max(T::zero());
    if overshoot > T::zero() {
        rn = xn.abs();
    }
    MirrorStep {
        r: rn,
        overshoot,
        clipped,
    }
}

/// State of the free dual: particle and interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeDualState<T> {
    pub x: T,
    pub a: T,
    pub b: T,
    /// Accumulated boundary local time.
    pub l: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeStep<T> {
    pub state: FreeDualState<T>,
    /// Distance by which `X` left `[a, b]` before the push credit.
    pub overshoot: T,
}

/// One step of `da = dW - dL`, `db = -dW + dL`, `X` an independent Brownian
/// motion, `L` the local time of `X` at the nearer endpoint.
pub fn free_dual_step<T: Real>(s: FreeDualState<T>, dx: T, dw: T, beta: T) -> FreeStep<T> {
    let qv = dx * dx;
    let da = s.x - s.a;
    let db = s.b - s.x;
    let la = occupation_local_time_step(da, T::zero(), qv, beta);
    let lb = occupation_local_time_step(db, T::zero(), qv, beta);
    let mut dl = if da <= beta && db <= beta {
        (la + lb) * T::half()
    } else if da < db {
        la
    } else {
        lb
    };
    let x = s.x + dx;
    let mut a = s.a + dw - dl;
    let mut b = s.b - dw + dl;
    let overshoot = (a - x).max(x - b).max(T::zero());
    if overshoot > T::zero() {
        a = a - overshoot;
        b = b + overshoot;
        dl = dl + overshoot;
    }
    FreeStep {
        state: FreeDualState {
            x,
            a,
            b,
            l: s.l + dl,
        },
        overshoot,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeDualPath<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub max_overshoot: T,
}

/// Free dual driven by the recorded paths `x` and `w`.
pub fn free_dual<T: Real>(x: &[T], w: &[T], a0: T, b0: T, beta: T) -> Result<FreeDualPath<T>> {
    if x.len() != w.len() || x.is_empty() {
        return Err(Error::Contract(
            "X and W must be nonempty and equally long".into(),
        ));
    }
    if !(a0 < x[0] && x[0] < b0) {
        return Err(Error::Contract(format!(
            "need a0 < X0 < b0, got {a0}, {}, {b0}",
            x[0]
        )));
    }
    let mut s = FreeDualState {
        x: x[0],
        a: a0,
        b: b0,
        l: T::zero(),
    };
    let mut a = vec![a0];
    let mut b = vec![b0];
    let mut max_overshoot = T::zero();
    for i in 1..x.len() {
        let step = free_dual_step(s, x[i] - x[i - 1], w[i] - w[i - 1], beta);
        max_overshoot = max_overshoot.max(step.overshoot);
        s = step.state;
        a.push(s.a);
        b.push(s.b);
    }
    Ok(FreeDualPath {
        a,
        b,
        max_overshoot,
    })
}

/// CDF at time `t` of the norm of a 3D Brownian motion started at 0.
pub fn bessel3_cdf(x: f64, t: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = x / t.sqrt();
    (libm::erf(z / std::f64::consts::SQRT_2)
        - (2.0 / std::f64::consts::PI).sqrt() * z * (-0.5 * z * z).exp())
    .clamp(0.0, 1.0)
}

/// Brownian particle in the frozen interval `[-radius, radius]`, recording
/// the channels read by [`tanaka_residual`](crate::stats::tanaka_residual)
/// with the skeleton `{0}`. The record ends before the particle leaves the interval.
pub fn frozen_interval_tanaka_path<T: Real>(
    radius: T,
    x0: T,
    grid: &TimeGrid<T>,
    src: &mut GaussianSource,
    beta: T,
) -> Result<crate::sde::PathRecord<T>> {
    use crate::stats::channels;
    if !(x0.abs() < radius) {
        return Err(Error::Config(format!(
            "x0 = {x0} lies outside [-{radius}, {radius}]"
        )));
    }
    let sq = grid.dt().sqrt();
    let (mut xs, mut ls) = (vec![x0], vec![T::zero()]);
    for _ in 0..grid.n_steps() {
        let x = *xs.last().expect("nonempty");
        let dx = src.increment(sq);
        if (x + dx).abs() >= radius {
            break;
        }
        let l =
            *ls.last().expect("nonempty") + occupation_local_time_step(x, T::zero(), dx * dx, beta);
        xs.push(x + dx);
        ls.push(l);
    }
    if xs.len() == 1 {
        xs.push(x0);
        ls.push(T::zero());
    }
    let n = xs.len();
    let sub = TimeGrid::new(grid.dt() * T::from_usize_lossy(n - 1), n - 1)?;
    crate::sde::PathRecord::new(sub)
        .with_channel(
            channels::RHO_PLUS,
            xs.iter().map(|&v| radius - v.abs()).collect(),
        )?
        .with_channel(channels::N1, xs.iter().map(|&v| -sign0(v)).collect())?
        .with_channel(channels::H, vec![T::zero(); n])?
        .with_channel(channels::SIN_THETA, vec![T::one(); n])?
        .with_channel(channels::LOCAL_TIME, ls)?
        .with_channel(channels::X1, xs)
}
