//! One runner per construction. Replicas run in parallel and are merged in index order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dualflow::dual1d::{
    bessel3_cdf, brownian_path, free_dual, frozen_interval_tanaka_path, mirror_dual, pitman_dual,
    symmetric_dual,
};
use dualflow::geometry::{
    check_convex, ellipse, medial_axis, skeleton_half_length, SymmetricConvexCurve, Vec2,
};
use dualflow::planar::{
    deterministic_flow_step, frozen_tanaka_path, planar_step, sample_uniform_planar,
    simulate_planar, PlanarDualState, PlanarParams,
};
use dualflow::radial::{
    annulus_volume, radial_cdf, radial_density_sample, simulate_annulus, simulate_disk,
    AnnulusDualState, AnnulusParams, DiskDualState, RadialDomain, RadialField, RadialProfile,
};
use dualflow::sde::{GaussianSource, NoiseStream, StopReason, TimeGrid};
use dualflow::stats::{
    conditional_uniformity, dynkin_check, format_real, ks_one_sample, ks_two_sample,
    measure_evolution_check, tanaka_residual_check, tanaka_sup_residual, Check, DynkinPath,
    EmpiricalSample, RegressionAccumulator, StatReport, UniformityThresholds, Verdict,
};
use dualflow::{Error, Result};
use rayon::prelude::*;

use crate::config::{Construction, ExperimentConfig, Params};

/// Noise channels of one replica.
mod channel {
    pub const PARTICLE: u8 = 0;
    pub const INITIAL: u8 = 1;
    pub const DOMAIN: u8 = 2;
    pub const REFERENCE: u8 = 3;
    pub const TANAKA: u8 = 4;
    pub const CALIBRATION: u8 = 5;
    pub const HARNESS: u8 = 6;
}

/// Terminal state of one replica.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub stop: Option<(StopReason, usize)>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    pub reports: Vec<StatReport>,
    /// Snapshot text, empty unless a stride was configured.
    pub snapshots: String,
}

impl Outcome {
    pub fn stop_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for r in &self.rows {
            if let Some((reason, _)) = r.stop {
                *m.entry(reason.tag().to_string()).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn scheme_failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.stop.is_some_and(|(s, _)| s.is_scheme_failure()))
            .count()
    }

    /// True when every check passes and scheme failures stay under the ceiling.
    pub fn passed(&self, cfg: &ExperimentConfig) -> bool {
        let rate = self.scheme_failures() as f64 / self.rows.len().max(1) as f64;
        rate <= cfg.failure_ceiling && self.reports.iter().all(|r| r.verdict() == Verdict::Pass)
    }

    /// Per-replica table: index, stop tag, stop step, then the state columns.
    pub fn replicas_tsv(&self) -> String {
        let mut s = String::from("replica\tstop\tstop_step");
        for c in &self.columns {
            s.push('\t');
            s.push_str(c);
        }
        s.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let (tag, step) = match r.stop {
                Some((reason, step)) => (reason.tag().to_string(), step.to_string()),
                None => ("none".into(), "-".into()),
            };
            let _ = write!(s, "{i}\t{tag}\t{step}");
            for v in &r.values {
                let _ = write!(s, "\t{}", format_real(*v));
            }
            s.push('\n');
        }
        s
    }

    pub fn report_text(&self) -> String {
        self.reports
            .iter()
            .map(StatReport::to_text)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn stream(cfg: &ExperimentConfig, replica: usize, dim: usize, ch: u8) -> GaussianSource {
    NoiseStream::new(cfg.seed, replica as u64, dim)
        .with_channel(ch)
        .source()
}

fn par_replicas<R: Send>(n: usize, f: impl Fn(usize) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    (0..n).into_par_iter().map(f).collect()
}

fn finish(cfg: &ExperimentConfig, columns: Vec<&'static str>, rows: Vec<Row>, reports: Vec<StatReport>, snapshots: String) -> Outcome {
    let mut out = Outcome {
        columns,
        rows,
        reports: Vec::new(),
        snapshots,
    };
    let stops = out.stop_counts();
    let fp = cfg.stat_fingerprint();
    out.reports = reports
        .into_iter()
        .map(|r| {
            r.with_stops(stops.clone())
                .with_fingerprint(fp.clone())
        })
        .collect();
    out
}

fn snapshot_line(s: &mut String, replica: usize, step: usize, t: f64, values: &[f64]) {
    let _ = write!(s, "{replica}\t{step}\t{}", format_real(t));
    for v in values {
        let _ = write!(s, "\t{}", format_real(*v));
    }
    s.push('\n');
}

fn uniformity_thresholds(cfg: &ExperimentConfig) -> UniformityThresholds {
    UniformityThresholds {
        ks: cfg.threshold("uniformity.ks"),
        corr: cfg.threshold("uniformity.corr"),
        stratified: Some(cfg.threshold("uniformity.strat")),
    }
}

/// Runs the configured experiment on the current rayon pool.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.construction {
        Construction::Symmetric1d | Construction::Pitman1d => run_bessel(cfg),
        Construction::Mirror1d => run_mirror(cfg),
        Construction::Free1d => run_free(cfg),
        Construction::Disk => run_disk(cfg),
        Construction::Annulus => run_annulus(cfg),
        Construction::Planar => run_planar(cfg),
    }
}

fn grid(cfg: &ExperimentConfig) -> Result<TimeGrid<f64>> {
    TimeGrid::new(cfg.t_end, cfg.n_steps)
}

fn path_snapshots(cfg: &ExperimentConfig, replica: usize, series: &[&[f64]]) -> String {
    let mut s = String::new();
    if cfg.snapshot_stride == 0 {
        return s;
    }
    let dt = cfg.dt();
    for i in (0..series[0].len()).step_by(cfg.snapshot_stride) {
        let vals: Vec<f64> = series.iter().map(|c| c[i]).collect();
        snapshot_line(&mut s, replica, i, i as f64 * dt, &vals);
    }
    s
}

fn run_bessel(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = grid(cfg)?;
    let symmetric = cfg.construction == Construction::Symmetric1d;
    let t_min = match cfg.params {
        Params::Symmetric { t_min } => t_min,
        _ => 0.0,
    };
    let i_min = g.index_at_or_after(t_min);
    let band = 2.0 * cfg.dt().sqrt();
    let want_reference = symmetric && cfg.enabled("equivalence");
    let per = par_replicas(cfg.replicas, |i| {
        let x = brownian_path(&mut stream(cfg, i, 1, channel::PARTICLE), &g, 0.0);
        let r = if symmetric { symmetric_dual(&x)? } else { pitman_dual(&x)? };
        let gap = x[i_min..]
            .iter()
            .zip(&r[i_min..])
            .map(|(x, r)| r - x.abs())
            .fold(f64::INFINITY, f64::min);
        let reference = if want_reference {
            let y = brownian_path(&mut stream(cfg, i, 1, channel::REFERENCE), &g, 0.0);
            *pitman_dual(&y)?.last().expect("nonempty")
        } else {
            f64::NAN
        };
        let snap = path_snapshots(cfg, i, &[&x, &r]);
        let values = if symmetric {
            vec![*x.last().expect("nonempty"), *r.last().expect("nonempty"), gap]
        } else {
            vec![*x.last().expect("nonempty"), *r.last().expect("nonempty")]
        };
        Ok((Row { stop: None, values }, reference, snap))
    })?;
    let r_end: Vec<f64> = per.iter().map(|(row, _, _)| row.values[1]).collect();
    let mut reports = Vec::new();
    let name = cfg.construction.name();
    if cfg.enabled("bessel3") {
        let s = EmpiricalSample::from_unsorted(r_end.clone())?;
        let ks = ks_one_sample(&s, |x| bessel3_cdf(x, cfg.t_end));
        reports.push(
            StatReport::new(format!("{name}.bessel3"))
                .with_check(Check::new("ks", ks, cfg.threshold("bessel3.ks")))
                .with_value("mean", r_end.iter().sum::<f64>() / r_end.len() as f64),
        );
    }
    if want_reference {
        let a = EmpiricalSample::from_unsorted(r_end.clone())?;
        let b = EmpiricalSample::from_unsorted(per.iter().map(|p| p.1).collect())?;
        reports.push(
            StatReport::new(format!("{name}.equivalence"))
                .with_check(Check::new("ks", ks_two_sample(&a, &b), cfg.threshold("equivalence.ks"))),
        );
    }
    if symmetric && cfg.enabled("touching") {
        let touching = per.iter().filter(|p| p.0.values[2] < band).count();
        reports.push(
            StatReport::new(format!("{name}.touching"))
                .with_check(Check::new(
                    "fraction",
                    touching as f64 / per.len() as f64,
                    cfg.threshold("touching.fraction"),
                ))
                .with_value("band", band)
                .with_value("t_min", t_min)
                .with_value("touching", touching as f64),
        );
    }
    let columns = if symmetric { vec!["x", "r", "min_gap"] } else { vec!["x", "r"] };
    let snapshots = per.iter().map(|p| p.2.as_str()).collect();
    let rows = per.into_iter().map(|p| p.0).collect();
    Ok(finish(cfg, columns, rows, reports, snapshots))
}

fn run_mirror(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = grid(cfg)?;
    let beta = cfg.beta();
    let per = par_replicas(cfg.replicas, |i| {
        let x = brownian_path(&mut stream(cfg, i, 1, channel::PARTICLE), &g, 0.0);
        let m = mirror_dual(&x, beta)?;
        let snap = path_snapshots(cfg, i, &[&x, &m.r]);
        let values = vec![
            *x.last().expect("nonempty"),
            *m.r.last().expect("nonempty"),
            m.max_overshoot,
            m.clip_events as f64,
        ];
        Ok((Row { stop: None, values }, snap))
    })?;
    let pairs: Vec<(f64, f64)> = per
        .iter()
        .map(|p| (p.0.values[0], p.0.values[1]))
        .filter(|&(_, r)| r > 0.0)
        .collect();
    let mut reports = Vec::new();
    if cfg.enabled("uniformity") {
        let overshoot = per.iter().map(|p| p.0.values[2]).fold(0.0, f64::max);
        reports.push(
            conditional_uniformity(
                "mirror1d.uniformity",
                &pairs,
                |x, r| (x + r) / (2.0 * r),
                &uniformity_thresholds(cfg),
            )?
            .with_value("max_overshoot", overshoot),
        );
    }
    let snapshots = per.iter().map(|p| p.1.as_str()).collect();
    let rows = per.into_iter().map(|p| p.0).collect();
    Ok(finish(cfg, vec!["x", "r", "max_overshoot", "clip_events"], rows, reports, snapshots))
}

fn run_free(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = grid(cfg)?;
    let beta = cfg.beta();
    let Params::Free { a0, b0 } = cfg.params else {
        unreachable!("free1d params")
    };
    let per = par_replicas(cfg.replicas, |i| {
        let u: f64 = stream(cfg, i, 1, channel::INITIAL).uniform();
        let x0 = a0 + (b0 - a0) * u;
        let x = brownian_path(&mut stream(cfg, i, 1, channel::PARTICLE), &g, x0);
        let w = brownian_path(&mut stream(cfg, i, 1, channel::DOMAIN), &g, 0.0);
        let d = free_dual(&x, &w, a0, b0, beta)?;
        let snap = path_snapshots(cfg, i, &[&x, &d.a, &d.b]);
        let values = vec![
            *x.last().expect("nonempty"),
            *d.a.last().expect("nonempty"),
            *d.b.last().expect("nonempty"),
            d.max_overshoot,
        ];
        Ok((Row { stop: None, values }, snap))
    })?;
    let mut reports = Vec::new();
    if cfg.enabled("uniformity") {
        let pairs: Vec<(f64, f64)> = per
            .iter()
            .map(|p| {
                let v = &p.0.values;
                ((v[0] - v[1]) / (v[2] - v[1]), v[2] - v[1])
            })
            .collect();
        reports.push(conditional_uniformity("free1d.uniformity", &pairs, |u, _| u, &uniformity_thresholds(cfg))?);
    }
    let snapshots = per.iter().map(|p| p.1.as_str()).collect();
    let rows = per.into_iter().map(|p| p.0).collect();
    Ok(finish(cfg, vec!["x", "a", "b", "max_overshoot"], rows, reports, snapshots))
}

/// Dynkin accumulators for the fields `1` and `r²`.
#[derive(Debug, Clone, Copy)]
struct FieldTrack {
    paths: [DynkinPath; 2],
    regression: [RegressionAccumulator; 2],
}

fn fields() -> [RadialField<f64>; 2] {
    [RadialField::one(), RadialField::r_squared()]
}

impl FieldTrack {
    fn start(domain: &RadialDomain<f64>, p: &RadialProfile<f64>) -> Self {
        let [a, b] = fields();
        Self {
            paths: [
                DynkinPath::start(domain.volume(p, &a)),
                DynkinPath::start(domain.volume(p, &b)),
            ],
            regression: [RegressionAccumulator::default(); 2],
        }
    }
}

fn dynkin_reports(cfg: &ExperimentConfig, name: &str, tracks: &[FieldTrack], initial: &RadialDomain<f64>, p: &RadialProfile<f64>) -> Result<Vec<StatReport>> {
    let mut out = Vec::new();
    for (j, f) in fields().iter().enumerate() {
        let paths: Vec<DynkinPath> = tracks.iter().map(|t| t.paths[j]).collect();
        out.push(
            dynkin_check(&format!("{name}.dynkin.{}", f.name), &paths, cfg.t_end, cfg.threshold("dynkin.relative"))?
                .with_value("generator.initial", initial.generator(p, f)),
        );
    }
    Ok(out)
}

fn run_disk(cfg: &ExperimentConfig) -> Result<Outcome> {
    let Params::Disk { profile, dimension, radius0, rho0 } = cfg.params else {
        unreachable!("disk params")
    };
    let p = profile.build(dimension)?;
    let g = grid(cfg)?;
    let dt = cfg.dt();
    let dynkin = cfg.enabled("dynkin");
    let stride = cfg.snapshot_stride;
    let per = par_replicas(cfg.replicas, |i| {
        let rho = match rho0 {
            Some(r) => r,
            None => radial_density_sample(&p, 0.0, radius0, stream(cfg, i, 1, channel::INITIAL).uniform()),
        };
        let init = DiskDualState::new(rho, radius0)?;
        let mut track = FieldTrack::start(&RadialDomain::from(&init), &p);
        let mut snap = String::new();
        let run = simulate_disk(&p, init, &g, &mut stream(cfg, i, 1, channel::PARTICLE), |k, before, after, _| {
            if dynkin {
                let (d0, d1) = (RadialDomain::from(before), RadialDomain::from(after));
                for (j, f) in fields().iter().enumerate() {
                    track.paths[j].step(d1.volume(&p, f), d0.generator(&p, f), d0.carre_du_champ(&p, f, f), dt);
                }
            }
            if stride > 0 && (k + 1) % stride == 0 {
                snapshot_line(&mut snap, i, k + 1, (k + 1) as f64 * dt, &[after.rho, after.radius]);
            }
        });
        let values = vec![run.state.rho, run.state.radius];
        Ok((Row { stop: run.stop, values }, track, snap))
    })?;
    let mut reports = Vec::new();
    if cfg.enabled("uniformity") {
        let pairs: Vec<(f64, f64)> = per
            .iter()
            .filter(|q| q.0.stop.is_none())
            .map(|q| (q.0.values[0], q.0.values[1]))
            .collect();
        reports.push(conditional_uniformity(
            "disk.uniformity",
            &pairs,
            |rho, r| radial_cdf(&p, 0.0, r, rho),
            &uniformity_thresholds(cfg),
        )?);
    }
    if dynkin {
        let tracks: Vec<FieldTrack> = per.iter().map(|q| q.1).collect();
        reports.extend(dynkin_reports(cfg, "disk", &tracks, &RadialDomain::Disk { radius: radius0 }, &p)?);
    }
    let snapshots = per.iter().map(|q| q.2.as_str()).collect();
    let rows = per.into_iter().map(|q| q.0).collect();
    Ok(finish(cfg, vec!["rho", "radius"], rows, reports, snapshots))
}

#[derive(Debug, Clone, Copy, Default)]
struct Rigidity {
    qv_r0: f64,
    qv_plus: f64,
    drift_empirical: f64,
    drift_predicted: f64,
}

fn run_annulus(cfg: &ExperimentConfig) -> Result<Outcome> {
    let Params::Annulus { profile, inner0, outer0, rho0, collar } = cfg.params else {
        unreachable!("annulus params")
    };
    let p = profile.build(2)?;
    let g = grid(cfg)?;
    let dt = cfg.dt();
    let params = AnnulusParams { beta: cfg.beta(), collar };
    let track_fields = cfg.enabled("dynkin") || cfg.enabled("regression");
    let stride = cfg.snapshot_stride;
    let per = par_replicas(cfg.replicas, |i| {
        let rho = match rho0 {
            Some(r) => r,
            None => radial_density_sample(&p, inner0, outer0, stream(cfg, i, 1, channel::INITIAL).uniform()),
        };
        let init = AnnulusDualState::new(rho, inner0, outer0)?;
        let mut track = FieldTrack::start(&RadialDomain::from(&init), &p);
        let mut rig = Rigidity::default();
        let mut snap = String::new();
        let run = simulate_annulus(&p, init, &g, &mut stream(cfg, i, 1, channel::PARTICLE), params, |k, before, step, _| {
            let after = &step.state;
            let d_r0 = after.r0() - before.r0();
            let d_plus = after.r_plus - before.r_plus;
            rig.qv_r0 += d_r0 * d_r0;
            rig.qv_plus += d_plus * d_plus;
            rig.drift_empirical += d_r0;
            rig.drift_predicted += -0.25 * (p.b(before.r_plus) + p.b(before.r_minus)) * dt;
            if track_fields {
                let (d0, d1) = (RadialDomain::from(before), RadialDomain::from(after));
                // Outward boundary displacement beyond the curvature part: s·b(ρ)dt + 2ΔL.
                let push = step.s * p.b(before.rho) * dt + 2.0 * step.dl;
                for (j, f) in fields().iter().enumerate() {
                    let next = d1.volume(&p, f);
                    let prev = track.paths[j].ft;
                    let boundary = d0.boundary(&p, f);
                    track.regression[j].push(
                        push * boundary - 0.5 * d0.boundary_normal_derivative(&p, f) * dt,
                        boundary * step.dw,
                        next - prev,
                    );
                    track.paths[j].step(next, d0.generator(&p, f), d0.carre_du_champ(&p, f, f), dt);
                }
            }
            if stride > 0 && (k + 1) % stride == 0 {
                snapshot_line(&mut snap, i, k + 1, (k + 1) as f64 * dt, &[after.rho, after.r_minus, after.r_plus, after.l]);
            }
        });
        let s = run.state;
        let values = vec![s.rho, s.r_minus, s.r_plus, s.l];
        Ok((Row { stop: run.stop, values }, track, rig, snap))
    })?;
    let mut reports = Vec::new();
    if cfg.enabled("uniformity") {
        let pairs: Vec<(f64, f64)> = per
            .iter()
            .filter(|q| q.0.stop.is_none())
            .map(|q| {
                let v = &q.0.values;
                let state = AnnulusDualState { rho: v[0], r_minus: v[1], r_plus: v[2], l: v[3] };
                (radial_cdf(&p, v[1], v[2], v[0]), annulus_volume(&state, &p))
            })
            .collect();
        reports.push(conditional_uniformity("annulus.uniformity", &pairs, |u, _| u, &uniformity_thresholds(cfg))?);
    }
    if cfg.enabled("rigidity") {
        let mut tot = Rigidity::default();
        for q in &per {
            tot.qv_r0 += q.2.qv_r0;
            tot.qv_plus += q.2.qv_plus;
            tot.drift_empirical += q.2.drift_empirical;
            tot.drift_predicted += q.2.drift_predicted;
        }
        let ratio = tot.drift_empirical / tot.drift_predicted;
        reports.push(
            StatReport::new("annulus.rigidity")
                .with_check(Check::new("qv_ratio", tot.qv_r0 / tot.qv_plus, cfg.threshold("rigidity.qv_ratio")))
                .with_check(Check::new("drift", (ratio - 1.0).abs(), cfg.threshold("rigidity.drift")))
                .with_value("qv.r0", tot.qv_r0)
                .with_value("qv.r_plus", tot.qv_plus)
                .with_value("drift.empirical", tot.drift_empirical)
                .with_value("drift.predicted", tot.drift_predicted),
        );
    }
    if cfg.enabled("dynkin") {
        let tracks: Vec<FieldTrack> = per.iter().map(|q| q.1).collect();
        reports.extend(dynkin_reports(
            cfg,
            "annulus",
            &tracks,
            &RadialDomain::Annulus { inner: inner0, outer: outer0 },
            &p,
        )?);
    }
    if cfg.enabled("regression") {
        for (j, f) in fields().iter().enumerate() {
            let mut acc = RegressionAccumulator::default();
            for q in &per {
                acc.merge(&q.1.regression[j]);
            }
            reports.push(measure_evolution_check(
                &format!("annulus.regression.{}", f.name),
                &acc,
                cfg.threshold("regression.slope"),
            )?);
        }
    }
    let snapshots = per.iter().map(|q| q.3.as_str()).collect();
    let rows = per.into_iter().map(|q| q.0).collect();
    Ok(finish(cfg, vec!["rho", "r_minus", "r_plus", "local_time"], rows, reports, snapshots))
}

struct PlanarSetup {
    domain: SymmetricConvexCurve<f64>,
    params: PlanarParams<f64>,
}

fn planar_setup(cfg: &ExperimentConfig) -> Result<PlanarSetup> {
    let Params::Planar { a, b, nodes, k_skel, .. } = cfg.params else {
        unreachable!("planar params")
    };
    let domain = SymmetricConvexCurve::new(ellipse(a, b, nodes)?)?;
    let mut params = PlanarParams::new(cfg.beta());
    params.k_skel = k_skel;
    Ok(PlanarSetup { domain, params })
}

fn run_planar(cfg: &ExperimentConfig) -> Result<Outcome> {
    let setup = planar_setup(cfg)?;
    let g = grid(cfg)?;
    let dt = cfg.dt();
    let stride = cfg.snapshot_stride;
    let mut reports = Vec::new();
    let (rows, snapshots) = if cfg.enabled("uniformity") {
        let per = par_replicas(cfg.replicas, |i| {
            let x0 = sample_uniform_planar(setup.domain.base(), &mut stream(cfg, i, 2, channel::INITIAL))?;
            let state = PlanarDualState::new(x0, setup.domain.clone(), &setup.params)?;
            let mut snap = String::new();
            let run = simulate_planar(state, &g, &mut stream(cfg, i, 2, channel::PARTICLE), &setup.params, |k, _, _, st| {
                if stride > 0 && (k + 1) % stride == 0 {
                    let _ = writeln!(snap, "# replica {i} step {} t {}", k + 1, format_real((k + 1) as f64 * dt));
                    snap.push_str(&st.domain.base().to_text());
                }
            });
            let s = &run.state;
            let values = vec![
                s.x.x,
                s.x.y,
                s.area(),
                s.area_fraction(),
                s.skeleton.half_length,
                s.l,
                s.repairs as f64,
                f64::from(u8::from(run.repair_warning())),
            ];
            Ok((Row { stop: run.stop, values }, snap))
        })?;
        let pairs: Vec<(f64, f64)> = per
            .iter()
            .filter(|q| q.0.stop.is_none())
            .map(|q| (q.0.values[3], q.0.values[2]))
            .collect();
        let warnings = per.iter().filter(|q| q.0.values[7] > 0.0).count();
        reports.push(
            conditional_uniformity("planar.uniformity", &pairs, |u, _| u, &uniformity_thresholds(cfg))?
                .with_value("repair_warnings", warnings as f64),
        );
        let snaps = per.iter().map(|q| q.1.as_str()).collect();
        (per.into_iter().map(|q| q.0).collect(), snaps)
    } else {
        (Vec::new(), String::new())
    };
    if cfg.enabled("symmetry") {
        reports.push(symmetry_harness(cfg, &setup)?);
    }
    if cfg.enabled("flow") {
        reports.push(flow_check(cfg, &setup)?);
    }
    if cfg.enabled("tanaka") {
        reports.push(tanaka_check(cfg)?);
    }
    let columns = vec!["x1", "x2", "area", "area_fraction", "half_length", "local_time", "repairs", "repair_warning"];
    Ok(finish(cfg, columns, rows, reports, snapshots))
}

/// Four copies driven by the axis reflections of one noise path must keep
/// identical, axis-symmetric domains.
fn symmetry_harness(cfg: &ExperimentConfig, setup: &PlanarSetup) -> Result<StatReport> {
    let Params::Planar { flow_steps, flow_dt, .. } = cfg.params else {
        unreachable!("planar params")
    };
    let signs = [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)];
    let mut src = stream(cfg, 0, 2, channel::HARNESS);
    let x0 = sample_uniform_planar(setup.domain.base(), &mut src)?;
    let mut states: Vec<PlanarDualState<f64>> = signs
        .iter()
        .map(|&(sx, sy)| PlanarDualState::new(Vec2::new(sx * x0.x, sy * x0.y), setup.domain.clone(), &setup.params))
        .collect::<Result<_>>()?;
    let sq = flow_dt.sqrt();
    let mut worst: f64 = 0.0;
    let mut steps = 0;
    let mut stop = None;
    'outer: for _ in 0..flow_steps {
        let dx = Vec2::new(src.increment(sq), src.increment(sq));
        for (st, &(sx, sy)) in states.iter_mut().zip(&signs) {
            if let Err(reason) = planar_step(st, Vec2::new(sx * dx.x, sy * dx.y), flow_dt, &setup.params) {
                stop = Some(reason);
                break 'outer;
            }
            worst = worst.max(st.domain.symmetry_defect());
        }
        let reference = states[0].domain.base().nodes();
        for st in &states[1..] {
            for (p, q) in reference.iter().zip(st.domain.base().nodes()) {
                worst = worst.max(p.dist(*q));
            }
        }
        steps += 1;
    }
    let statistic = if stop == Some(StopReason::SymmetryLoss) { f64::INFINITY } else { worst };
    let mut report = StatReport::new("planar.symmetry")
        .with_check(Check::new("defect", statistic, cfg.threshold("symmetry.defect")))
        .with_value("steps", steps as f64);
    if let Some(reason) = stop {
        report = report.with_value(format!("stopped.{}", reason.tag()), 1.0);
    }
    Ok(report)
}

/// Deterministic flow `H = h/2`: convexity until a typed stop, and `x*` nonincreasing.
fn flow_check(cfg: &ExperimentConfig, setup: &PlanarSetup) -> Result<StatReport> {
    let Params::Planar { flow_steps, flow_dt, .. } = cfg.params else {
        unreachable!("planar params")
    };
    let mut d = setup.domain.clone();
    let mut x_star = skeleton_half_length(&d)?;
    let x_star0 = x_star;
    let (mut increase, mut nonconvex, mut steps) = (0.0f64, 0usize, 0usize);
    let mut stop = None;
    for _ in 0..flow_steps {
        match deterministic_flow_step(&d, flow_dt) {
            Ok(next) => d = next,
            Err(reason) => {
                stop = Some(reason);
                break;
            }
        }
        nonconvex += usize::from(check_convex(d.base()).is_err());
        let next = skeleton_half_length(&d)?;
        increase = increase.max(next - x_star);
        x_star = next;
        steps += 1;
    }
    let mut report = StatReport::new("planar.flow")
        .with_check(Check::new("half_length_increase", increase.max(0.0), cfg.threshold("flow.increase")))
        .with_check(Check::new("nonconvex_steps", nonconvex as f64, 0.0))
        .with_value("half_length.initial", x_star0)
        .with_value("half_length.final", x_star)
        .with_value("steps", steps as f64);
    if let Some(reason) = stop {
        report = report.with_value(format!("stopped.{}", reason.tag()), 1.0);
    }
    Ok(report)
}

/// Frozen-ellipse Itô–Tanaka residuals, with the 1D interval ensemble as calibration.
fn tanaka_check(cfg: &ExperimentConfig) -> Result<StatReport> {
    let Params::Planar { a, b, tanaka, .. } = &cfg.params else {
        unreachable!("planar params")
    };
    let n_steps = (tanaka.t_end / tanaka.dt).round() as usize;
    let g = TimeGrid::new(tanaka.t_end, n_steps)?;
    let dt = g.dt();
    let beta = cfg.bandwidth_c * dt.sqrt();
    let domain = SymmetricConvexCurve::new(ellipse(*a, *b, tanaka.nodes)?)?;
    let skeleton = medial_axis(&domain, 129)?;
    let sups = par_replicas(tanaka.replicas, |i| {
        let mut src = stream(cfg, i, 2, channel::TANAKA);
        let x0 = sample_uniform_planar(domain.base(), &mut src)?;
        tanaka_sup_residual(&frozen_tanaka_path(&domain, &skeleton, x0, &g, &mut src, beta)?)
    })?;
    let calib = par_replicas(tanaka.replicas, |i| {
        let mut src = stream(cfg, i, 1, channel::CALIBRATION);
        let x0 = 2.0 * src.uniform::<f64>() - 1.0;
        tanaka_sup_residual(&frozen_interval_tanaka_path(1.0, x0, &g, &mut src, beta)?)
    })?;
    let p95_1d = EmpiricalSample::from_unsorted(calib)?.quantile(0.95);
    let c = cfg.threshold("tanaka.p95") / dt.powf(0.25);
    Ok(tanaka_residual_check("planar.tanaka", &sups, dt, c)?
        .with_value("calibration.p95", p95_1d)
        .with_value("calibration.c", p95_1d / dt.powf(0.25)))
}

/// Errors that are the user's fault rather than the experiment's.
pub fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Parse(_))
}
