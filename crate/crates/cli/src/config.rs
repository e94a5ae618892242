//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use dualflow::stats::format_real;
use dualflow::{Error, Result};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Symmetric1d,
    Pitman1d,
    Mirror1d,
    Free1d,
    Disk,
    Annulus,
    Planar,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::Symmetric1d,
        Construction::Pitman1d,
        Construction::Mirror1d,
        Construction::Free1d,
        Construction::Disk,
        Construction::Annulus,
        Construction::Planar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Symmetric1d => "symmetric1d",
            Construction::Pitman1d => "pitman1d",
            Construction::Mirror1d => "mirror1d",
            Construction::Free1d => "free1d",
            Construction::Disk => "disk",
            Construction::Annulus => "annulus",
            Construction::Planar => "planar",
        }
    }

    /// Checks available for this construction, in report order.
    pub fn checks(self) -> &'static [&'static str] {
        match self {
            Construction::Symmetric1d => &["bessel3", "equivalence", "touching"],
            Construction::Pitman1d => &["bessel3"],
            Construction::Mirror1d | Construction::Free1d => &["uniformity"],
            Construction::Disk => &["uniformity", "dynkin"],
            Construction::Annulus => &["uniformity", "rigidity", "dynkin", "regression"],
            Construction::Planar => &["uniformity", "symmetry", "flow", "tanaka"],
        }
    }

    /// Checks enabled when `checks` is absent.
    fn default_checks(self) -> &'static [&'static str] {
        match self {
            Construction::Planar => &["uniformity"],
            c => c.checks(),
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("construction: unknown value {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileName {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl ProfileName {
    pub fn name(self) -> &'static str {
        match self {
            ProfileName::Euclidean => "euclidean",
            ProfileName::Sphere => "sphere",
            ProfileName::Hyperbolic => "hyperbolic",
        }
    }

    pub fn build(self, dimension: usize) -> Result<dualflow::radial::RadialProfile<f64>> {
        use dualflow::radial::RadialProfile;
        match self {
            ProfileName::Euclidean => RadialProfile::euclidean(dimension),
            ProfileName::Sphere => RadialProfile::sphere(dimension),
            ProfileName::Hyperbolic => RadialProfile::hyperbolic(dimension),
        }
    }
}

/// Default thresholds, keyed `<check>.<statistic>`.
const DEFAULT_THRESHOLDS: &[(&str, f64)] = &[
    ("bessel3.ks", 0.01),
    ("equivalence.ks", 0.01),
    ("touching.fraction", 0.01),
    ("uniformity.ks", 0.02),
    ("uniformity.corr", 0.03),
    ("uniformity.strat", 0.05),
    ("rigidity.qv_ratio", 0.05),
    ("rigidity.drift", 0.05),
    ("dynkin.relative", 0.1),
    ("regression.slope", 0.05),
    ("symmetry.defect", 1e-9),
    ("flow.increase", 0.0),
    ("tanaka.p95", 0.05),
];

/// Every key the parser accepts, with its default (`None` = required or optional without default).
const KEYS: &[(&str, Option<&str>)] = &[
    ("construction", None),
    ("seed", Some("0")),
    ("replicas", None),
    ("grid.t_end", None),
    ("grid.n_steps", None),
    ("bandwidth.c", Some("1")),
    ("checks", None),
    ("scheme.failure_ceiling", Some("0.05")),
    ("output.snapshot_stride", Some("0")),
    ("touching.t_min", Some("0.1")),
    ("free.a0", Some("-1")),
    ("free.b0", Some("1")),
    ("profile.kind", Some("euclidean")),
    ("profile.dimension", Some("2")),
    ("disk.radius0", Some("1")),
    ("disk.rho0", None),
    ("annulus.inner0", Some("1")),
    ("annulus.outer0", Some("2")),
    ("annulus.rho0", None),
    ("annulus.collar", Some("0.001")),
    ("planar.a", Some("2")),
    ("planar.b", Some("1")),
    ("planar.nodes", Some("1024")),
    ("planar.k_skel", Some("10")),
    ("planar.flow_steps", Some("200")),
    ("planar.flow_dt", Some("0.0001")),
    ("tanaka.replicas", Some("200")),
    ("tanaka.t_end", Some("0.1")),
    ("tanaka.dt", Some("0.00001")),
    ("tanaka.nodes", Some("1024")),
];

/// Parsed `key = value` pairs in file order, with duplicates rejected.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", no + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!("{k}: duplicate key")));
            }
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tanaka {
    pub replicas: usize,
    pub t_end: f64,
    pub dt: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    OneD,
    Symmetric { t_min: f64 },
    Free { a0: f64, b0: f64 },
    Disk { profile: ProfileName, dimension: usize, radius0: f64, rho0: Option<f64> },
    Annulus { profile: ProfileName, inner0: f64, outer0: f64, rho0: Option<f64>, collar: f64 },
    Planar { a: f64, b: f64, nodes: usize, k_skel: usize, flow_steps: usize, flow_dt: f64, tanaka: Tanaka },
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub construction: Construction,
    pub seed: u64,
    pub replicas: usize,
    pub t_end: f64,
    pub n_steps: usize,
    pub bandwidth_c: f64,
    pub checks: Vec<String>,
    pub thresholds: BTreeMap<String, f64>,
    pub failure_ceiling: f64,
    pub snapshot_stride: usize,
    pub params: Params,
}

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn text(&self, key: &str) -> Result<Option<&str>> {
        let default = KEYS
            .iter()
            .find(|(k, _)| *k == key)
            .unwrap_or_else(|| panic!("undeclared key {key}"))
            .1;
        Ok(self.raw.get(key).or(default))
    }

    fn parsed<V: FromStr>(&self, key: &str) -> Result<Option<V>> {
        match self.text(key)? {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("{key}: cannot parse {s:?}"))),
        }
    }

    fn required<V: FromStr>(&self, key: &str) -> Result<V> {
        self.parsed(key)?
            .ok_or_else(|| Error::Config(format!("{key}: required")))
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v: f64 = self.required(key)?;
        positive(key, v)
    }

    fn count(&self, key: &str) -> Result<usize> {
        let v: usize = self.required(key)?;
        if v == 0 {
            return Err(Error::Config(format!("{key}: must be positive")));
        }
        Ok(v)
    }

    fn optional_positive(&self, key: &str) -> Result<Option<f64>> {
        self.parsed::<f64>(key)?.map(|v| positive(key, v)).transpose()
    }
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Config(format!("{key}: must be positive and finite, got {v}")));
    }
    Ok(v)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    /// Validates every field before anything runs; the error names the first bad field.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        for key in raw.entries.keys() {
            let known = KEYS.iter().any(|(k, _)| k == key)
                || key
                    .strip_prefix("threshold.")
                    .is_some_and(|t| DEFAULT_THRESHOLDS.iter().any(|(d, _)| *d == t));
            if !known {
                return Err(Error::Config(format!("{key}: unknown key")));
            }
        }
        let r = Reader { raw };
        let construction: Construction = r.required("construction")?;
        let seed: u64 = r.required("seed")?;
        let replicas = r.count("replicas")?;
        let t_end = r.positive("grid.t_end")?;
        let n_steps = r.count("grid.n_steps")?;
        let bandwidth_c = r.positive("bandwidth.c")?;
        let checks = match r.text("checks")? {
            None => construction.default_checks().iter().map(|s| s.to_string()).collect(),
            Some(list) => {
                let mut out = Vec::new();
                for c in list.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                    if !construction.checks().contains(&c) {
                        return Err(Error::Config(format!(
                            "checks: {c:?} is not available for {}",
                            construction.name()
                        )));
                    }
                    if !out.iter().any(|o: &String| o == c) {
                        out.push(c.to_string());
                    }
                }
                out
            }
        };
        let mut thresholds = BTreeMap::new();
        for &(k, v) in DEFAULT_THRESHOLDS {
            let key = format!("threshold.{k}");
            let v = match raw.get(&key) {
                None => v,
                Some(s) => {
                    let x: f64 = s.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {s:?}")))?;
                    if !(x.is_finite() && x >= 0.0) {
                        return Err(Error::Config(format!("{key}: must be nonnegative and finite")));
                    }
                    x
                }
            };
            thresholds.insert(k.to_string(), v);
        }
        let failure_ceiling: f64 = r.required("scheme.failure_ceiling")?;
        if !(0.0..=1.0).contains(&failure_ceiling) {
            return Err(Error::Config("scheme.failure_ceiling: must lie in [0, 1]".into()));
        }
        let snapshot_stride: usize = r.required("output.snapshot_stride")?;

        let profile = |r: &Reader| -> Result<(ProfileName, usize)> {
            let kind = match r.text("profile.kind")?.unwrap_or_default() {
                "euclidean" => ProfileName::Euclidean,
                "sphere" => ProfileName::Sphere,
                "hyperbolic" => ProfileName::Hyperbolic,
                other => return Err(Error::Config(format!("profile.kind: unknown value {other:?}"))),
            };
            let d: usize = r.required("profile.dimension")?;
            if d < 2 {
                return Err(Error::Config(format!("profile.dimension: must be at least 2, got {d}")));
            }
            Ok((kind, d))
        };

        let params = match construction {
            Construction::Pitman1d | Construction::Mirror1d => Params::OneD,
            Construction::Symmetric1d => {
                let t_min = r.positive("touching.t_min")?;
                if t_min >= t_end {
                    return Err(Error::Config("touching.t_min: must be below grid.t_end".into()));
                }
                Params::Symmetric { t_min }
            }
            Construction::Free1d => {
                let a0: f64 = r.required("free.a0")?;
                let b0: f64 = r.required("free.b0")?;
                if !(a0.is_finite() && b0.is_finite() && a0 < b0) {
                    return Err(Error::Config(format!("free.b0: need free.a0 < free.b0, got {a0} and {b0}")));
                }
                Params::Free { a0, b0 }
            }
            Construction::Disk => {
                let (profile, dimension) = profile(&r)?;
                let radius0 = r.positive("disk.radius0")?;
                let rho0 = r.optional_positive("disk.rho0")?;
                let r_max = profile.build(dimension)?.r_max();
                if radius0 >= r_max {
                    return Err(Error::Config(format!("disk.radius0: must be below the profile's r_max = {r_max}")));
                }
                if let Some(rho) = rho0 {
                    if rho >= radius0 {
                        return Err(Error::Config(format!(
                            "disk.rho0: ordering precondition 0 < rho0 < radius0 violated ({rho} >= {radius0})"
                        )));
                    }
                }
                Params::Disk { profile, dimension, radius0, rho0 }
            }
            Construction::Annulus => {
                let (profile, dimension) = profile(&r)?;
                if dimension != 2 {
                    return Err(Error::Config("profile.dimension: the annulus dual is two-dimensional".into()));
                }
                let inner0 = r.positive("annulus.inner0")?;
                let outer0 = r.positive("annulus.outer0")?;
                if inner0 >= outer0 {
                    return Err(Error::Config(format!(
                        "annulus.outer0: ordering precondition inner0 < outer0 violated ({inner0} >= {outer0})"
                    )));
                }
                if outer0 >= profile.build(2)?.r_max() {
                    return Err(Error::Config("annulus.outer0: must be below the profile's r_max".into()));
                }
                let rho0 = r.optional_positive("annulus.rho0")?;
                if let Some(rho) = rho0 {
                    if !(inner0 < rho && rho < outer0) {
                        return Err(Error::Config(format!(
                            "annulus.rho0: ordering precondition inner0 < rho0 < outer0 violated ({rho})"
                        )));
                    }
                }
                let collar = r.positive("annulus.collar")?;
                Params::Annulus { profile, inner0, outer0, rho0, collar }
            }
            Construction::Planar => {
                let a = r.positive("planar.a")?;
                let b = r.positive("planar.b")?;
                if a <= b {
                    return Err(Error::Config(format!(
                        "planar.b: need planar.a > planar.b for a segment skeleton, got {a} and {b}"
                    )));
                }
                let nodes = r.count("planar.nodes")?;
                if nodes < 16 || nodes % 4 != 0 {
                    return Err(Error::Config(format!("planar.nodes: need a multiple of 4 and at least 16, got {nodes}")));
                }
                let tanaka_nodes = r.count("tanaka.nodes")?;
                if tanaka_nodes < 16 || tanaka_nodes % 4 != 0 {
                    return Err(Error::Config(format!(
                        "tanaka.nodes: need a multiple of 4 and at least 16, got {tanaka_nodes}"
                    )));
                }
                let tanaka = Tanaka {
                    replicas: r.count("tanaka.replicas")?,
                    t_end: r.positive("tanaka.t_end")?,
                    dt: r.positive("tanaka.dt")?,
                    nodes: tanaka_nodes,
                };
                if tanaka.dt > tanaka.t_end {
                    return Err(Error::Config("tanaka.dt: must not exceed tanaka.t_end".into()));
                }
                Params::Planar {
                    a,
                    b,
                    nodes,
                    k_skel: r.count("planar.k_skel")?,
                    flow_steps: r.count("planar.flow_steps")?,
                    flow_dt: r.positive("planar.flow_dt")?,
                    tanaka,
                }
            }
        };
        Ok(Self {
            construction,
            seed,
            replicas,
            t_end,
            n_steps,
            bandwidth_c,
            checks,
            thresholds,
            failure_ceiling,
            snapshot_stride,
            params,
        })
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    /// Occupation bandwidth `c·√dt`.
    pub fn beta(&self) -> f64 {
        self.bandwidth_c * self.dt().sqrt()
    }

    pub fn threshold(&self, key: &str) -> f64 {
        self.thresholds[key]
    }

    pub fn enabled(&self, check: &str) -> bool {
        self.checks.iter().any(|c| c == check)
    }

    /// Fully resolved configuration; parsing it yields an identical config.
    pub fn canonical(&self) -> String {
        let mut kv: Vec<(String, String)> = vec![
            ("construction".into(), self.construction.name().into()),
            ("seed".into(), self.seed.to_string()),
            ("replicas".into(), self.replicas.to_string()),
            ("grid.t_end".into(), format_real(self.t_end)),
            ("grid.n_steps".into(), self.n_steps.to_string()),
            ("bandwidth.c".into(), format_real(self.bandwidth_c)),
            ("checks".into(), self.checks.join(",")),
            ("scheme.failure_ceiling".into(), format_real(self.failure_ceiling)),
            ("output.snapshot_stride".into(), self.snapshot_stride.to_string()),
        ];
        for (k, v) in &self.thresholds {
            kv.push((format!("threshold.{k}"), format_real(*v)));
        }
        match &self.params {
            Params::OneD => {}
            Params::Symmetric { t_min } => kv.push(("touching.t_min".into(), format_real(*t_min))),
            Params::Free { a0, b0 } => {
                kv.push(("free.a0".into(), format_real(*a0)));
                kv.push(("free.b0".into(), format_real(*b0)));
            }
            Params::Disk { profile, dimension, radius0, rho0 } => {
                kv.push(("profile.kind".into(), profile.name().into()));
                kv.push(("profile.dimension".into(), dimension.to_string()));
                kv.push(("disk.radius0".into(), format_real(*radius0)));
                if let Some(r) = rho0 {
                    kv.push(("disk.rho0".into(), format_real(*r)));
                }
            }
            Params::Annulus { profile, inner0, outer0, rho0, collar } => {
                kv.push(("profile.kind".into(), profile.name().into()));
                kv.push(("profile.dimension".into(), "2".into()));
                kv.push(("annulus.inner0".into(), format_real(*inner0)));
                kv.push(("annulus.outer0".into(), format_real(*outer0)));
                if let Some(r) = rho0 {
                    kv.push(("annulus.rho0".into(), format_real(*r)));
                }
                kv.push(("annulus.collar".into(), format_real(*collar)));
            }
            Params::Planar { a, b, nodes, k_skel, flow_steps, flow_dt, tanaka } => {
                kv.push(("planar.a".into(), format_real(*a)));
                kv.push(("planar.b".into(), format_real(*b)));
                kv.push(("planar.nodes".into(), nodes.to_string()));
                kv.push(("planar.k_skel".into(), k_skel.to_string()));
                kv.push(("planar.flow_steps".into(), flow_steps.to_string()));
                kv.push(("planar.flow_dt".into(), format_real(*flow_dt)));
                kv.push(("tanaka.replicas".into(), tanaka.replicas.to_string()));
                kv.push(("tanaka.t_end".into(), format_real(tanaka.t_end)));
                kv.push(("tanaka.dt".into(), format_real(tanaka.dt)));
                kv.push(("tanaka.nodes".into(), tanaka.nodes.to_string()));
            }
        }
        kv.sort();
        let mut s = String::new();
        for (k, v) in kv {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// SHA-256 of the canonical configuration and the RNG pipeline.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical().as_bytes());
        h.update(dualflow::sde::RNG_ALGORITHM.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Comment block placed at the top of every output file.
    pub fn header(&self) -> String {
        let mut s = format!(
            "# dualflow {}\n# fingerprint = {}\n# rng = {}\n",
            env!("CARGO_PKG_VERSION"),
            self.fingerprint(),
            dualflow::sde::RNG_ALGORITHM
        );
        for line in self.canonical().lines() {
            let _ = writeln!(s, "# config {line}");
        }
        s
    }

    pub fn stat_fingerprint(&self) -> dualflow::stats::Fingerprint {
        dualflow::stats::Fingerprint {
            seed: self.seed,
            dt: self.dt(),
            replicas: self.replicas,
            bandwidth: self.beta(),
        }
    }
}

/// Recovers the configuration embedded in an output header.
pub fn config_from_header(text: &str) -> Result<ExperimentConfig> {
    let body: String = text
        .lines()
        .filter_map(|l| l.strip_prefix("# config "))
        .map(|l| format!("{l}\n"))
        .collect();
    if body.is_empty() {
        return Err(Error::Config("no embedded configuration found".into()));
    }
    ExperimentConfig::parse(&body)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PITMAN: &str = "construction = pitman1d\nreplicas = 10\ngrid.t_end = 1\ngrid.n_steps = 100\nseed = 7\n";

    #[test]
    fn minimal_config() {
        let c = ExperimentConfig::parse(PITMAN).unwrap();
        assert_eq!(c.construction, Construction::Pitman1d);
        assert_eq!(c.seed, 7);
        assert!((c.dt() - 0.01).abs() < 1e-15);
        assert_eq!(c.checks, vec!["bessel3"]);
        assert_eq!(c.threshold("bessel3.ks"), 0.01);
    }

    #[test]
    fn canonical_round_trip() {
        for text in [
            PITMAN.to_string(),
            "construction = disk\nreplicas = 5\ngrid.t_end = 0.5\ngrid.n_steps = 10\ndisk.rho0 = 0.3\nthreshold.uniformity.ks = 0.5\n".into(),
            "construction = planar\nreplicas = 5\ngrid.t_end = 0.5\ngrid.n_steps = 10\nchecks = flow,tanaka\n".into(),
            "construction = annulus\nreplicas = 5\ngrid.t_end = 0.1\ngrid.n_steps = 10\nprofile.kind = sphere\n".into(),
        ] {
            let c = ExperimentConfig::parse(&text).unwrap();
            let again = ExperimentConfig::parse(&c.canonical()).unwrap();
            assert_eq!(c, again);
            assert_eq!(config_from_header(&c.header()).unwrap(), c);
            assert_eq!(c.fingerprint(), again.fingerprint());
        }
    }

    #[test]
    fn seed_changes_fingerprint() {
        let a = ExperimentConfig::parse(PITMAN).unwrap();
        let mut raw = RawConfig::parse(PITMAN).unwrap();
        raw.set("seed", "8");
        let b = ExperimentConfig::from_raw(&raw).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    fn err(text: &str) -> String {
        match ExperimentConfig::parse(text) {
            Err(Error::Config(m)) => m,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn first_failing_field_is_named() {
        assert!(err("replicas = 3\n").starts_with("construction"));
        assert!(err("construction = cube\n").contains("construction"));
        assert!(err("construction = pitman1d\nreplicas = 0\ngrid.t_end = 1\ngrid.n_steps = 1\n").starts_with("replicas"));
        assert!(err("construction = pitman1d\nreplicas = 2\ngrid.t_end = -1\ngrid.n_steps = 1\n").starts_with("grid.t_end"));
        assert!(err(&format!("{PITMAN}bogus = 1\n")).starts_with("bogus"));
        assert!(err(&format!("{PITMAN}seed = 1\n")).contains("duplicate"));
        assert!(err(&format!("{PITMAN}checks = dynkin\n")).starts_with("checks"));
        assert!(err("construction = pitman1d\nnot a pair\n").contains("line 2"));
    }

    #[test]
    fn disk_ordering_precondition() {
        let m = err("construction = disk\nreplicas = 2\ngrid.t_end = 1\ngrid.n_steps = 1\ndisk.rho0 = 1.5\n");
        assert!(m.starts_with("disk.rho0") && m.contains("ordering"), "{m}");
    }

    #[test]
    fn annulus_and_planar_validation() {
        let base = "replicas = 2\ngrid.t_end = 1\ngrid.n_steps = 1\n";
        assert!(err(&format!("construction = annulus\n{base}annulus.inner0 = 3\n")).starts_with("annulus.outer0"));
        assert!(err(&format!("construction = annulus\n{base}profile.dimension = 3\n")).starts_with("profile.dimension"));
        assert!(err(&format!("construction = planar\n{base}planar.b = 3\n")).starts_with("planar.b"));
        assert!(err(&format!("construction = planar\n{base}planar.nodes = 30\n")).starts_with("planar.nodes"));
        assert!(err(&format!("construction = free1d\n{base}free.a0 = 2\n")).starts_with("free.b0"));
    }
}
