use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The input carries no information, e.g. a frozen domain.
    Degenerate,
}

impl Verdict {
    /// `Pass` iff `statistic <= threshold`; NaN fails.
    pub fn compare(statistic: f64, threshold: f64) -> Self {
        if statistic <= threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Degenerate => "degenerate",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "degenerate" => Ok(Verdict::Degenerate),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl Check {
    pub fn new(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            verdict: Verdict::compare(statistic, threshold),
        }
    }

    pub fn degenerate(name: impl Into<String>, threshold: f64) -> Self {
        Self {
            name: name.into(),
            statistic: f64::NAN,
            threshold,
            verdict: Verdict::Degenerate,
        }
    }
}

/// Parameters that reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub seed: u64,
    pub dt: f64,
    pub replicas: usize,
    pub bandwidth: f64,
}

/// Outcome of one verification, serialized as `key = value` lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StatReport {
    pub test: String,
    pub checks: Vec<Check>,
    /// Replica counts keyed by stop reason.
    pub stops: BTreeMap<String, usize>,
    /// Informational values that do not enter the verdict.
    pub values: Vec<(String, f64)>,
    pub fingerprint: Option<Fingerprint>,
}

/// Seventeen significant digits, which round-trips every `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl StatReport {
    pub fn new(test: impl Into<String>) -> Self {
        Self {
            test: test.into(),
            ..Self::default()
        }
    }

    pub fn with_check(mut self, check: Check) -> Self {
        self.checks.push(check);
        self
    }

    pub fn with_value(mut self, key: impl Into<String>, value: f64) -> Self {
        self.values.push((key.into(), value));
        self
    }

    pub fn with_stops(mut self, stops: BTreeMap<String, usize>) -> Self {
        self.stops = stops;
        self
    }

    pub fn with_fingerprint(mut self, fp: Fingerprint) -> Self {
        self.fingerprint = Some(fp);
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Fails if any check fails; degenerate if some check is degenerate and none fails.
    pub fn verdict(&self) -> Verdict {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.checks.iter().any(|c| c.verdict == Verdict::Degenerate) {
            Verdict::Degenerate
        } else {
            Verdict::Pass
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "test = {}", self.test);
        let _ = writeln!(s, "verdict = {}", self.verdict());
        if let Some(fp) = &self.fingerprint {
            let _ = writeln!(s, "fingerprint.seed = {}", fp.seed);
            let _ = writeln!(s, "fingerprint.dt = {}", format_real(fp.dt));
            let _ = writeln!(s, "fingerprint.replicas = {}", fp.replicas);
            let _ = writeln!(s, "fingerprint.bandwidth = {}", format_real(fp.bandwidth));
        }
        for c in &self.checks {
            let _ = writeln!(s, "check.{}.statistic = {}", c.name, format_real(c.statistic));
            let _ = writeln!(s, "check.{}.threshold = {}", c.name, format_real(c.threshold));
            let _ = writeln!(s, "check.{}.verdict = {}", c.name, c.verdict);
        }
        for (k, v) in &self.stops {
            let _ = writeln!(s, "stops.{k} = {v}");
        }
        for (k, v) in &self.values {
            let _ = writeln!(s, "value.{k} = {}", format_real(*v));
        }
        s
    }

    /// Parses the output of [`StatReport::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut r = StatReport::default();
        let mut fp: BTreeMap<String, String> = BTreeMap::new();
        let mut verdict = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", ln + 1)))?;
            let real = |v: &str| -> Result<f64> {
                v.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))
            };
            if k == "test" {
                r.test = v.to_string();
            } else if k == "verdict" {
                verdict = Some(Verdict::parse(v)?);
            } else if let Some(f) = k.strip_prefix("fingerprint.") {
                fp.insert(f.to_string(), v.to_string());
            } else if let Some(rest) = k.strip_prefix("check.") {
                let (name, field) = rest
                    .rsplit_once('.')
                    .ok_or_else(|| Error::Parse(format!("line {}: bad check key", ln + 1)))?;
                if r.checks.last().map(|c| c.name.as_str()) != Some(name) {
                    r.checks.push(Check::degenerate(name, f64::NAN));
                }
                let c = r.checks.last_mut().expect("just pushed");
                match field {
                    "statistic" => c.statistic = real(v)?,
                    "threshold" => c.threshold = real(v)?,
                    "verdict" => c.verdict = Verdict::parse(v)?,
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: unknown check field {other}",
                            ln + 1
                        )))
                    }
                }
            } else if let Some(reason) = k.strip_prefix("stops.") {
                let n = v
                    .parse()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
                r.stops.insert(reason.to_string(), n);
            } else if let Some(key) = k.strip_prefix("value.") {
                r.values.push((key.to_string(), real(v)?));
            } else {
                return Err(Error::Parse(format!("line {}: unknown key {k}", ln + 1)));
            }
        }
        if !fp.is_empty() {
            let get = |key: &str| {
                fp.get(key)
                    .ok_or_else(|| Error::Parse(format!("fingerprint.{key} missing")))
            };
            let perr = |e: String| Error::Parse(e);
            r.fingerprint = Some(Fingerprint {
                seed: get("seed")?.parse().map_err(|e| perr(format!("{e}")))?,
                dt: get("dt")?.parse().map_err(|e| perr(format!("{e}")))?,
                replicas: get("replicas")?.parse().map_err(|e| perr(format!("{e}")))?,
                bandwidth: get("bandwidth")?
                    .parse()
                    .map_err(|e| perr(format!("{e}")))?,
            });
        }
        if r.test.is_empty() {
            return Err(Error::Parse("report has no test name".into()));
        }
        if let Some(v) = verdict {
            if v != r.verdict() {
                return Err(Error::Parse(format!(
                    "report {} declares verdict {v} but its checks give {}",
                    r.test,
                    r.verdict()
                )));
            }
        }
        Ok(r)
    }
}

/// Splits a file holding several reports separated by blank lines.
pub fn parse_reports(text: &str) -> Result<Vec<StatReport>> {
    let mut out = Vec::new();
    let mut block = String::new();
    for line in text.lines().chain(std::iter::once("")) {
        if line.trim().is_empty() {
            if block
                .lines()
                .any(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            {
                out.push(StatReport::from_text(&block)?);
            }
            block.clear();
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StatReport {
        let mut stops = BTreeMap::new();
        stops.insert("collar".to_string(), 3);
        StatReport::new("disk-intertwining")
            .with_check(Check::new("ks", 0.0125, 0.02))
            .with_check(Check::new("corr", 0.1, 0.03))
            .with_stops(stops)
            .with_value("survivors", 9997.0)
            .with_fingerprint(Fingerprint {
                seed: 7,
                dt: 1e-4,
                replicas: 10_000,
                bandwidth: 1.0,
            })
    }

    #[test]
    fn verdict_rule() {
        assert_eq!(Verdict::compare(0.02, 0.02), Verdict::Pass);
        assert_eq!(Verdict::compare(f64::NAN, 1.0), Verdict::Fail);
        assert_eq!(sample().verdict(), Verdict::Fail);
        let r = StatReport::new("x")
            .with_check(Check::new("a", 0.0, 1.0))
            .with_check(Check::degenerate("b", 1.0));
        assert_eq!(r.verdict(), Verdict::Degenerate);
    }

    #[test]
    fn golden_text() {
        let expect = "test = disk-intertwining
verdict = fail
fingerprint.seed = 7
fingerprint.dt = 1.0000000000000000e-4
fingerprint.replicas = 10000
fingerprint.bandwidth = 1.0000000000000000e0
check.ks.statistic = 1.2500000000000001e-2
check.ks.threshold = 2.0000000000000000e-2
check.ks.verdict = pass
check.corr.statistic = 1.0000000000000001e-1
check.corr.threshold = 2.9999999999999999e-2
check.corr.verdict = fail
stops.collar = 3
value.survivors = 9.9970000000000000e3
";
        assert_eq!(sample().to_text(), expect);
    }

    #[test]
    fn text_round_trip() {
        let r = sample();
        assert_eq!(StatReport::from_text(&r.to_text()).unwrap(), r);
        let two = format!("{}\n{}", r.to_text(), StatReport::new("empty").to_text());
        let parsed = parse_reports(&two).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].test, "empty");
    }

    #[test]
    fn tampered_verdict_rejected() {
        let text = sample()
            .to_text()
            .replacen("\nverdict = fail\n", "\nverdict = pass\n", 1);
        assert!(StatReport::from_text(&text).is_err());
    }
}
