//! Argument handling and exit codes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use dualflow::geometry::{CorpusShape, TestFunction};
use dualflow::stats::{parse_reports, StatReport, Verdict};
use dualflow::{Error, Result};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, RawConfig};
use crate::experiment;
use crate::geometry_check::{check_shape, ShapeSource};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dualflow", version, about = "Simulate and verify intertwined dual processes")]
struct Cli {
    /// Worker threads (falls back to DUALFLOW_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Stokes identity, tube area and skeleton motion on a shape.
    GeometryCheck {
        /// Corpus shape name or path to a curve file; all corpus shapes if omitted.
        #[arg(long)]
        shape: Option<String>,
        /// Test function name; all if omitted.
        #[arg(long)]
        g: Option<String>,
        /// Nodes per boundary component.
        #[arg(long, default_value_t = 2048)]
        nodes: usize,
    },
    /// Summarize a report file or an output directory.
    Report { path: PathBuf },
}

/// Outcome of a command: exit status and text for stdout.
struct Done {
    status: i32,
    stdout: String,
}

/// Parses `args` (including the program name), runs the command and returns the exit status.
pub fn main_with(args: impl IntoIterator<Item = OsString>, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = write!(if e.use_stderr() { stderr as &mut dyn Write } else { stdout as &mut dyn Write }, "{e}");
            return code;
        }
    };
    match dispatch(cli) {
        Ok(done) => {
            let _ = stdout.write_all(done.stdout.as_bytes());
            done.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "dualflow: {e}");
            if experiment::is_config_error(&e) { EXIT_CONFIG } else { EXIT_FAIL }
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return positive_threads("--threads", &n.to_string());
    }
    match std::env::var("DUALFLOW_THREADS") {
        Ok(v) if !v.trim().is_empty() => positive_threads("DUALFLOW_THREADS", v.trim()),
        _ => Ok(None),
    }
}

fn positive_threads(source: &str, v: &str) -> Result<Option<usize>> {
    match v.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(Error::Config(format!("{source}: expected a positive integer, got {v:?}"))),
    }
}

fn dispatch(cli: Cli) -> Result<Done> {
    let threads = thread_count(cli.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("--threads: {e}")))?;
    match cli.command {
        Command::Run { config, seed } => pool.install(|| run(&config, seed, cli.out.as_deref())),
        Command::GeometryCheck { shape, g, nodes } => {
            pool.install(|| geometry(shape.as_deref(), g.as_deref(), nodes, cli.out.as_deref()))
        }
        Command::Report { path } => report(&path),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::write(dir.join(name), contents).map_err(|e| Error::Config(format!("--out: cannot write {name}: {e}")))
}

fn prepare_out(out: Option<&Path>) -> Result<Option<&Path>> {
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::Config(format!("--out: cannot create {}: {e}", dir.display())))?;
    }
    Ok(out)
}

fn verdict_status(reports: &[StatReport]) -> i32 {
    if reports.iter().all(|r| r.verdict() == Verdict::Pass) { EXIT_PASS } else { EXIT_FAIL }
}

fn join_reports(reports: &[StatReport]) -> String {
    reports.iter().map(StatReport::to_text).collect::<Vec<_>>().join("\n")
}

fn run(config: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<Done> {
    let text = fs::read_to_string(config)
        .map_err(|e| Error::Config(format!("--config: cannot read {}: {e}", config.display())))?;
    let mut raw = RawConfig::parse(&text)?;
    if let Some(s) = seed {
        raw.set("seed", s.to_string());
    }
    let cfg = ExperimentConfig::from_raw(&raw)?;
    let out = prepare_out(out)?;
    let outcome = experiment::run(&cfg)?;
    let header = cfg.header();
    let mut summary = format!("{header}{}", outcome.report_text());
    let failures = outcome.scheme_failures();
    let passed = outcome.passed(&cfg);
    if failures as f64 > cfg.failure_ceiling * outcome.rows.len() as f64 {
        summary.push_str(&format!(
            "# scheme failures {failures} of {} exceed the ceiling {}\n",
            outcome.rows.len(),
            cfg.failure_ceiling
        ));
    }
    if let Some(dir) = out {
        write_file(dir, "config.txt", &cfg.canonical())?;
        write_file(dir, "replicas.tsv", &format!("{header}{}", outcome.replicas_tsv()))?;
        write_file(dir, "report.txt", &summary)?;
        if !outcome.snapshots.is_empty() {
            write_file(dir, "snapshots.txt", &format!("{header}{}", outcome.snapshots))?;
        }
    }
    Ok(Done { status: if passed { EXIT_PASS } else { EXIT_FAIL }, stdout: summary })
}

fn geometry(shape: Option<&str>, g: Option<&str>, nodes: usize, out: Option<&Path>) -> Result<Done> {
    if nodes < 16 || nodes % 4 != 0 {
        return Err(Error::Config(format!("--nodes: need a multiple of 4 and at least 16, got {nodes}")));
    }
    let shapes = match shape {
        Some(s) => vec![ShapeSource::resolve(s)?],
        None => CorpusShape::ALL.into_iter().map(ShapeSource::Corpus).collect(),
    };
    let functions = match g {
        Some(name) => vec![TestFunction::by_name(name).map_err(|_| Error::Config(format!("--g: unknown test function {name:?}")))?],
        None => TestFunction::ALL.to_vec(),
    };
    let reports = shapes
        .iter()
        .map(|s| check_shape(s, &functions, nodes))
        .collect::<Result<Vec<_>>>()?;
    let args = format!(
        "geometry-check shape={} g={} nodes={nodes}",
        shape.unwrap_or("corpus"),
        g.unwrap_or("all")
    );
    let digest: String = Sha256::digest(args.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    let text = format!(
        "# dualflow {}\n# fingerprint = {digest}\n# args {args}\n{}",
        env!("CARGO_PKG_VERSION"),
        join_reports(&reports)
    );
    if let Some(dir) = prepare_out(out)? {
        write_file(dir, "geometry.txt", &text)?;
    }
    Ok(Done { status: verdict_status(&reports), stdout: text })
}

fn report(path: &Path) -> Result<Done> {
    let file = if path.is_dir() { path.join("report.txt") } else { path.to_path_buf() };
    let text =
        fs::read_to_string(&file).map_err(|e| Error::Config(format!("report: cannot read {}: {e}", file.display())))?;
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let reports = parse_reports(&body).map_err(|e| Error::Config(format!("report: {e}")))?;
    let mut s = String::new();
    for r in &reports {
        s.push_str(&format!("{:<40} {}\n", r.test, r.verdict()));
        for c in &r.checks {
            s.push_str(&format!("  {:<38} {} (statistic {:e}, threshold {:e})\n", c.name, c.verdict, c.statistic, c.threshold));
        }
    }
    Ok(Done { status: verdict_status(&reports), stdout: s })
}
