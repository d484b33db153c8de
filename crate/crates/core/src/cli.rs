//! Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
//! 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{GeometryError, Result};
use crate::jet::DiffConfig;
use crate::report::{run, Command, ConformalInput, MetricInput, PointSource, RunConfig, Tolerances};
use crate::sampling::Sampler;
use crate::tensor::BundlePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "finsler",
    version,
    about = "Curvature, conformal and warped-product checks for Finsler metrics",
    after_help = "Tolerances: --tol-KEY VALUE, e.g. --tol-einstein 1e-7 or --tol-two-path 1e-3."
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Metric file (JSON).
    #[arg(long, global = true)]
    metric: Option<PathBuf>,
    /// Conformal factor(s) or cylinder case (JSON).
    #[arg(long, global = true)]
    conformal: Option<PathBuf>,
    /// Number of sampled points.
    #[arg(long, global = true, default_value_t = 5)]
    points: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 4)]
    jet_order: usize,
    #[arg(long, global = true, default_value_t = 1e-4)]
    fd_step: f64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Fundamental tensor through Bach tensor at each point.
    Tensors,
    /// R-Einstein residual and Schur gradient.
    CheckEinstein,
    /// Conformal residuals, two-path check and classification.
    Conformal,
    /// Warped-product identities and cylinder cases.
    Warp,
}

/// Pull out `--tol-KEY VALUE` and `--tol-KEY=VALUE` pairs.
fn split_tolerances(args: Vec<OsString>) -> Result<(Vec<OsString>, Vec<(String, f64)>)> {
    let mut rest = Vec::new();
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        let Some(body) = s.strip_prefix("--tol-") else {
            rest.push(a);
            continue;
        };
        let (key, raw) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| GeometryError::Config(format!("{s} needs a value")))?;
                (body.to_string(), v.to_string_lossy().into_owned())
            }
        };
        let v: f64 = raw
            .parse()
            .map_err(|_| GeometryError::Config(format!("{s}: `{raw}` is not a number")))?;
        tols.push((key, v));
    }
    Ok((rest, tols))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GeometryError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| GeometryError::Config(format!("{}: {e}", path.display())))
}

/// A metric file is a metric, or `{"metric": .., "points": [{"x": .., "y": ..}]}`.
fn load_metric(path: &Path) -> Result<(MetricInput, Option<Vec<BundlePoint>>)> {
    let at = |e: GeometryError| GeometryError::Config(format!("{}: {e}", path.display()));
    let mut v = read_json(path)?;
    if let Some(m) = v.get_mut("metric").map(Value::take) {
        let points = match v.get_mut("points").map(Value::take) {
            Some(p) => Some(
                serde_json::from_value(p)
                    .map_err(|e| at(GeometryError::Config(format!("points: {e}"))))?,
            ),
            None => None,
        };
        return Ok((MetricInput::from_value(m).map_err(at)?, points));
    }
    Ok((MetricInput::from_value(v).map_err(at)?, None))
}

fn config(cli: &Cli, tols: &[(String, f64)]) -> Result<RunConfig> {
    let path = cli
        .metric
        .as_ref()
        .ok_or_else(|| GeometryError::Config("--metric FILE is required".into()))?;
    let (metric, explicit) = load_metric(path)?;
    let command = match cli.command {
        Sub::Tensors => Command::Tensors,
        Sub::CheckEinstein => Command::CheckEinstein,
        Sub::Conformal => Command::Conformal,
        Sub::Warp => Command::Warp,
    };
    let mut cfg = RunConfig::new(command, metric);
    if let Some(c) = &cli.conformal {
        cfg.conformal = Some(
            ConformalInput::from_value(read_json(c)?)
                .map_err(|e| GeometryError::Config(format!("{}: {e}", c.display())))?,
        );
    }
    cfg.points = match explicit {
        Some(v) => PointSource::Explicit(v),
        None => PointSource::Sample(Sampler::new(cli.points, cli.seed)),
    };
    cfg.diff = DiffConfig {
        jet_order: cli.jet_order,
        fd_step: cli.fd_step,
        ..DiffConfig::default()
    };
    cfg.diff.validate()?;
    let mut t = Tolerances::default();
    for (k, v) in tols {
        t.set(k, *v)?;
    }
    cfg.tolerances = t;
    Ok(cfg)
}

fn write_out(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| GeometryError::Config(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| GeometryError::Config(e.to_string())),
    }
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let fail = |e: &dyn std::fmt::Display| {
        eprintln!("error: {e}");
        2
    };
    let (args, tols) = match split_tolerances(args.into_iter().map(Into::into).collect()) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match config(&cli, &tols).and_then(|cfg| run(&cfg)) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    if let Err(e) = text.and_then(|t| write_out(&cli, &t)) {
        return fail(&e);
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("check failed: {} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
    }
    if report.pass {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_flags_split() {
        let args = ["finsler", "tensors", "--tol-einstein", "1e-3", "--tol-two-path=2e-4", "--points", "3"];
        let (rest, tols) = split_tolerances(args.iter().map(OsString::from).collect()).unwrap();
        assert_eq!(rest.len(), 4);
        assert_eq!(tols, vec![("einstein".to_string(), 1e-3), ("two-path".to_string(), 2e-4)]);
        assert!(split_tolerances(vec!["--tol-lce".into()]).is_err());
        assert!(split_tolerances(vec!["--tol-lce".into(), "abc".into()]).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(main_with_args(["finsler", "tensors"]), 2);
        assert_eq!(main_with_args(["finsler", "bogus"]), 2);
        assert_eq!(main_with_args(["finsler", "tensors", "--metric", "/nonexistent.json"]), 2);
    }
}
