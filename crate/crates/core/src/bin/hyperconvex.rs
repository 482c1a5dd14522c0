use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperconvex::bundle::{chart_convex, chart_convex_inv, ChartTriple};
use hyperconvex::convex::{metric_projection, vector};
use hyperconvex::grassmann::{chart_flat, chart_flat_inv, gap};
use hyperconvex::hypermetrics::{attouch_wets, aw_origin, hausdorff, AWParams};
use hyperconvex::random::{random_instance, GeneratorKind};
use hyperconvex::suites::run_suite;
use hyperconvex::{ConvexSet, HyperError, Interval, SetDocument, Subspace, ToleranceConfig, Vector};

#[derive(Parser)]
#[command(
    name = "hyperconvex",
    version,
    about = "Distances and charts for finite-dimensional convex sets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two sets.
    Dist {
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        a: PathBuf,
        b: PathBuf,
    },
    /// Nearest point of a set.
    Project {
        set: PathBuf,
        /// Comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Local trivialization charts around W.
    Chart {
        #[arg(value_enum)]
        kind: ChartKind,
        #[arg(long)]
        w: PathBuf,
        #[command(flatten)]
        dir: ChartDir,
    },
    /// Run a randomized property suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Random set document.
    Gen {
        #[arg(long)]
        kind: GeneratorKind,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Hausdorff,
    Aw,
    AwOrigin,
    Gap,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartKind {
    Flat,
    Convex,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ChartDir {
    /// V.json OMEGA.json, plus A.json for convex charts.
    #[arg(long, num_args = 2..=3, value_names = ["V", "OMEGA", "A"])]
    forward: Option<Vec<PathBuf>>,
    #[arg(long)]
    inverse: Option<PathBuf>,
}

/// Exit code 2 for anything wrong with the input, 1 otherwise.
fn exit_for(e: &HyperError) -> u8 {
    match e {
        HyperError::Uncertified { .. } | HyperError::NonConvergence { .. } => 1,
        _ => 2,
    }
}

fn load(path: &Path, tol: &ToleranceConfig) -> Result<ConvexSet, HyperError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| HyperError::InvalidArgument(format!("{}: {e}", path.display())))?;
    hyperconvex::parse_set(&text, tol)
}

fn subspace(set: ConvexSet, what: &str) -> Result<Subspace, HyperError> {
    match set {
        ConvexSet::Subspace(s) => Ok(s),
        other => Err(HyperError::InvalidArgument(format!(
            "{what} must be a subspace, got a {}",
            other.kind()
        ))),
    }
}

/// A point is either a bare coordinate array or a one-point polytope.
fn load_point(path: &Path, tol: &ToleranceConfig) -> Result<Vector, HyperError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| HyperError::InvalidArgument(format!("{}: {e}", path.display())))?;
    if let Ok(xs) = serde_json::from_str::<Vec<f64>>(&text) {
        return Ok(vector(&xs));
    }
    match hyperconvex::parse_set(&text, tol)? {
        ConvexSet::Polytope(p) if p.points().len() == 1 => Ok(p.points()[0].clone()),
        _ => Err(HyperError::Schema(format!("{}: expected a point", path.display()))),
    }
}

fn interval(i: Interval) -> Value {
    json!({ "lo": i.lo, "hi": i.hi })
}

fn doc(set: &ConvexSet) -> Value {
    serde_json::to_value(SetDocument::from_set(set)).expect("documents serialize")
}

fn run(cmd: Cmd, tol: &ToleranceConfig) -> Result<(Value, u8), HyperError> {
    let out = match cmd {
        Cmd::Dist { metric, eps, a, b } => {
            let (a, b) = (load(&a, tol)?, load(&b, tol)?);
            match metric {
                Metric::Hausdorff => match (&a, &b) {
                    (ConvexSet::Polytope(p), ConvexSet::Polytope(q)) => json!({ "value": hausdorff(p, q, tol)? }),
                    _ => return Err(HyperError::InvalidArgument("hausdorff needs two polytopes".into())),
                },
                Metric::Aw => interval(attouch_wets(&a, &b, &AWParams::new(eps), tol)?),
                Metric::AwOrigin => interval(aw_origin(&a, &b, &AWParams::new(eps), tol)?),
                Metric::Gap => json!({ "value": gap(&subspace(a, "A")?, &subspace(b, "B")?)? }),
            }
        }
        Cmd::Project { set, point } => {
            let set = load(&set, tol)?;
            let xs = point
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| HyperError::InvalidArgument(format!("--point: {e}")))?;
            let p = metric_projection(&set, &vector(&xs), tol)?;
            json!({ "point": p.point.as_slice(), "dist": p.dist })
        }
        Cmd::Chart { kind, w, dir } => {
            let w = subspace(load(&w, tol)?, "W")?;
            match (kind, dir.forward, dir.inverse) {
                (ChartKind::Flat, Some(f), None) if f.len() == 2 => {
                    let v = subspace(load(&f[0], tol)?, "V")?;
                    doc(&chart_flat(&w, &v, &load_point(&f[1], tol)?, tol)?.into())
                }
                (ChartKind::Convex, Some(f), None) if f.len() == 3 => {
                    let triple = ChartTriple {
                        v: subspace(load(&f[0], tol)?, "V")?,
                        omega: load_point(&f[1], tol)?,
                        a: match load(&f[2], tol)? {
                            ConvexSet::Polytope(p) => p,
                            _ => return Err(HyperError::InvalidArgument("A must be a polytope".into())),
                        },
                    };
                    doc(&chart_convex(&w, &triple, tol)?.into())
                }
                (ChartKind::Flat, None, Some(f)) => {
                    let f = load(&f, tol)?
                        .as_flat()
                        .ok_or_else(|| HyperError::InvalidArgument("F must be a flat".into()))?;
                    let (v, omega) = chart_flat_inv(&w, &f, tol)?;
                    json!({ "v": doc(&v.into()), "omega": omega.as_slice() })
                }
                (ChartKind::Convex, None, Some(b)) => {
                    let ConvexSet::Polytope(b) = load(&b, tol)? else {
                        return Err(HyperError::InvalidArgument("B must be a polytope".into()));
                    };
                    let t = chart_convex_inv(&w, &b, tol)?;
                    json!({ "v": doc(&t.v.into()), "omega": t.omega.as_slice(), "a": doc(&t.a.into()) })
                }
                _ => {
                    return Err(HyperError::InvalidArgument(
                        "--forward takes V OMEGA for flat charts and V OMEGA A for convex charts".into(),
                    ))
                }
            }
        }
        Cmd::Verify {
            suite,
            dim,
            trials,
            seed,
            report,
        } => {
            let r = run_suite(&suite, dim, trials, seed, tol)?;
            let value = serde_json::to_value(&r).expect("reports serialize");
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&value).expect("reports serialize");
                std::fs::write(&path, text + "\n")
                    .map_err(|e| HyperError::InvalidArgument(format!("{}: {e}", path.display())))?;
            }
            return Ok((value, r.exit_code() as u8));
        }
        Cmd::Gen { kind, dim, k, seed } => doc(&random_instance(kind, dim, k, seed)?),
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = ToleranceConfig::from_env().and_then(|tol| run(cli.cmd, &tol));
    match result {
        Ok((value, code)) => {
            println!("{value}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
