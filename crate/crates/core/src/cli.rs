//! Command-line surface of `shadowctl`.
//!
//! Exit codes: 0 success, 1 negative verdict (`certify`), 2 input error,
//! 3 I/O error, 4 automaton state cap exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dynamics::DynSystem;
use crate::error::Error;
use crate::gallery::{GallerySpec, RandomMetric};
use crate::io::{LoadError, SystemFile};
use crate::rational;
use crate::report;
use crate::shadow::{self, ShadowConfig, Shadowing, DEFAULT_STATE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "shadowctl", about = "Exact shadowing analysis of finite metric dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a system file decodes to a metric space and a permutation.
    Validate { path: PathBuf },
    /// Write a gallery system to a file.
    Generate {
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "euclidean")]
        metric: MetricArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the (eps, delta)-shadowable points.
    Shadow {
        path: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        delta: String,
        /// Also print a bad window for every excluded point.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Evaluate a grid of scales and write a CSV report.
    Sweep {
        path: PathBuf,
        /// Comma-separated rationals; defaults to the candidate distances.
        #[arg(long)]
        eps_grid: Option<String>,
        /// Comma-separated rationals; defaults to the candidate `d(f(u), v)` values.
        #[arg(long)]
        delta_grid: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON report with the shadowable sets.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Distality margin, equicontinuity curve, minimality and isometry.
    Classify { path: PathBuf },
    /// Build and re-verify a clopen shadowing certificate for one point.
    Certify {
        path: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Circle,
    Odometer,
    CatMap,
    CantorPlusInterval,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Tree,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StateCapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        let message = match &e {
            Error::StateCapExceeded { cap, reached } => format!(
                "error: StateCapExceeded: the subset automaton reached {reached} states, above the cap of {cap}; \
                 raise --state-cap or use coarser scales"
            ),
            _ => format!("error: {}: {e}", e.kind()),
        };
        Failure { code, message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("error: IOError: {e}") }
    }
}

fn load(path: &Path) -> Result<(SystemFile, DynSystem), Failure> {
    let file = match SystemFile::load(path) {
        Ok(f) => f,
        Err(LoadError::Io(e)) => return Err(e.into()),
        Err(LoadError::Invalid(e)) => return Err(e.into()),
    };
    let sys = file.to_system()?;
    Ok((file, sys))
}

fn violation_json(e: &Error) -> serde_json::Value {
    json!({
        "valid": false,
        "error": e.kind(),
        "indices": e.indices(),
        "message": e.to_string(),
    })
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { path } => {
            let file = match SystemFile::load(&path) {
                Ok(f) => f,
                Err(LoadError::Io(e)) => return Err(e.into()),
                Err(LoadError::Invalid(e)) => {
                    writeln!(out, "{}", violation_json(&e))?;
                    return Ok(EXIT_INPUT);
                }
            };
            match file.to_system() {
                Ok(sys) => {
                    let report = json!({"valid": true, "name": file.name, "points": sys.len()});
                    writeln!(out, "{report}")?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    writeln!(out, "{}", violation_json(&e))?;
                    Ok(EXIT_INPUT)
                }
            }
        }
        Command::Generate { kind, n, k, levels, level, grid, seed, metric, out: path } => {
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| Failure::from(Error::BadParams(format!("--{flag} is required for this kind"))))
            };
            let spec = match kind {
                Kind::Circle => GallerySpec::CircleRotation { n: need(n, "n")?, k: k.unwrap_or(0) },
                Kind::Odometer => GallerySpec::Odometer {
                    levels: levels.ok_or_else(|| Failure::from(Error::BadParams("--levels is required".into())))?,
                },
                Kind::CatMap => GallerySpec::CatMap { n: need(n, "n")? },
                Kind::CantorPlusInterval => GallerySpec::CantorPlusInterval {
                    level: level.ok_or_else(|| Failure::from(Error::BadParams("--level is required".into())))?,
                    grid: need(grid, "grid")?,
                },
                Kind::Random => GallerySpec::RandomSystem {
                    n: need(n, "n")?,
                    seed: seed.unwrap_or(0),
                    metric: match metric {
                        MetricArg::Euclidean => RandomMetric::EuclideanSquare,
                        MetricArg::Tree => RandomMetric::RandomTree,
                    },
                },
            };
            let file = SystemFile::from_gallery(&spec)?;
            std::fs::write(&path, file.to_json())?;
            writeln!(
                out,
                "{}",
                json!({"written": path.display().to_string(), "name": file.name, "points": file.points.len()})
            )?;
            Ok(EXIT_OK)
        }
        Command::Shadow { path, eps, delta, witness, state_cap } => {
            let (file, sys) = load(&path)?;
            let eps = rational::parse_scale(&eps)?;
            let delta = rational::parse_scale(&delta)?;
            let config = ShadowConfig { state_cap, ..ShadowConfig::default() };
            let automaton = Shadowing::with_config(&sys, config).automaton(&eps, &delta)?;
            let sh = automaton.shadowable_points();
            let labels = |xs: &[usize]| xs.iter().map(|&x| sys.space().label(x).to_string()).collect::<Vec<_>>();
            let mut report = json!({
                "system": file.name,
                "eps": rational::format(&eps),
                "delta": rational::format(&delta),
                "states": automaton.state_count(),
                "shadowable": labels(&sh.to_vec()),
                "count": sh.len(),
            });
            if witness {
                let windows: Vec<_> = sh
                    .complement()
                    .iter()
                    .map(|x| {
                        let w = automaton.verdict(x).witness.expect("excluded points carry a witness");
                        json!({"point": sys.space().label(x), "center": w.center, "walk": labels(&w.walk)})
                    })
                    .collect();
                report["witnesses"] = json!(windows);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json"))?;
            Ok(EXIT_OK)
        }
        Command::Sweep { path, eps_grid, delta_grid, out: out_path, json: json_path, state_cap } => {
            let (file, sys) = load(&path)?;
            let eps_grid = match eps_grid {
                Some(g) => rational::parse_list(&g)?,
                None => sys.space().candidate_distances().to_vec(),
            };
            let delta_grid = match delta_grid {
                Some(g) => rational::parse_list(&g)?,
                None => sys.candidate_deltas(),
            };
            let config = ShadowConfig { state_cap, ..ShadowConfig::default() };
            let rep = report::sweep(&sys, &file.name, &eps_grid, &delta_grid, config);
            std::fs::write(&out_path, rep.to_csv())?;
            if let Some(p) = json_path {
                std::fs::write(p, rep.to_json())?;
            }
            let failed = rep.rows.iter().filter(|r| r.status != "ok").count();
            if failed > 0 {
                writeln!(err, "warning: {failed} cells failed; see the status column")?;
            }
            writeln!(
                out,
                "{}",
                json!({"rows": rep.rows.len(), "failed": failed, "out": out_path.display().to_string()})
            )?;
            Ok(EXIT_OK)
        }
        Command::Classify { path } => {
            let (file, sys) = load(&path)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&classify(&file.name, &sys)).expect("json"))?;
            Ok(EXIT_OK)
        }
        Command::Certify { path, point, eps, state_cap } => {
            let (file, sys) = load(&path)?;
            let p = sys.space().index_of(&point).ok_or_else(|| Failure::from(Error::UnknownPoint(point.clone())))?;
            let eps = rational::parse_scale(&eps)?;
            let Some(cert) = shadow::clopen_shadow_certificate(&sys, p, &eps) else {
                writeln!(out, "none")?;
                return Ok(EXIT_NEGATIVE);
            };
            let config = ShadowConfig { state_cap, ..ShadowConfig::default() };
            let verdict = Shadowing::with_config(&sys, config).is_shadowable(p, &eps, &cert.delta)?;
            let recheck = cert.verify(&sys);
            let labels: Vec<&str> = cert.clopen.iter().map(|x| sys.space().label(x)).collect();
            let report = json!({
                "system": file.name,
                "point": point,
                "eps": rational::format(&cert.eps),
                "eps_prime": rational::format(&cert.eps_prime),
                "gap": rational::format(&cert.gap),
                "clopen": labels,
                "separation": cert.separation.as_ref().map(rational::format),
                "delta": rational::format(&cert.delta),
                "delta_prime": rational::format(&cert.delta_prime),
                "trace": cert.trace,
                "trace_rechecked": recheck.all_hold() && recheck == cert.trace,
                "reverified_by_engine": verdict.shadowable,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json"))?;
            Ok(if verdict.shadowable && recheck.all_hold() { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

/// The `classify` report.
pub fn classify(name: &str, sys: &DynSystem) -> serde_json::Value {
    let space = sys.space();
    let margin = sys
        .distality_margin()
        .ok()
        .map(|(m, (a, b))| json!({"value": rational::format(&m), "witness": [space.label(a), space.label(b)]}));
    let maxima = sys.pair_maxima();
    let curve: Vec<_> = space
        .candidate_distances()
        .iter()
        .map(|alpha| {
            json!({"alpha": rational::format(alpha), "beta": rational::format(&maxima.equicontinuity_modulus(space, alpha))})
        })
        .collect();
    json!({
        "system": name,
        "points": sys.len(),
        "cycles": sys.cycles().len(),
        "minimal": sys.is_minimal(),
        "isometry": sys.is_isometry(),
        "distality_margin": margin,
        "equicontinuity": curve,
    })
}

/// Process entry point used by the binary.
pub fn main() -> ! {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code)
}
