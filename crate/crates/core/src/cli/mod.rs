//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification checks failed, 2 configuration or
//! usage error, 3 computation error.

mod config;
mod output;
mod plot;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{ModelParams, RadialProfile};
use crate::mass::{formal_limit_experiment, mass_profile, one_harmonic_mass, one_harmonic_mass_of, polarized_mass, MassContext};
use crate::structural::{coefficients_closed_form, coefficients_ode, default_t_start, p_limit_profiles, StructuralCoefficients};
use crate::verify::run_suite;

pub use config::{ProfileSpec, Reader, RunConfig, Settings};
pub use output::{sci, to_csv, to_json};
pub use plot::{Chart, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CURVMASS_THREADS";

/// Column names of the `mass` CSV.
pub const MASS_COLUMNS: [&str; 8] = ["t", "r", "area", "H", "grad_w", "mass", "dmdt_num", "dmdt_formula"];

#[derive(Parser, Debug)]
#[command(name = "curvmass", version, about = "Monotone mass functionals on rotationally symmetric 3-manifolds")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by all subcommands; each may also come from `--config`.
#[derive(Args, Debug, Default)]
struct Common {
    /// key = value file with the same keys as the long flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// de-sitter | constant-curvature | perturbed | sds | tabulated
    #[arg(long, global = true)]
    profile: Option<String>,
    /// cosmological constant (comma-separated list for sweep)
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// exponent p in (1, 3) (comma-separated list)
    #[arg(long, global = true)]
    p: Option<String>,
    /// constant-curvature parameter: φ = 1 - a r²
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    /// perturbation size: φ = (1 - Λr²/3)(1 + eps h)
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<String>,
    /// perturbation shape: quadratic | quartic | bump
    #[arg(long, global = true)]
    shape: Option<String>,
    /// bump width
    #[arg(long, global = true)]
    width: Option<String>,
    /// Schwarzschild-de Sitter mass parameter
    #[arg(long, global = true)]
    m: Option<String>,
    /// CSV with columns r,phi for a tabulated profile
    #[arg(long, global = true)]
    path: Option<String>,
    /// restrict the profile to [0, cap] with a wall
    #[arg(long, global = true)]
    cap: Option<String>,
    #[arg(long = "t-min", global = true, allow_hyphen_values = true)]
    t_min: Option<String>,
    #[arg(long = "t-max", global = true, allow_hyphen_values = true)]
    t_max: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    /// single level t
    #[arg(long, global = true, allow_hyphen_values = true)]
    t: Option<String>,
    /// output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv | json
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural coefficients α, μ, λ on a t grid
    Coeffs {
        /// auto | closed | ode
        #[arg(long)]
        route: Option<String>,
    },
    /// m(t) with the derivative identity, as CSV
    Mass,
    /// Polarized p-harmonic Mass breakdown, as JSON
    Polarized,
    /// 1-harmonic mass from a bounded profile or from --t-star
    OneHarmonic {
        #[arg(long = "t-star", allow_hyphen_values = true)]
        t_star: Option<String>,
    },
    /// Cartesian sweep over --lambda and --p lists
    Sweep {
        /// polarized | mass-at | formal-limit
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Run the check registry
    Verify {
        /// run every check (the default when no --check is given)
        #[arg(long)]
        all: bool,
        /// check id, repeatable
        #[arg(long = "check")]
        checks: Vec<String>,
        /// tolerance override id=value, repeatable
        #[arg(long = "tol")]
        tols: Vec<String>,
        /// list the available check ids and exit
        #[arg(long)]
        list: bool,
    },
    /// SVG line chart
    Plot {
        /// mass | coeffs | p-limit
        #[arg(long)]
        kind: Option<String>,
    },
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Config(Vec<String>),
    Compute(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(format!("i/o error: {e}"))
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Entry point; `args[0]` is the program name.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("configuration error: {msg}");
        return EXIT_CONFIG;
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Config(errs)) => {
            for e in &errs {
                eprintln!("configuration error: {e}");
            }
            EXIT_CONFIG
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("computation error: {msg}");
            EXIT_COMPUTE
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn settings(common: &Common, extra: &[(&str, Option<&str>)]) -> (Settings, Vec<String>) {
    let mut errors = Vec::new();
    let mut s = match &common.config {
        Some(path) => Settings::from_file(path, &mut errors),
        None => Settings::default(),
    };
    let flags = [
        ("profile", &common.profile),
        ("lambda", &common.lambda),
        ("p", &common.p),
        ("a", &common.a),
        ("eps", &common.eps),
        ("shape", &common.shape),
        ("width", &common.width),
        ("m", &common.m),
        ("path", &common.path),
        ("cap", &common.cap),
        ("t-min", &common.t_min),
        ("t-max", &common.t_max),
        ("samples", &common.samples),
        ("t", &common.t),
        ("out", &common.out),
        ("format", &common.format),
    ];
    for (k, v) in flags {
        s.set_flag(k, v.as_deref());
    }
    for &(k, v) in extra {
        s.set_flag(k, v);
    }
    (s, errors)
}

fn dispatch(cli: Cli) -> Outcome {
    let common = &cli.common;
    match &cli.command {
        Command::Coeffs { route } => {
            let (s, errs) = settings(common, &[("route", route.as_deref())]);
            let mut r = Reader::new(&s, errs);
            let cfg = RunConfig::read(&mut r, &[2.0]);
            let route = r.choice("route", &["auto", "closed", "ode"], "auto");
            let format = r.choice("format", &["csv", "json"], "csv");
            let cfg = r.finish(cfg).map_err(Failure::Config)?;
            cmd_coeffs(&cfg, &route, &format)
        }
        Command::Mass => {
            let (s, errs) = settings(common, &[]);
            let mut r = Reader::new(&s, errs);
            let cfg = RunConfig::read(&mut r, &[2.0]);
            r.require(cfg.ps.len() == 1 && cfg.lambdas.len() == 1, "p", "mass takes a single p and Λ; use sweep for lists");
            let format = r.choice("format", &["csv", "json"], "csv");
            let cfg = r.finish(cfg).map_err(Failure::Config)?;
            cmd_mass(&cfg, &format)
        }
        Command::Polarized => {
            let (s, errs) = settings(common, &[]);
            let mut r = Reader::new(&s, errs);
            let cfg = RunConfig::read(&mut r, &[2.0]);
            let cfg = r.finish(cfg).map_err(Failure::Config)?;
            let ctx = context(&cfg, cfg.lambda(), cfg.p())?;
            let b = polarized_mass(&ctx)?;
            output::emit(cfg.out.as_deref(), &to_json(&b))?;
            Ok(EXIT_OK)
        }
        Command::OneHarmonic { t_star } => {
            let (s, errs) = settings(common, &[("t-star", t_star.as_deref())]);
            let mut r = Reader::new(&s, errs);
            let cfg = RunConfig::read(&mut r, &[2.0]);
            let t_star = r.f64_opt("t-star");
            let cfg = r.finish(cfg).map_err(Failure::Config)?;
            cmd_one_harmonic(&cfg, t_star)
        }
        Command::Sweep { quantity } => {
            let (s, errs) = settings(common, &[("kind", quantity.as_deref())]);
            let mut r = Reader::new(&s, errs);
            let cfg = RunConfig::read(&mut r, &[1.5, 2.0, 2.5]);
            let quantity = r.choice("kind", &["polarized", "mass-at", "formal-limit"], "polarized");
            let t = r.f64_or("t", 0.0);
            let cfg = r.finish(cfg).map_err(Failure::Config)?;
            cmd_sweep(&cfg, &quantity, t)
        }
        Command::Verify { all, checks, tols: tols_flag, list } => {
            if *list {
                for c in crate::verify::CHECKS {
                    println!("{}\t{}", c.id, c.desc);
                }
                return Ok(EXIT_OK);
            }
            let (s, errs) = settings(common, &[]);
            let mut r = Reader::new(&s, errs);
            let out = r.string("out").map(PathBuf::from);
            let mut checks = checks.clone();
            if checks.is_empty() {
                checks.extend(r.string("check").iter().flat_map(|v| v.split(',').map(|c| c.trim().to_string())));
            }
            let mut tols = r.string("tol").map(|v| v.split(',').map(|x| x.trim().to_string()).collect::<Vec<_>>()).unwrap_or_default();
            tols.extend(tols_flag.iter().cloned());
            let mut tolerances = BTreeMap::new();
            for item in &tols {
                match item.split_once('=').map(|(k, v)| (k.trim(), v.trim().parse::<f64>())) {
                    Some((k, Ok(v))) => {
                        tolerances.insert(k.to_string(), v);
                    }
                    _ => r.errors.push(format!("command line: field 'tol': expected id=value, got '{item}'")),
                }
            }
            let out = r.finish(out).map_err(Failure::Config)?;
            let selection = if *all || checks.is_empty() { None } else { Some(checks.as_slice()) };
            let report = run_suite(selection, &tolerances).map_err(|e| Failure::Config(vec![e.to_string()]))?;
            for c in &report.checks {
                eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.detail);
            }
            eprintln!("{} passed, {} failed", report.summary.pass, report.summary.fail);
            output::emit(out.as_deref(), &to_json(&report))?;
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_CHECKS_FAILED })
        }
        Command::Plot { kind } => {
            let (s, errs) = settings(common, &[("kind", kind.as_deref())]);
            let mut r = Reader::new(&s, errs);
            let cfg = RunConfig::read(&mut r, &[1.5, 2.0, 2.5]);
            let kind = r.choice("kind", &["mass", "coeffs", "p-limit"], "mass");
            let t = r.f64_or("t", 1.0);
            let cfg = r.finish(cfg).map_err(Failure::Config)?;
            cmd_plot(&cfg, &kind, t)
        }
    }
}

fn profile_for(cfg: &RunConfig, lambda: f64) -> crate::Result<RadialProfile> {
    cfg.profile.as_ref().unwrap_or(&ProfileSpec::DeSitter).build(lambda, cfg.cap)
}

fn context(cfg: &RunConfig, lambda: f64, p: f64) -> crate::Result<MassContext> {
    MassContext::new(profile_for(cfg, lambda)?, ModelParams::new(lambda, p)?)
}

fn coefficients(lambda: f64, p: f64, route: &str, t_max: f64) -> crate::Result<StructuralCoefficients> {
    let params = ModelParams::new(lambda, p)?;
    match route {
        "closed" => coefficients_closed_form(params),
        "ode" => coefficients_ode(params, default_t_start(p), t_max.max(0.0) + 1.0),
        _ if lambda >= 0.0 => coefficients_closed_form(params),
        _ => coefficients_ode(params, default_t_start(p).min(-60.0), t_max.max(0.0) + 1.0),
    }
}

#[derive(Serialize)]
struct CoeffRow {
    p: f64,
    t: f64,
    alpha: f64,
    mu: f64,
    lambda: f64,
    exp_lambda: f64,
}

fn cmd_coeffs(cfg: &RunConfig, route: &str, format: &str) -> Outcome {
    let lambda = cfg.lambda();
    let grid = cfg.t_grid();
    let tables = cfg
        .ps
        .par_iter()
        .map(|&p| -> crate::Result<Vec<CoeffRow>> {
            let sc = coefficients(lambda, p, route, cfg.t_max)?;
            grid.iter()
                .map(|&t| {
                    let s = sc.sample(t)?;
                    Ok(CoeffRow { p, t, alpha: s.alpha, mu: s.mu, lambda: s.lambda, exp_lambda: s.exp_lambda() })
                })
                .collect()
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let rows: Vec<CoeffRow> = tables.into_iter().flatten().collect();
    let text = if format == "json" {
        to_json(&rows)
    } else {
        let data: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.p, r.t, r.alpha, r.mu, r.lambda, r.exp_lambda]).collect();
        to_csv(&["p", "t", "alpha", "mu", "lambda", "exp_lambda"], &data)
    };
    output::emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_mass(cfg: &RunConfig, format: &str) -> Outcome {
    let ctx = context(cfg, cfg.lambda(), cfg.p())?;
    let mp = mass_profile(&ctx, &cfg.t_grid())?;
    let text = if format == "json" {
        to_json(&mp)
    } else {
        let data: Vec<Vec<f64>> = mp
            .rows
            .iter()
            .map(|r| vec![r.t, r.r, r.area, r.h, r.grad_w, r.mass, r.dmdt_num, r.dmdt_formula])
            .collect();
        to_csv(&MASS_COLUMNS, &data)
    };
    output::emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OneHarmonicReport {
    lambda: f64,
    t_lambda: f64,
    t_star: f64,
    t_upper: f64,
    mass: f64,
    quadrature: f64,
    derivation: &'static str,
}

fn cmd_one_harmonic(cfg: &RunConfig, t_star: Option<f64>) -> Outcome {
    let lambda = cfg.lambda();
    let v = match t_star {
        Some(ts) => one_harmonic_mass(lambda, ts)?,
        None => one_harmonic_mass_of(&profile_for(cfg, lambda)?, lambda)?,
    };
    let report = OneHarmonicReport {
        lambda,
        t_lambda: (3.0 / lambda).ln(),
        t_star: v.t_star,
        t_upper: v.t_upper,
        mass: v.closed_form,
        quadrature: v.quadrature,
        derivation: "|Σ_τ| = 4π e^τ, so m = ∫_{-∞}^{T} (e^{τ/2}/16π)(4π - Λ 4π e^τ) dτ = (e^{T/2}/2)(1 - e^{T - T_Λ}) with T = min(T_Λ, T*), T_Λ = log(3/Λ), T* = 2 log R_max",
    };
    output::emit(cfg.out.as_deref(), &to_json(&report))?;
    Ok(EXIT_OK)
}

fn cmd_sweep(cfg: &RunConfig, quantity: &str, t: f64) -> Outcome {
    let tuples: Vec<(f64, f64)> = cfg.lambdas.iter().flat_map(|&l| cfg.ps.iter().map(move |&p| (l, p))).collect();
    let text = match quantity {
        "polarized" => {
            let rows = tuples
                .par_iter()
                .map(|&(l, p)| -> crate::Result<Vec<f64>> {
                    let b = polarized_mass(&context(cfg, l, p)?)?;
                    Ok(vec![l, p, b.bulk, b.boundary_h_term, b.boundary_grad_term, b.total, b.k_p, b.truncation.t_min, b.truncation.t_max])
                })
                .collect::<crate::Result<Vec<_>>>()?;
            to_csv(&["lambda", "p", "bulk", "boundary_H_term", "boundary_grad_term", "total", "K_p", "t_min", "t_max"], &rows)
        }
        "mass-at" => {
            let rows = tuples
                .par_iter()
                .map(|&(l, p)| -> crate::Result<Vec<f64>> { Ok(vec![l, p, t, context(cfg, l, p)?.mass_at(t)?]) })
                .collect::<crate::Result<Vec<_>>>()?;
            to_csv(&["lambda", "p", "t", "mass"], &rows)
        }
        _ => {
            let mut rows = Vec::new();
            for &l in &cfg.lambdas {
                let rep = formal_limit_experiment(&profile_for(cfg, l)?, l, t, &cfg.ps)?;
                eprintln!("{}", rep.caveat);
                rows.extend(rep.rows.iter().map(|r| vec![l, r.p, t, r.mass, r.hawking, r.gap]));
            }
            to_csv(&["lambda", "p", "t", "mass", "hawking", "gap"], &rows)
        }
    };
    output::emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_plot(cfg: &RunConfig, kind: &str, t: f64) -> Outcome {
    let lambda = cfg.lambda();
    let grid = cfg.t_grid();
    let chart = match kind {
        "mass" => {
            let series = cfg
                .ps
                .par_iter()
                .map(|&p| -> crate::Result<Series> {
                    let mp = mass_profile(&context(cfg, lambda, p)?, &grid)?;
                    Ok(Series { name: format!("p = {p}"), points: mp.rows.iter().map(|r| (r.t, r.mass)).collect() })
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Chart { title: format!("m(t), Λ = {lambda}"), x_label: "t".into(), y_label: "m(t)".into(), log_y: false, series }
        }
        "coeffs" => {
            let mut series = Vec::new();
            for &p in &cfg.ps {
                let sc = coefficients(lambda, p, "auto", cfg.t_max)?;
                let samples = grid.iter().map(|&t| sc.sample(t)).collect::<crate::Result<Vec<_>>>()?;
                series.push(Series { name: format!("e^λ, p = {p}"), points: samples.iter().map(|s| (s.t, s.exp_lambda())).collect() });
                series.push(Series { name: format!("μ, p = {p}"), points: samples.iter().map(|s| (s.t, s.mu)).collect() });
            }
            Chart { title: format!("structural coefficients, Λ = {lambda}"), x_label: "t".into(), y_label: "value".into(), log_y: true, series }
        }
        _ => {
            let rows = p_limit_profiles(lambda, t, &cfg.ps)?;
            let series = vec![
                Series { name: "e^λ gap".into(), points: rows.iter().map(|r| (r.p, r.exp_lambda - r.exp_lambda_limit)).collect() },
                Series { name: "μe^λ gap".into(), points: rows.iter().map(|r| (r.p, r.mu_exp_lambda - r.mu_exp_lambda_limit)).collect() },
            ];
            Chart { title: format!("p → 1 trends at t = {t}, Λ = {lambda}"), x_label: "p".into(), y_label: "gap".into(), log_y: true, series }
        }
    };
    output::emit(cfg.out.as_deref(), &chart.render())?;
    Ok(EXIT_OK)
}
