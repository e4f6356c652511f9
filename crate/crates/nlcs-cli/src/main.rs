//! `nlcs` — scenario runner for the membrane-in-the-middle simulator.
//!
//! Exit codes: 0 ok, 2 usage/config error, 3 numeric or convergence failure,
//! 4 truncation leak. `NLCS_OUT_DIR` sets the default output root.

mod commands;
mod config;
mod output;
mod presets;
mod validate;

use clap::{Args, Parser, Subcommand};
use config::{ConfigFile, DampedObservable, ScenarioConfig, StateSpec};
use nlcs::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nlcs",
    version,
    about = "Optomechanical membrane simulator: nonlinear coherent states, cat states, damping",
    after_help = "Exit codes: 0 ok, 2 usage, 3 numeric/convergence, 4 truncation leak."
)]
struct Cli {
    /// Threads for parallel sweeps (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Sectioned key=value config file ([physical]/[dimensionless]/[run])
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $NLCS_OUT_DIR, then the working directory)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by the physics subcommands; every flag overrides the config
/// file, which overrides the built-in defaults.
#[derive(Args, Default)]
struct CommonOpts {
    /// Membrane reflectivity r_c in (0, 1)
    #[arg(long)]
    rc: Option<f64>,
    /// Lamb-Dicke parameter η
    #[arg(long)]
    eta: Option<f64>,
    /// θ = 2Lω_m/c
    #[arg(long)]
    theta: Option<f64>,
    /// Coupling magnitude |β| = |χ|/ω_m
    #[arg(long)]
    beta: Option<f64>,
    /// Cavity damping rate κ/ω_m
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
    /// Evaluation time for single-τ scenarios
    #[arg(long)]
    tau: Option<f64>,
    /// Membrane Fock dimension (0 = auto where supported)
    #[arg(long)]
    dim_m: Option<usize>,
    /// Field Fock dimension
    #[arg(long)]
    dim_f: Option<usize>,
    /// Membrane initial state: vacuum | fock:L | coherent:RE[,IM] | nlcs:.. | cat:.. | coeffs:..
    #[arg(long)]
    membrane: Option<String>,
    /// Field initial state (same grammar)
    #[arg(long)]
    field: Option<String>,
    /// f-series convergence tolerance
    #[arg(long)]
    series_tol: Option<f64>,
    /// f-series odd-term cap
    #[arg(long)]
    series_mmax: Option<usize>,
    /// Field coherent amplitude α for the qfunc superposition
    #[arg(long)]
    alpha: Option<String>,
    /// Poisson weight floor for superposition components
    #[arg(long)]
    pmin: Option<f64>,
    /// Cat amplitude ζ
    #[arg(long)]
    zeta: Option<String>,
    /// Cat quadratic phase ξ
    #[arg(long)]
    xi: Option<f64>,
    /// Cat linear phase φ
    #[arg(long)]
    phi: Option<f64>,
    /// Q-grid half extent (0 = auto where supported)
    #[arg(long)]
    extent: Option<f64>,
    /// Q-grid points per axis
    #[arg(long)]
    points: Option<usize>,
    /// Relative height threshold for peak counting
    #[arg(long)]
    peak_threshold: Option<f64>,
    /// Lindblad RK4 steps over the full horizon
    #[arg(long)]
    steps: Option<usize>,
    /// Observable for the damped scenario
    #[arg(long, value_enum)]
    observable: Option<DampedObservable>,
    /// Pre-compensate the Kerr phase accumulated by τ_max in the membrane state
    #[arg(long)]
    kerr_dress: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate f(n), g(n), P(n) for the configured parameters
    Nonlinearity(CommonOpts),
    /// Closed-form joint evolution; membrane populations over the τ grid
    Evolve(CommonOpts),
    /// S₁/S₂(τ) of the generated NLCS
    Squeezing(CommonOpts),
    /// Mandel M(τ) of the generated NLCS
    Mandel(CommonOpts),
    /// Husimi Q of the coherent-field membrane superposition at τ
    Qfunc(CommonOpts),
    /// Deformed cat state: coefficients plus Husimi Q
    Catstate(CommonOpts),
    /// Lindblad-damped evolution: Mandel, squeezing, or Q-function
    Damped(CommonOpts),
    /// Run a frozen figure preset (fig2a … fig10b)
    Preset {
        /// Figure id, e.g. fig3a
        id: String,
    },
    /// Re-run the oracle/invariant suite and report measured tolerances
    Validate {
        /// Perturb the f-table first; the eigenvalue check must then fail
        #[arg(long)]
        fault_inject_f: bool,
        /// Use deliberately undersized dimensions to trip the leak guard
        #[arg(long)]
        reduced_dims: bool,
    },
}

fn resolve(cli: &Cli, opts: &CommonOpts, scenario: &str) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig { scenario: scenario.into(), ..ScenarioConfig::default() };
    match scenario {
        "qfunc" => {
            cfg.dim_m = 0;
            cfg.extent = 0.0;
        }
        "catstate" => {
            cfg.dim_m = 0;
            cfg.extent = 0.0;
        }
        "damped" => {
            cfg.dim_f = 2;
            cfg.field = StateSpec::Fock(1);
            cfg.tau_points = 25;
            cfg.steps = 240;
        }
        _ => {}
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        ConfigFile::parse(&text, &path.display().to_string())?.apply(&mut cfg)?;
    }
    macro_rules! take {
        ($($field:ident),+) => { $( if let Some(v) = opts.$field { cfg.$field = v; } )+ };
    }
    take!(rc, eta, theta, kappa, tau_min, tau_max, tau_points, tau, dim_m, dim_f, series_tol,
          series_mmax, pmin, xi, phi, extent, points, peak_threshold, steps);
    if let Some(v) = opts.beta {
        cfg.beta_mag = v;
    }
    if let Some(s) = &opts.membrane {
        cfg.membrane = StateSpec::parse(s)?;
    }
    if let Some(s) = &opts.field {
        cfg.field = StateSpec::parse(s)?;
    }
    if let Some(s) = &opts.alpha {
        cfg.alpha = config::parse_complex(s)?;
    }
    if let Some(s) = &opts.zeta {
        cfg.zeta = config::parse_complex(s)?;
    }
    if let Some(v) = opts.observable {
        cfg.observable = v;
    }
    if opts.kerr_dress {
        cfg.kerr_dress = true;
    }
    cfg.out_dir = out_dir(cli, &cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &ScenarioConfig) -> PathBuf {
    if let Some(d) = &cli.out_dir {
        return d.clone();
    }
    if !cfg.out_dir.as_os_str().is_empty() {
        return cfg.out_dir.clone();
    }
    if let Ok(d) = std::env::var("NLCS_OUT_DIR") {
        if !d.is_empty() {
            return PathBuf::from(d);
        }
    }
    PathBuf::from(".")
}

fn dispatch(cli: &Cli) -> Result<Vec<PathBuf>> {
    match &cli.cmd {
        Cmd::Nonlinearity(o) => commands::run_nonlinearity(&resolve(cli, o, "nonlinearity")?),
        Cmd::Evolve(o) => commands::run_evolve(&resolve(cli, o, "evolve")?),
        Cmd::Squeezing(o) => commands::run_squeezing(&resolve(cli, o, "squeezing")?),
        Cmd::Mandel(o) => commands::run_mandel(&resolve(cli, o, "mandel")?),
        Cmd::Qfunc(o) => commands::run_qfunc(&resolve(cli, o, "qfunc")?),
        Cmd::Catstate(o) => commands::run_catstate(&resolve(cli, o, "catstate")?),
        Cmd::Damped(o) => commands::run_damped(&resolve(cli, o, "damped")?),
        Cmd::Preset { id } => {
            let base = resolve(cli, &CommonOpts::default(), "preset")?;
            presets::run_preset(id, &base.out_dir)
        }
        Cmd::Validate { .. } => unreachable!("handled in main"),
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Domain(_) | Error::Range(_) => 2,
        Error::Numeric(_) | Error::FZero { .. } => 3,
        Error::TruncationLeak(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        // ignore the error if a pool already exists (e.g. repeated in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if let Cmd::Validate { fault_inject_f, reduced_dims } = cli.cmd {
        let ok = validate::run(&validate::ValidateOpts {
            fault_inject_f,
            reduced_dims,
        });
        return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }
    match dispatch(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
