//! Scenario implementations. Each takes a resolved config, runs the physics,
//! and writes one or more deterministic artifacts, returning their paths.

use crate::config::{DampedObservable, ScenarioConfig, StateSpec};
use crate::output::{write_csv, write_peaks, Cell, CsvSpec};
use nlcs::damping::lindblad_oracle;
use nlcs::evolution::{evolve_closed_form, factors, JointState, Provenance};
use nlcs::fockspace::{partial_trace_field, Basis, DensityMatrix, Ket, C64};
use nlcs::nonlinearity::NonlinearityProfile;
use nlcs::observables::{
    count_q_peaks, husimi_q, husimi_q_components, husimi_q_ket, mandel_rho, squeezing_ket,
    squeezing_rho, QGrid, QGridSpec,
};
use nlcs::states::{make_cat, make_nlcs, superposition_components};
use nlcs::{Error, Result};
use rayon::prelude::*;
use std::path::PathBuf;

pub fn build_profile(cfg: &ScenarioConfig, n_levels: usize) -> Result<NonlinearityProfile> {
    NonlinearityProfile::build_with(
        cfg.rc,
        cfg.eta,
        cfg.theta,
        n_levels,
        cfg.series_tol,
        cfg.series_mmax,
    )
}

/// β with the paper's phase convention (β = i|β|).
pub fn beta_of(cfg: &ScenarioConfig) -> C64 {
    C64::new(0.0, cfg.beta_mag)
}

/// Materialize a state spec as normalized coefficients of length `dim`.
pub fn state_vector(
    spec: &StateSpec,
    dim: usize,
    profile: &NonlinearityProfile,
) -> Result<Vec<C64>> {
    match spec {
        StateSpec::Vacuum => {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[0] = C64::new(1.0, 0.0);
            Ok(v)
        }
        StateSpec::Fock(l) => {
            if *l >= dim {
                return Err(Error::Usage(format!("fock:{l} does not fit dimension {dim}")));
            }
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[*l] = C64::new(1.0, 0.0);
            Ok(v)
        }
        StateSpec::Coherent(a) => Ok(Ket::coherent(dim, *a, Basis::Membrane).amplitudes.to_vec()),
        StateSpec::Nlcs(z) => Ok(make_nlcs(*z, profile, dim)?.coeffs.to_vec()),
        StateSpec::Cat { zeta, xi, phi } => {
            Ok(make_cat(*zeta, *xi, *phi, profile, dim)?.coeffs.to_vec())
        }
        StateSpec::Coeffs(list) => {
            if list.len() > dim {
                return Err(Error::Usage(format!(
                    "coeffs list of length {} does not fit dimension {dim}",
                    list.len()
                )));
            }
            let nrm = list.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if nrm < 1e-300 {
                return Err(Error::Usage("coeffs list has zero norm".into()));
            }
            let mut v: Vec<C64> = list.iter().map(|c| c / nrm).collect();
            v.resize(dim, C64::new(0.0, 0.0));
            Ok(v)
        }
    }
}

pub fn run_nonlinearity(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    run_nonlinearity_named(cfg, "nonlinearity", "")
}

pub fn run_nonlinearity_named(
    cfg: &ScenarioConfig,
    stem: &str,
    caption: &str,
) -> Result<Vec<PathBuf>> {
    let n = cfg.dim_m.max(1);
    let prof = build_profile(cfg, n)?;
    let rows = (0..n)
        .map(|k| {
            vec![
                Cell::Int(k as i64),
                Cell::Num(prof.f_table[k]),
                Cell::Num(prof.g_table[k]),
                Cell::Num(prof.p_table[k]),
            ]
        })
        .collect();
    let path = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: stem,
            caption,
            config_echo: cfg.echo(),
            columns: &["n", "f", "g", "P"],
            rows,
        },
    )?;
    Ok(vec![path])
}

pub fn run_evolve(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    let prof = build_profile(cfg, cfg.dim_m)?;
    let mem = state_vector(&cfg.membrane, cfg.dim_m, &prof)?;
    let fld = state_vector(&cfg.field, cfg.dim_f, &prof)?;
    let beta = beta_of(cfg);
    let grid = cfg.tau_grid()?;
    let pops: Result<Vec<Vec<f64>>> = grid
        .par_iter()
        .map(|&tau| {
            Ok(evolve_closed_form(&mem, &fld, tau, beta, &prof, cfg.dim_m)?
                .membrane_populations())
        })
        .collect();
    let pops = pops?;
    let mut rows = Vec::new();
    for (tau, p) in grid.iter().zip(&pops) {
        for (k, pk) in p.iter().enumerate() {
            rows.push(vec![Cell::Num(*tau), Cell::Int(k as i64), Cell::Num(*pk)]);
        }
    }
    let path = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: "evolve",
            caption: "",
            config_echo: cfg.echo(),
            columns: &["tau", "k", "population"],
            rows,
        },
    )?;
    Ok(vec![path])
}

/// S₁/S₂ of the NLCS |Λ₁(τ)⟩ generated on the field level n = 1.
fn squeezing_rows(cfg: &ScenarioConfig, prof: &NonlinearityProfile) -> Result<Vec<(f64, f64, f64)>> {
    let beta = beta_of(cfg);
    cfg.tau_grid()?
        .par_iter()
        .map(|&tau| {
            let lam = factors(tau, beta).lambda_n(1);
            let st = make_nlcs(lam, prof, cfg.dim_m)?;
            let rep = squeezing_ket(&st.as_ket(), tau)?;
            Ok((tau, rep.s1, rep.s2))
        })
        .collect()
}

pub fn run_squeezing(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    let prof = build_profile(cfg, cfg.dim_m)?;
    let rows = squeezing_rows(cfg, &prof)?
        .into_iter()
        .map(|(tau, s1, s2)| vec![Cell::Num(tau), Cell::Num(s1), Cell::Num(s2)])
        .collect();
    let path = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: "squeezing",
            caption: "",
            config_echo: cfg.echo(),
            columns: &["tau", "S1", "S2"],
            rows,
        },
    )?;
    Ok(vec![path])
}

fn mandel_rows(cfg: &ScenarioConfig, prof: &NonlinearityProfile) -> Result<Vec<(f64, f64)>> {
    let beta = beta_of(cfg);
    cfg.tau_grid()?
        .par_iter()
        .map(|&tau| {
            let lam = factors(tau, beta).lambda_n(1);
            let st = make_nlcs(lam, prof, cfg.dim_m)?;
            Ok((tau, nlcs::observables::mandel_ket(&st.as_ket())))
        })
        .collect()
}

pub fn run_mandel(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    let prof = build_profile(cfg, cfg.dim_m)?;
    let rows = mandel_rows(cfg, &prof)?
        .into_iter()
        .map(|(tau, m)| vec![Cell::Num(tau), Cell::Num(m)])
        .collect();
    let path = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: "mandel",
            caption: "",
            config_echo: cfg.echo(),
            columns: &["tau", "M"],
            rows,
        },
    )?;
    Ok(vec![path])
}

/// Field levels the Poisson weights keep above pmin; drives auto-sizing.
fn poisson_level_count(alpha: C64, pmin: f64) -> usize {
    let a2 = alpha.norm_sqr();
    let mut n = 0usize;
    let mut logw = -a2;
    loop {
        let next = logw + a2.ln() - ((n + 1) as f64).ln();
        if (n as f64) > a2 && next.exp() < pmin {
            return n + 1;
        }
        logw = next;
        n += 1;
        if n > 400 {
            return n;
        }
    }
}

fn grid_rows(grid: &QGrid) -> Vec<Vec<Cell>> {
    let mut rows = Vec::with_capacity(grid.re_axis.len() * grid.im_axis.len());
    for (i, re) in grid.re_axis.iter().enumerate() {
        for (j, im) in grid.im_axis.iter().enumerate() {
            rows.push(vec![Cell::Num(*re), Cell::Num(*im), Cell::Num(grid.values[[i, j]])]);
        }
    }
    rows
}

pub fn run_qfunc(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    run_qfunc_named(cfg, "qfunc", "")
}

pub fn run_qfunc_named(cfg: &ScenarioConfig, stem: &str, caption: &str) -> Result<Vec<PathBuf>> {
    let beta = beta_of(cfg);
    let mu_abs = (C64::new(1.0, 0.0) - (C64::new(0.0, 1.0) * cfg.tau).exp()).norm();
    let n_eff = poisson_level_count(cfg.alpha, cfg.pmin);
    // ε = f(0) sets the amplitude scale ε|β||μ|n of the outermost component
    let eps = build_profile(cfg, 1)?.f_table[0];
    let amp = eps * cfg.beta_mag * mu_abs * n_eff as f64;
    let dim = if cfg.dim_m > 0 { cfg.dim_m } else { (amp * amp + 8.0 * amp) as usize + 60 };
    let prof = build_profile(cfg, dim)?;
    let comps = superposition_components(cfg.alpha, cfg.tau, beta, &prof, dim, cfg.pmin)?;
    let half_extent = if cfg.extent > 0.0 { cfg.extent } else { 0.75 * amp + 3.0 };
    let spec = QGridSpec { half_extent, points: cfg.points, auto_extend: false };
    let grid = husimi_q_components(&comps, &spec)?;
    let (peaks, seps) = count_q_peaks(&grid, cfg.peak_threshold);
    let mut echo = cfg.echo();
    echo.push(("resolved_dim_m".into(), format!("{dim}")));
    echo.push(("resolved_extent".into(), format!("{half_extent}")));
    let csv = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: stem,
            caption,
            config_echo: echo,
            columns: &["gamma_re", "gamma_im", "Q"],
            rows: grid_rows(&grid),
        },
    )?;
    let side = write_peaks(&cfg.out_dir, stem, &peaks, &seps)?;
    Ok(vec![csv, side])
}

pub fn run_catstate(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    run_catstate_named(cfg, "catstate", "")
}

pub fn run_catstate_named(cfg: &ScenarioConfig, stem: &str, caption: &str) -> Result<Vec<PathBuf>> {
    let eps = build_profile(cfg, 1)?.f_table[0];
    let amp = eps * cfg.zeta.norm();
    let dim = if cfg.dim_m > 0 { cfg.dim_m } else { (amp * amp + 8.0 * amp) as usize + 40 };
    let prof = build_profile(cfg, dim)?;
    let cat = make_cat(cfg.zeta, cfg.xi, cfg.phi, &prof, dim)?;
    let rows = cat
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, c)| {
            vec![Cell::Int(l as i64), Cell::Num(c.re), Cell::Num(c.im), Cell::Num(c.norm_sqr())]
        })
        .collect();
    let mut echo = cfg.echo();
    echo.push(("resolved_dim_m".into(), format!("{dim}")));
    echo.push(("norm_const".into(), format!("{}", cat.norm_const)));
    let coeff_csv = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: stem,
            caption,
            config_echo: echo.clone(),
            columns: &["l", "re", "im", "prob"],
            rows,
        },
    )?;
    let half_extent = if cfg.extent > 0.0 { cfg.extent } else { 2.0 * amp + 3.0 };
    let spec = QGridSpec { half_extent, points: cfg.points, auto_extend: false };
    let grid = husimi_q_ket(&cat.as_ket(), &spec)?;
    let (peaks, seps) = count_q_peaks(&grid, cfg.peak_threshold);
    let qstem = format!("{stem}_qfunc");
    let q_csv = write_csv(
        &cfg.out_dir,
        &CsvSpec {
            file_stem: &qstem,
            caption,
            config_echo: echo,
            columns: &["gamma_re", "gamma_im", "Q"],
            rows: grid_rows(&grid),
        },
    )?;
    let side = write_peaks(&cfg.out_dir, &qstem, &peaks, &seps)?;
    Ok(vec![coeff_csv, q_csv, side])
}

/// Reduced membrane state after Lindblad evolution to τ.
pub fn damped_reduced(
    cfg: &ScenarioConfig,
    prof: &NonlinearityProfile,
    mem: &[C64],
    fld: &[C64],
    tau: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    let psi0 = JointState::product(fld, mem, Provenance::Oracle);
    let rho0 = DensityMatrix::from_ket(&psi0.as_ket());
    let rho = lindblad_oracle(&rho0, tau, cfg.kappa, beta_of(cfg), prof, steps)?;
    partial_trace_field(&rho)
}

pub fn run_damped(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    run_damped_named(cfg, "damped", "")
}

pub fn run_damped_named(cfg: &ScenarioConfig, stem: &str, caption: &str) -> Result<Vec<PathBuf>> {
    let prof = build_profile(cfg, cfg.dim_m)?;
    let mut mem = state_vector(&cfg.membrane, cfg.dim_m, &prof)?;
    let fld = state_vector(&cfg.field, cfg.dim_f, &prof)?;
    if cfg.kerr_dress {
        // start from the state whose Kerr phase unwinds by τ_max
        let theta_big = factors(cfg.tau_max, beta_of(cfg)).theta_big;
        for (k, c) in mem.iter_mut().enumerate() {
            *c *= (-C64::new(0.0, 1.0) * theta_big * prof.g_table[k]).exp();
        }
    }
    match cfg.observable {
        DampedObservable::Qfunc => {
            let rm = damped_reduced(cfg, &prof, &mem, &fld, cfg.tau_max, cfg.steps)?;
            let spec =
                QGridSpec { half_extent: cfg.extent, points: cfg.points, auto_extend: false };
            let grid = husimi_q(&rm, &spec)?;
            let (peaks, seps) = count_q_peaks(&grid, cfg.peak_threshold);
            let qstem = format!("{stem}_qfunc");
            let csv = write_csv(
                &cfg.out_dir,
                &CsvSpec {
                    file_stem: &qstem,
                    caption,
                    config_echo: cfg.echo(),
                    columns: &["gamma_re", "gamma_im", "Q"],
                    rows: grid_rows(&grid),
                },
            )?;
            let side = write_peaks(&cfg.out_dir, &qstem, &peaks, &seps)?;
            Ok(vec![csv, side])
        }
        DampedObservable::Mandel | DampedObservable::Squeezing => {
            let grid = cfg.tau_grid()?;
            let per_tau: Result<Vec<Vec<Cell>>> = grid
                .par_iter()
                .map(|&tau| {
                    let steps = lindblad_steps(cfg, tau);
                    let rm = damped_reduced(cfg, &prof, &mem, &fld, tau, steps)?;
                    Ok(match cfg.observable {
                        DampedObservable::Mandel => vec![
                            Cell::Num(tau),
                            Cell::Num(cfg.kappa),
                            Cell::Num(mandel_rho(&rm)),
                        ],
                        _ => {
                            let rep = squeezing_rho(&rm, tau)?;
                            vec![
                                Cell::Num(tau),
                                Cell::Num(cfg.kappa),
                                Cell::Num(rep.s1),
                                Cell::Num(rep.s2),
                            ]
                        }
                    })
                })
                .collect();
            let columns: &[&str] = match cfg.observable {
                DampedObservable::Mandel => &["tau", "kappa", "M"],
                _ => &["tau", "kappa", "S1", "S2"],
            };
            let csv = write_csv(
                &cfg.out_dir,
                &CsvSpec {
                    file_stem: stem,
                    caption,
                    config_echo: cfg.echo(),
                    columns,
                    rows: per_tau?,
                },
            )?;
            Ok(vec![csv])
        }
    }
}

/// RK4 step count proportional to the horizon, floored for short times.
pub fn lindblad_steps(cfg: &ScenarioConfig, tau: f64) -> usize {
    let frac = if cfg.tau_max > 0.0 { tau / cfg.tau_max } else { 1.0 };
    ((cfg.steps as f64 * frac).round() as usize).max(60)
}

/// Evolve a dressed membrane coefficient vector; shared by the Fig. 8/9
/// preset sweeps which vary (r_c, η, κ) series within one artifact.
pub fn series_rows(
    cfg: &ScenarioConfig,
    label: f64,
    want_squeezing: bool,
) -> Result<Vec<Vec<Cell>>> {
    let prof = build_profile(cfg, cfg.dim_m)?;
    let mem = state_vector(&cfg.membrane, cfg.dim_m, &prof)?;
    let fld = state_vector(&cfg.field, cfg.dim_f, &prof)?;
    let grid = cfg.tau_grid()?;
    grid.par_iter()
        .map(|&tau| {
            let steps = lindblad_steps(cfg, tau);
            let rm = damped_reduced(cfg, &prof, &mem, &fld, tau, steps)?;
            Ok(if want_squeezing {
                let rep = squeezing_rho(&rm, tau)?;
                vec![Cell::Num(label), Cell::Num(cfg.kappa), Cell::Num(tau), Cell::Num(rep.s2)]
            } else {
                vec![Cell::Num(label), Cell::Num(cfg.kappa), Cell::Num(tau), Cell::Num(mandel_rho(&rm))]
            })
        })
        .collect()
}

/// NLCS sweeps over several η (or r_c) values sharing one artifact; used by
/// the Fig. 3/4 presets.
pub fn nlcs_metric_rows(
    cfg: &ScenarioConfig,
    label: f64,
    want_squeezing: bool,
) -> Result<Vec<Vec<Cell>>> {
    let prof = build_profile(cfg, cfg.dim_m)?;
    if want_squeezing {
        Ok(squeezing_rows(cfg, &prof)?
            .into_iter()
            .map(|(tau, s1, s2)| {
                vec![Cell::Num(label), Cell::Num(tau), Cell::Num(s1), Cell::Num(s2)]
            })
            .collect())
    } else {
        Ok(mandel_rows(cfg, &prof)?
            .into_iter()
            .map(|(tau, m)| vec![Cell::Num(label), Cell::Num(tau), Cell::Num(m)])
            .collect())
    }
}
