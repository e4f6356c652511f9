//! Cavity-field damping: first-order Born correction ρ₁ by matrix quadrature,
//! the transformed lowering operator ã, the exact Lindblad oracle, and the
//! I-coefficients used as a term-level cross-check.

use ndarray::{s, Array2};
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::evolution::{evolve_closed_form, factors, propagator_blocks, JointState};
use crate::fockspace::{dagger, Basis, DenseOperator, DensityMatrix};
use crate::nonlinearity::NonlinearityProfile;
use crate::states::make_nlcs;

type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtildeMode {
    /// U(dt)·â·U†(dt), exactly consistent with the implemented propagator.
    Direct,
    /// The literal printed product â·e^{βμB̂†}e^{−β*μ*B̂}e^{i|β|²ramp·g(n̂_b)},
    /// which drops the n̂_f dependence acquired by commuting â through the
    /// exponents.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinkConvention {
    /// Anticommutator term carries the elapsed-time factor τ, as the Born
    /// derivation requires (both terms are O(κτ)); this is the default and
    /// the one with second-order agreement against the Lindblad oracle.
    Integrated,
    /// The literal printed form without τ.
    Literal,
}

#[derive(Debug, Clone)]
pub struct DampedEvolutionResult {
    /// Undamped joint density matrix at τ.
    pub rho0: DensityMatrix,
    /// First-order correction (not itself a state).
    pub rho1: Array2<C64>,
    /// Symmetrized, renormalized ρ₀ + ρ₁.
    pub rho: DensityMatrix,
    pub kappa: f64,
    pub quadrature_nodes: usize,
    /// Minimum eigenvalue of ρ; below −1e-6 the Born approximation has left
    /// its validity regime.
    pub min_eigenvalue: f64,
}

/// ã(dt) as a dense joint operator. Both modes are block-bidiagonal in the
/// field index: block (n, n+1) is √(n+1)·(membrane matrix).
pub fn atilde(
    dt: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_f: usize,
    dim_m: usize,
    mode: AtildeMode,
) -> Result<DenseOperator> {
    let blocks = atilde_blocks(dt, beta, profile, dim_f, dim_m, mode)?;
    let dim = dim_f * dim_m;
    let mut a = Array2::<C64>::zeros((dim, dim));
    for (n, blk) in blocks.iter().enumerate() {
        let r0 = n * dim_m;
        let c0 = (n + 1) * dim_m;
        for r in 0..dim_m {
            for c in 0..dim_m {
                a[[r0 + r, c0 + c]] = blk[[r, c]];
            }
        }
    }
    Ok(DenseOperator::new(a, Basis::Joint { dim_f, dim_m }))
}

/// Membrane blocks of ã(dt): entry n is the (n, n+1) field block.
fn atilde_blocks(
    dt: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_f: usize,
    dim_m: usize,
    mode: AtildeMode,
) -> Result<Vec<Array2<C64>>> {
    let w = propagator_blocks(dt, beta, profile, dim_f, dim_m)?;
    let mut out = Vec::with_capacity(dim_f - 1);
    for n in 0..dim_f - 1 {
        let s = ((n + 1) as f64).sqrt();
        let blk = match mode {
            // (U a U†) block (n, n+1) = √(n+1)·W_n·W_{n+1}†
            AtildeMode::Direct => w[n].dot(&dagger(&w[n + 1].view())).mapv(|x| x * s),
            // the printed product is the n = 1 block of W for every n
            AtildeMode::Paper => w[1.min(dim_f - 1)].mapv(|x| x * s),
        };
        out.push(blk);
    }
    Ok(out)
}

/// Undamped Eq. 24 joint density matrix for field coefficients D and general
/// initial membrane coefficients C.
pub fn rho0_joint(
    d_field: &[C64],
    c_membrane: &[C64],
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_m: usize,
) -> Result<DensityMatrix> {
    let st: JointState = evolve_closed_form(c_membrane, d_field, tau, beta, profile, dim_m)?;
    Ok(DensityMatrix::from_ket(&st.as_ket()))
}

/// ρ₁ by composite-Simpson quadrature of κ∫₀^τ ã(τ−t)ρ₀(τ)ã†(τ−t)dt minus the
/// photon-number sink term, plus the renormalized total state.
#[allow(clippy::too_many_arguments)]
pub fn born_rho1(
    d_field: &[C64],
    c_membrane: &[C64],
    tau: f64,
    kappa: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_m: usize,
    quadrature_nodes: usize,
    mode: AtildeMode,
    sink: SinkConvention,
) -> Result<DampedEvolutionResult> {
    if kappa < 0.0 {
        return Err(Error::Domain(format!("kappa must be >= 0, got {kappa}")));
    }
    if quadrature_nodes < 9 {
        return Err(Error::Domain("born_rho1 needs at least 9 quadrature nodes".into()));
    }
    let rho0 = rho0_joint(d_field, c_membrane, tau, beta, profile, dim_m)?;
    let dim_f = d_field.len();

    let rho1 = if kappa == 0.0 {
        Array2::<C64>::zeros((rho0.dim(), rho0.dim()))
    } else {
        let coarse = born_integral(&rho0, tau, beta, profile, dim_f, dim_m, quadrature_nodes, mode)?;
        let fine =
            born_integral(&rho0, tau, beta, profile, dim_f, dim_m, 2 * quadrature_nodes - 1, mode)?;
        let dev: f64 = (&coarse - &fine).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if dev * kappa > 1e-8 {
            return Err(Error::Numeric(format!(
                "Born quadrature not converged: node-doubling moved the integral by {:.3e} (nodes = {quadrature_nodes})",
                dev * kappa
            )));
        }
        let mut r1 = fine.mapv(|x| x * kappa);
        // sink term −(κ/2){n̂_f, ρ₀}, time-integrated or literal
        let tfac = match sink {
            SinkConvention::Integrated => tau,
            SinkConvention::Literal => 1.0,
        };
        for n in 0..dim_f {
            for l in 0..dim_f {
                let w = -kappa / 2.0 * (n + l) as f64 * tfac;
                if w == 0.0 {
                    continue;
                }
                for r in 0..dim_m {
                    for c in 0..dim_m {
                        r1[[n * dim_m + r, l * dim_m + c]] +=
                            rho0.entries[[n * dim_m + r, l * dim_m + c]] * w;
                    }
                }
            }
        }
        r1
    };

    let mut rho = DensityMatrix::new(
        &rho0.entries + &rho1,
        Basis::Joint { dim_f, dim_m },
    );
    rho.symmetrize();
    rho.normalize();
    let min_eigenvalue = rho.min_eigenvalue();
    if min_eigenvalue < -1e-6 {
        eprintln!(
            "warning: Born-corrected state has eigenvalue {min_eigenvalue:.3e}; first-order correction outside its validity regime (kappa = {kappa})"
        );
    }
    Ok(DampedEvolutionResult { rho0, rho1, rho, kappa, quadrature_nodes, min_eigenvalue })
}

/// ∫₀^τ ã(τ−t)ρ₀ã†(τ−t)dt by composite Simpson (odd node count).
#[allow(clippy::too_many_arguments)]
fn born_integral(
    rho0: &DensityMatrix,
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_f: usize,
    dim_m: usize,
    nodes: usize,
    mode: AtildeMode,
) -> Result<Array2<C64>> {
    let nodes = if nodes % 2 == 0 { nodes + 1 } else { nodes };
    let h = tau / (nodes - 1) as f64;
    let dim = dim_f * dim_m;
    let mut acc = Array2::<C64>::zeros((dim, dim));
    if tau == 0.0 {
        return Ok(acc);
    }
    for i in 0..nodes {
        let t = h * i as f64;
        let w = if i == 0 || i == nodes - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        } * h
            / 3.0;
        let blocks = atilde_blocks(tau - t, beta, profile, dim_f, dim_m, mode)?;
        // ã ρ ã†: joint block (n, l) = √((n+1)(l+1)) A_n ρ_{n+1,l+1} A_l†
        for n in 0..dim_f - 1 {
            for l in 0..dim_f - 1 {
                let sub = rho0
                    .entries
                    .slice(s![
                        (n + 1) * dim_m..(n + 2) * dim_m,
                        (l + 1) * dim_m..(l + 2) * dim_m
                    ])
                    .to_owned();
                let term = blocks[n].dot(&sub).dot(&dagger(&blocks[l].view()));
                let mut dst = acc.slice_mut(s![n * dim_m..(n + 1) * dim_m, l * dim_m..(l + 1) * dim_m]);
                dst += &term.mapv(|x| x * w);
            }
        }
    }
    Ok(acc)
}

/// RK4 integration of dρ/dτ = −i[H_int(τ), ρ] + (κ/2)(2âρâ† − n̂_fρ − ρn̂_f),
/// blockwise in the field index (H is block diagonal, â block bidiagonal).
pub fn lindblad_oracle(
    rho0: &DensityMatrix,
    tau: f64,
    kappa: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    steps: usize,
) -> Result<DensityMatrix> {
    let Basis::Joint { dim_f, dim_m } = rho0.basis else {
        return Err(Error::Usage("lindblad_oracle needs a joint-basis density matrix".into()));
    };
    if steps == 0 {
        return Err(Error::Domain("lindblad_oracle needs steps >= 1".into()));
    }
    let b = crate::evolution::b_deformed(profile, dim_m)?;
    let bd = dagger(&b.view());
    let h = tau / steps as f64;

    let rhs = |r: &Array2<C64>, t: f64| -> Array2<C64> {
        let cb = beta.conj() * (-I * t).exp();
        let cbd = beta * (I * t).exp();
        let hmat = b.mapv(|x| x * cb) + bd.mapv(|x| x * cbd);
        let dim = dim_f * dim_m;
        let mut out = Array2::<C64>::zeros((dim, dim));
        for n in 0..dim_f {
            for l in 0..dim_f {
                let blk = r.slice(s![n * dim_m..(n + 1) * dim_m, l * dim_m..(l + 1) * dim_m]);
                // −i(n·Hm·ρ − l·ρ·Hm) − (κ/2)(n+l)ρ
                let mut d = hmat.dot(&blk).mapv(|x| -I * n as f64 * x);
                d = d + blk.dot(&hmat).mapv(|x| I * l as f64 * x);
                d = d + blk.mapv(|x| x * (-kappa / 2.0 * (n + l) as f64));
                // + κ·√((n+1)(l+1))·ρ_{n+1,l+1}
                if n + 1 < dim_f && l + 1 < dim_f {
                    let up = r.slice(s![
                        (n + 1) * dim_m..(n + 2) * dim_m,
                        (l + 1) * dim_m..(l + 2) * dim_m
                    ]);
                    let fac = kappa * (((n + 1) * (l + 1)) as f64).sqrt();
                    d = d + up.mapv(|x| x * fac);
                }
                out.slice_mut(s![n * dim_m..(n + 1) * dim_m, l * dim_m..(l + 1) * dim_m])
                    .assign(&d);
            }
        }
        out
    };

    let mut rho = rho0.entries.clone();
    let mut t = 0.0;
    for _ in 0..steps {
        let k1 = rhs(&rho, t);
        let k2 = rhs(&(&rho + &k1.mapv(|x| x * (h / 2.0))), t + h / 2.0);
        let k3 = rhs(&(&rho + &k2.mapv(|x| x * (h / 2.0))), t + h / 2.0);
        let k4 = rhs(&(&rho + &k3.mapv(|x| x * h)), t + h);
        rho = &rho
            + &(k1 + k2.mapv(|x| x * 2.0) + k3.mapv(|x| x * 2.0) + k4).mapv(|x| x * (h / 6.0));
        t += h;
    }
    let out = DensityMatrix::new(rho, Basis::Joint { dim_f, dim_m });
    let tr = out.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::Numeric(format!("Lindblad oracle trace drifted to {tr}")));
    }
    Ok(out)
}

/// I_{n,l}^{k,k'}(τ) = e^{i(n²Θ−l²Θ*)g(0)}·ℵ_nℵ_l·√(nl)·Λ_n^k(Λ_l*)^{k'}·
/// P(k)P(k')/(√k!√k'!). The printed ℵ² is read as ℵ_nℵ_l (the two components'
/// normalization constants).
pub fn coeff_i(
    n: usize,
    l: usize,
    k: usize,
    kprime: usize,
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
) -> Result<C64> {
    if n == 0 || l == 0 {
        return Err(Error::Domain("coeff_I needs n, l >= 1 (carries √(nl))".into()));
    }
    let fac = factors(tau, beta);
    let g0 = profile.g_table[0];
    let lam_n = fac.lambda_n(n);
    let lam_l = fac.lambda_n(l);
    let dim = profile.n_levels().min(120);
    let aleph_n = make_nlcs(lam_n, profile, dim)?.norm_const;
    let aleph_l = make_nlcs(lam_l, profile, dim)?.norm_const;
    let phase = (I * (fac.theta_big * (n * n) as f64 - fac.theta_big.conj() * (l * l) as f64) * g0)
        .exp();
    let p = &profile.p_table;
    let term = lam_n.powu(k as u32) * lam_l.conj().powu(kprime as u32)
        * p[k]
        * p[kprime]
        / (0.5 * (ln_gamma(k as f64 + 1.0) + ln_gamma(kprime as f64 + 1.0))).exp();
    Ok(phase * aleph_n * aleph_l * ((n * l) as f64).sqrt() * term)
}
