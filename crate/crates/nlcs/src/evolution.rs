//! The disentangled interaction-picture propagator, closed-form joint states,
//! and the time-ordered RK4 oracle for the exact Hamiltonian
//! H_int/ħω_m = n̂_f (β*·B̂ e^{−iτ} + β·B̂† e^{iτ}), B̂ = f(n̂_b)b̂.
//!
//! The propagator is block-diagonal in the field level n, so everything here
//! works on an (dim_f × dim_m) amplitude matrix rather than the full joint
//! vector: row n evolves under its own membrane-space block.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{dagger, expm_raw, leak_guard, Basis, DenseOperator, Ket};
use crate::nonlinearity::NonlinearityProfile;

type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy)]
pub struct PropagatorFactors {
    pub tau: f64,
    /// μ(τ) = 1 − e^{iτ}.
    pub mu: C64,
    /// The paper's λ(τ) = τ + iμ*(τ), renamed: λ is taken by the wavelength.
    pub ramp: C64,
    /// Θ = |β|²·ramp.
    pub theta_big: C64,
    pub beta: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    OperatorApplied,
    Oracle,
}

#[derive(Debug, Clone)]
pub struct JointState {
    /// Row n (field level) × column k (membrane level).
    pub amplitudes: Array2<C64>,
    pub provenance: Provenance,
    /// Norm before the final renormalization (closed form only; 1.0 otherwise).
    pub pre_norm: f64,
}

impl JointState {
    pub fn product(field: &[C64], membrane: &[C64], provenance: Provenance) -> Self {
        let mut a = Array2::zeros((field.len(), membrane.len()));
        for (n, d) in field.iter().enumerate() {
            for (k, c) in membrane.iter().enumerate() {
                a[[n, k]] = d * c;
            }
        }
        JointState { amplitudes: a, provenance, pre_norm: 1.0 }
    }

    pub fn dim_f(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn dim_m(&self) -> usize {
        self.amplitudes.ncols()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.mapv_inplace(|c| c / n);
        }
    }

    /// Flattened joint ket, field index slow.
    pub fn as_ket(&self) -> Ket {
        let (df, dm) = (self.dim_f(), self.dim_m());
        let mut v = Array1::zeros(df * dm);
        for n in 0..df {
            for k in 0..dm {
                v[n * dm + k] = self.amplitudes[[n, k]];
            }
        }
        Ket::new(v, Basis::Joint { dim_f: df, dim_m: dm })
    }

    /// Membrane populations marginalized over the field, for the leak guard.
    pub fn membrane_populations(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.dim_m()];
        for n in 0..self.dim_f() {
            for k in 0..self.dim_m() {
                p[k] += self.amplitudes[[n, k]].norm_sqr();
            }
        }
        p
    }

    pub fn check_leak(&self, label: &str) -> Result<()> {
        leak_guard(&self.membrane_populations(), label)
    }
}

/// μ, ramp, Θ at dimensionless time τ.
pub fn factors(tau: f64, beta: C64) -> PropagatorFactors {
    let mu = C64::new(1.0, 0.0) - (I * tau).exp();
    let ramp = C64::new(tau, 0.0) + I * mu.conj();
    PropagatorFactors { tau, mu, ramp, theta_big: ramp * beta.norm_sqr(), beta }
}

impl PropagatorFactors {
    /// Λ_n = nβμ.
    pub fn lambda_n(&self, n: usize) -> C64 {
        self.beta * self.mu * n as f64
    }
}

/// B̂ = f(n̂)b̂ as a dense membrane-space matrix.
pub fn b_deformed(profile: &NonlinearityProfile, dim_m: usize) -> Result<Array2<C64>> {
    if profile.n_levels() < dim_m {
        return Err(Error::Usage(format!(
            "profile has {} levels, need {dim_m}",
            profile.n_levels()
        )));
    }
    let mut b = Array2::zeros((dim_m, dim_m));
    for k in 1..dim_m {
        // B|k⟩ = f(k−1)√k |k−1⟩
        b[[k - 1, k]] = C64::new(profile.f_table[k - 1] * (k as f64).sqrt(), 0.0);
    }
    Ok(b)
}

/// Per-field-level membrane blocks W_n of the disentangled propagator:
/// W_n = e^{Λ_n B̂†} e^{−Λ_n* B̂} diag(e^{iΘn²g(k)}), W_0 = I.
pub fn propagator_blocks(
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_f: usize,
    dim_m: usize,
) -> Result<Vec<Array2<C64>>> {
    let fac = factors(tau, beta);
    let b = b_deformed(profile, dim_m)?;
    let bd = dagger(&b.view());
    let mut blocks = Vec::with_capacity(dim_f);
    for n in 0..dim_f {
        if n == 0 {
            blocks.push(Array2::eye(dim_m));
            continue;
        }
        let lam = fac.lambda_n(n);
        let up = expm_raw(&bd.mapv(|x| x * lam).view());
        let down = expm_raw(&b.mapv(|x| x * (-lam.conj())).view());
        let mut w = up.dot(&down);
        let phase_arg = fac.theta_big * (n * n) as f64;
        for k in 0..dim_m {
            let ph = (I * phase_arg * profile.g_table[k]).exp();
            for r in 0..dim_m {
                w[[r, k]] *= ph;
            }
        }
        blocks.push(w);
    }
    Ok(blocks)
}

/// Full joint propagator of the O(β²) disentangled form, assembled dense.
pub fn propagator(
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_f: usize,
    dim_m: usize,
) -> Result<DenseOperator> {
    if beta.norm() > 0.1 {
        eprintln!(
            "warning: |beta| = {:.3} > 0.1; the disentangled propagator degrades as O(beta^3)",
            beta.norm()
        );
    }
    let blocks = propagator_blocks(tau, beta, profile, dim_f, dim_m)?;
    let dim = dim_f * dim_m;
    let mut u = Array2::zeros((dim, dim));
    for (n, w) in blocks.iter().enumerate() {
        let o = n * dim_m;
        for r in 0..dim_m {
            for c in 0..dim_m {
                u[[o + r, o + c]] = w[[r, c]];
            }
        }
    }
    Ok(DenseOperator::new(u, Basis::Joint { dim_f, dim_m }))
}

/// Apply the disentangled propagator blockwise to a joint state.
pub fn apply_propagator(
    psi0: &JointState,
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
) -> Result<JointState> {
    let blocks = propagator_blocks(tau, beta, profile, psi0.dim_f(), psi0.dim_m())?;
    let mut out = psi0.amplitudes.clone();
    for (n, w) in blocks.iter().enumerate() {
        let row = psi0.amplitudes.row(n).to_owned();
        out.row_mut(n).assign(&w.dot(&row));
    }
    let mut st = JointState { amplitudes: out, provenance: Provenance::OperatorApplied, pre_norm: 1.0 };
    st.pre_norm = st.norm();
    st.normalize();
    st.check_leak("apply_propagator")?;
    Ok(st)
}

/// Time-ordered RK4 integration of the exact interaction-picture dynamics.
pub fn oracle_evolve(
    psi0: &JointState,
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    steps: usize,
) -> Result<JointState> {
    if steps == 0 {
        return Err(Error::Domain("oracle_evolve needs steps >= 1".into()));
    }
    let dim_m = psi0.dim_m();
    let dim_f = psi0.dim_f();
    let b = b_deformed(profile, dim_m)?;
    let bd = dagger(&b.view());
    let h = tau / steps as f64;

    let rhs = |p: &Array2<C64>, t: f64| -> Array2<C64> {
        let cb = beta.conj() * (-I * t).exp();
        let cbd = beta * (I * t).exp();
        let hmat = b.mapv(|x| x * cb) + bd.mapv(|x| x * cbd);
        let mut out = Array2::zeros((dim_f, dim_m));
        for n in 1..dim_f {
            let row = p.row(n).to_owned();
            let hp = hmat.dot(&row);
            out.row_mut(n).assign(&hp.mapv(|x| -I * (n as f64) * x));
        }
        out
    };

    let mut psi = psi0.amplitudes.clone();
    let mut t = 0.0;
    for _ in 0..steps {
        let k1 = rhs(&psi, t);
        let k2 = rhs(&(&psi + &k1.mapv(|x| x * (h / 2.0))), t + h / 2.0);
        let k3 = rhs(&(&psi + &k2.mapv(|x| x * (h / 2.0))), t + h / 2.0);
        let k4 = rhs(&(&psi + &k3.mapv(|x| x * h)), t + h);
        psi = &psi
            + &(k1 + k2.mapv(|x| x * 2.0) + k3.mapv(|x| x * 2.0) + k4).mapv(|x| x * (h / 6.0));
        t += h;
    }
    let st = JointState { amplitudes: psi, provenance: Provenance::Oracle, pre_norm: 1.0 };
    st.check_leak("oracle_evolve")?;
    Ok(st)
}

/// Oracle with a step-halving convergence check (< 1e-10 change in norm).
pub fn oracle_evolve_checked(
    psi0: &JointState,
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    steps: usize,
) -> Result<JointState> {
    let coarse = oracle_evolve(psi0, tau, beta, profile, steps)?;
    let fine = oracle_evolve(psi0, tau, beta, profile, steps * 2)?;
    let dev: f64 =
        (&coarse.amplitudes - &fine.amplitudes).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if dev > 1e-10 {
        return Err(Error::Numeric(format!(
            "oracle not step-converged: halving changed the state by {dev:.3e} (steps = {steps})"
        )));
    }
    Ok(fine)
}

/// Closed-form joint state: Σ_{k,n} C_k D_n e^{in²Θg(k)} |n⟩ ⊗ e^{Λ_nB̂†}e^{−Λ_n*B̂}|k⟩,
/// assembled with dense exponentials and renormalized.
pub fn evolve_closed_form(
    c_membrane: &[C64],
    d_field: &[C64],
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    dim_m: usize,
) -> Result<JointState> {
    if c_membrane.len() > dim_m {
        return Err(Error::Usage("membrane coefficients exceed dim_m".into()));
    }
    let fac = factors(tau, beta);
    let b = b_deformed(profile, dim_m)?;
    let bd = dagger(&b.view());
    let dim_f = d_field.len();
    let mut amps = Array2::zeros((dim_f, dim_m));
    for (n, dn) in d_field.iter().enumerate() {
        if dn.norm() == 0.0 {
            continue;
        }
        let lam = fac.lambda_n(n);
        let m = expm_raw(&bd.mapv(|x| x * lam).view())
            .dot(&expm_raw(&b.mapv(|x| x * (-lam.conj())).view()));
        // phase-dressed initial membrane vector
        let mut v0 = Array1::<C64>::zeros(dim_m);
        let arg = fac.theta_big * (n * n) as f64;
        for (k, ck) in c_membrane.iter().enumerate() {
            v0[k] = ck * (I * arg * profile.g_table[k]).exp();
        }
        amps.row_mut(n).assign(&m.dot(&v0).mapv(|x| x * dn));
    }
    let mut st = JointState { amplitudes: amps, provenance: Provenance::ClosedForm, pre_norm: 1.0 };
    st.pre_norm = st.norm();
    if (1.0 - st.pre_norm).abs() > 0.5 {
        return Err(Error::Numeric(format!(
            "closed-form norm {:.3e} too far from 1: O(beta^2) approximation broke down",
            st.pre_norm
        )));
    }
    st.normalize();
    st.check_leak("evolve_closed_form")?;
    Ok(st)
}

/// The printed double-sum route for e^{ΛB̂†}e^{−Λ*B̂}|k⟩ (corrected
/// combinatorial coefficient), restricted to l' ≤ k. Returns Fock-basis
/// coefficients of the membrane factor, without the Kerr phase.
pub fn eq20_membrane_vector(
    k: usize,
    lam: C64,
    profile: &NonlinearityProfile,
    dim_m: usize,
) -> Result<Array1<C64>> {
    let p = &profile.p_table;
    if p.len() < dim_m + 1 {
        return Err(Error::Usage("profile too short for eq20 route".into()));
    }
    let ln_fact = |x: usize| statrs::function::gamma::ln_gamma(x as f64 + 1.0);
    let mut out = Array1::<C64>::zeros(dim_m);
    for lp in 0..=k {
        for l in 0..dim_m {
            let target = k + l - lp;
            if target >= dim_m {
                continue;
            }
            let denom = p[k - lp];
            if denom.abs() < 1e-300 {
                continue;
            }
            let comb = p[k] * p[target] / (denom * denom)
                * (0.5 * (ln_fact(k) + ln_fact(target)) - ln_fact(k - lp)).exp();
            let term = lam.powu(l as u32) * (-lam.conj()).powu(lp as u32)
                / C64::new((ln_fact(l) + ln_fact(lp)).exp(), 0.0);
            out[target] += term * comb;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::fidelity;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn factors_trivials() {
        let f0 = factors(0.0, c(0.0, 0.3));
        assert!(f0.mu.norm() < 1e-15 && f0.ramp.norm() < 1e-15 && f0.theta_big.norm() < 1e-15);

        let fp = factors(PI, c(0.0, 0.3));
        assert!((fp.mu - c(2.0, 0.0)).norm() < 1e-14);
        assert!((fp.ramp - c(PI, 2.0)).norm() < 1e-14);

        let f2 = factors(2.0 * PI, c(0.0, 0.3));
        assert!(f2.mu.norm() < 1e-13);
        assert!((f2.ramp - c(2.0 * PI, 0.0)).norm() < 1e-13);

        // periodicity μ(τ+2π) = μ(τ)
        let a = factors(1.3, c(0.0, 0.2)).mu;
        let b = factors(1.3 + 2.0 * PI, c(0.0, 0.2)).mu;
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn propagator_identity_cases() {
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 12).unwrap();
        let u = propagator(0.0, c(0.0, 0.01), &prof, 3, 12).unwrap();
        let dev =
            (&u.entries - &Array2::<C64>::eye(36)).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-13);

        // vacuum field sector is identity at any tau
        let blocks = propagator_blocks(1.7, c(0.0, 0.05), &prof, 3, 12).unwrap();
        let dev0 =
            (&blocks[0] - &Array2::<C64>::eye(12)).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(dev0 < 1e-15);
    }

    #[test]
    fn oracle_beta_zero_is_static() {
        let prof = NonlinearityProfile::constant(1.0, 8);
        let psi0 = JointState::product(
            &[c(0.6, 0.0), c(0.8, 0.0)],
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            Provenance::Oracle,
        );
        let out = oracle_evolve(&psi0, 2.0, c(0.0, 0.0), &prof, 50).unwrap();
        let dev: f64 =
            (&out.amplitudes - &psi0.amplitudes).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!(dev < 1e-14);
    }

    #[test]
    fn oracle_unit_f_gives_coherent_state() {
        // field |1⟩, membrane vacuum, f ≡ 1 → membrane coherent with amplitude βμ(τ)
        let dim_m = 25;
        let prof = NonlinearityProfile::constant(1.0, dim_m);
        let beta = c(0.0, 0.35);
        let mut field = vec![c(0.0, 0.0); 2];
        field[1] = c(1.0, 0.0);
        let mut mem = vec![c(0.0, 0.0); dim_m];
        mem[0] = c(1.0, 0.0);
        let psi0 = JointState::product(&field, &mem, Provenance::Oracle);
        let tau = 1.9;
        let out = oracle_evolve(&psi0, tau, beta, &prof, 2000).unwrap();
        let alpha = beta * factors(tau, beta).mu;
        let coh = Ket::coherent(dim_m, alpha, Basis::Membrane);
        let row = Ket::new(out.amplitudes.row(1).to_owned(), Basis::Membrane);
        let f = fidelity(&row, &coh).unwrap();
        assert!(f > 1.0 - 1e-9, "fidelity = {f}");
    }

    #[test]
    fn oracle_step_halving_order_four() {
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 20).unwrap();
        let beta = c(0.0, 0.05);
        let mut field = vec![c(0.0, 0.0); 4];
        field[3] = c(1.0, 0.0);
        let mut mem = vec![c(0.0, 0.0); 20];
        mem[0] = c(1.0, 0.0);
        let psi0 = JointState::product(&field, &mem, Provenance::Oracle);
        let reference = oracle_evolve(&psi0, PI, beta, &prof, 4096).unwrap();
        let mut errs = Vec::new();
        let steps_list = [16usize, 32, 64];
        for &s in &steps_list {
            let out = oracle_evolve(&psi0, PI, beta, &prof, s).unwrap();
            let e: f64 = (&out.amplitudes - &reference.amplitudes)
                .iter()
                .map(|x| x.norm_sqr())
                .sum::<f64>()
                .sqrt();
            errs.push(e);
        }
        let slope = (errs[0] / errs[2]).ln() / (4.0f64).ln();
        assert!((slope - 4.0).abs() < 0.2, "order = {slope}, errs = {errs:?}");
    }

    #[test]
    fn closed_form_trivials_and_revival() {
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 25).unwrap();
        let beta = c(0.0, 0.01);
        let mut cvac = vec![c(0.0, 0.0); 1];
        cvac[0] = c(1.0, 0.0);
        let d: Vec<C64> = {
            let k = Ket::coherent(4, c(1.0, 0.0), Basis::Field);
            k.amplitudes.to_vec()
        };
        // τ = 2π: membrane returns to vacuum exactly, product state
        let st = evolve_closed_form(&cvac, &d, 2.0 * PI, beta, &prof, 25).unwrap();
        for n in 0..4 {
            for k in 1..25 {
                assert!(st.amplitudes[[n, k]].norm() < 1e-12, "n={n} k={k}");
            }
        }
        assert!((st.pre_norm - 1.0).abs() < 1e-12);

        // τ = 0 also has norm exactly 1
        let st0 = evolve_closed_form(&cvac, &d, 0.0, beta, &prof, 25).unwrap();
        assert!((st0.pre_norm - 1.0).abs() < 1e-12);

        // elsewhere the pre-norm deviation is bounded by 10|β|²·n²·max g
        let st1 = evolve_closed_form(&cvac, &d, PI, beta, &prof, 25).unwrap();
        let gmax = prof.g_table.iter().take(25).cloned().fold(0.0f64, f64::max);
        let bound = 10.0 * beta.norm_sqr() * 9.0 * gmax;
        assert!((st1.pre_norm - 1.0).abs() <= bound, "{} vs {}", st1.pre_norm, bound);
    }

    #[test]
    fn closed_form_unit_f_is_coherent() {
        let dim_m = 30;
        let prof = NonlinearityProfile::constant(1.0, dim_m);
        let beta = c(0.0, 0.3);
        let tau = 2.1;
        let cvac: Vec<C64> = std::iter::once(c(1.0, 0.0)).collect();
        let d = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let st = evolve_closed_form(&cvac, &d, tau, beta, &prof, dim_m).unwrap();
        let alpha = beta * factors(tau, beta).mu;
        let coh = Ket::coherent(dim_m, alpha, Basis::Membrane);
        let row = Ket::new(st.amplitudes.row(1).to_owned(), Basis::Membrane);
        let f = fidelity(&row, &coh).unwrap();
        assert!(f > 1.0 - 1e-10, "fidelity = {f}");
    }

    #[test]
    fn eq20_route_matches_matrix_route() {
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 30).unwrap();
        let beta = c(0.0, 0.05);
        let tau = PI;
        let n = 2usize;
        let k = 1usize;
        let fac = factors(tau, beta);
        let lam = fac.lambda_n(n);
        // matrix route
        let b = b_deformed(&prof, 30).unwrap();
        let bd = dagger(&b.view());
        let m = expm_raw(&bd.mapv(|x| x * lam).view())
            .dot(&expm_raw(&b.mapv(|x| x * (-lam.conj())).view()));
        let mut v0 = Array1::<C64>::zeros(30);
        v0[k] = c(1.0, 0.0);
        let matrix_route = m.dot(&v0);
        // printed double-sum route
        let series_route = eq20_membrane_vector(k, lam, &prof, 30).unwrap();
        let dev: f64 = (&matrix_route - &series_route)
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(dev < 1e-10, "dev = {dev:.3e}");
    }
}
