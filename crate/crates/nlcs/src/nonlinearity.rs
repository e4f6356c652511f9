//! The intensity-dependent coupling f_j(n) and everything derived from it:
//! g(n), the product table P(l), and the linearization f ≈ ε + σn with its
//! Γ, Δ coefficients.
//!
//! f_j(n) is a double series over odd m and k = 0..(m−1)/2 whose n-dependence
//! enters only through d = m − 2k. Construction therefore first accumulates
//! scalar weights A(d) (log-space binomials, convergence monitored on f_j(0)),
//! then contracts them against Laguerre polynomials by the three-term
//! recurrence run across n. This is what makes r_c → 1 (m into the thousands)
//! affordable.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
pub const DEFAULT_M_MAX: usize = 1001;
/// |f(n)| below this is treated as a zero of the nonlinearity.
pub const F_ZERO_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct NonlinearityProfile {
    /// f(n) for j = 1, n = 0..N−1.
    pub f_table: Vec<f64>,
    /// g(n) = (n+1)f(n)² − n f(n−1)².
    pub g_table: Vec<f64>,
    /// P(0) = 1, P(l) = P(l−1)·f(l−1); length N+1.
    pub p_table: Vec<f64>,
    /// (r_c, η, θ).
    pub params: (f64, f64, f64),
    pub series_cutoff: usize,
    pub series_tol: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LinearizedF {
    pub eps: f64,
    pub sigma: f64,
    /// Γ = (ε−σ)² + σε + 2σ as printed.
    pub gamma_coef: f64,
    /// Δ = σ(σ−3ε) + ε² as printed.
    pub delta_coef: f64,
}

/// Which Γ, Δ formulas to use when assembling cat-state parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaDeltaMode {
    /// The formulas printed in the paper.
    Paper,
    /// Coefficients of the exact expansion of (n+1)(ε+σn)² − n(ε+σ(n−1))²:
    /// g(n) = ε² + (4εσ − σ²)n + 3σ²n², read as ε² − Δn + Γn².
    Exact,
}

fn check_params(rc: f64, eta: f64, theta: f64, tol: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rc) {
        return Err(Error::Domain(format!("series diverges unless 0 <= r_c < 1, got {rc}")));
    }
    if !(eta > 0.0) || !(theta > 0.0) {
        return Err(Error::Domain(format!("eta, theta must be > 0, got {eta}, {theta}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("series tol must be > 0, got {tol}")));
    }
    Ok(())
}

/// Associated Laguerre polynomial L^j_n(x) by the three-term recurrence.
pub fn laguerre_assoc(n: usize, j: usize, x: f64) -> Result<f64> {
    let jf = j as f64;
    let mut lm1 = 1.0; // L_0
    if n == 0 {
        return Ok(lm1);
    }
    let mut l = 1.0 + jf - x; // L_1
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + jf - x) * l - (kf + jf) * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
        if !l.is_finite() {
            return Err(Error::Numeric(format!("laguerre_assoc overflow at n={k}, j={j}, x={x}")));
        }
    }
    Ok(l)
}

/// Scalar weights A(d), d odd, plus the last m used. A(d) sums the (m,k)
/// weights with d = m − 2k; convergence is monitored on f_j(0), whose kernel
/// per d is just d^j e^{−(ηθd)²/2}/j!.
fn weights_a(
    rc: f64,
    eta: f64,
    theta: f64,
    j: usize,
    tol: f64,
    m_max: usize,
) -> Result<(Vec<f64>, usize)> {
    check_params(rc, eta, theta, tol)?;
    if rc == 0.0 {
        return Ok((vec![0.0; 2], 1));
    }
    let et = eta * theta;
    let ln_rc = rc.ln();
    let mut a = vec![0.0f64; m_max + 2];
    let mut f0 = 0.0f64;
    let mut small_blocks = 0usize;
    let ln_j_fact = ln_gamma(j as f64 + 1.0);
    let mut m = 1usize;
    while m <= m_max {
        let mf = m as f64;
        let base = mf * ln_rc - mf.ln() + ln_gamma(mf) - (mf - 1.0) * 4f64.ln()
            - 2.0 * ln_gamma((mf + 1.0) / 2.0);
        let ln_m_fact = ln_gamma(mf + 1.0);
        let mut block = 0.0f64;
        for k in 0..=(m - 1) / 2 {
            let kf = k as f64;
            let d = mf - 2.0 * kf;
            let w_ln = base + ln_m_fact - ln_gamma(kf + 1.0) - ln_gamma(mf - kf + 1.0);
            if w_ln <= -745.0 {
                continue;
            }
            let w = w_ln.exp();
            a[m - 2 * k] += w;
            block += w * d.powi(j as i32) * (-0.5 * (et * d).powi(2)).exp();
        }
        block /= ln_j_fact.exp();
        f0 += block;
        // blocks decay geometrically by r_c² per step; bound the whole tail
        // (≤ block/(1−r_c²)) below tol, not just the current block
        if block.abs() * (1.0 - rc * rc).recip() <= tol * f0.abs() + 1e-300 {
            small_blocks += 1;
            if small_blocks >= 3 {
                a.truncate(m + 1);
                return Ok((a, m));
            }
        } else {
            small_blocks = 0;
        }
        m += 2;
    }
    Err(Error::Numeric(format!(
        "f-series cap m_max = {m_max} reached before tol = {tol:.1e} at r_c = {rc}; raise m_max"
    )))
}

/// Single value f_j(n) from the series, cutoff controlled by tol/m_max.
pub fn f_series_with(
    j: usize,
    n: usize,
    params: (f64, f64, f64),
    tol: f64,
    m_max: usize,
) -> Result<f64> {
    let (rc, eta, theta) = params;
    let (a, _) = weights_a(rc, eta, theta, j, tol, m_max)?;
    let et = eta * theta;
    let mut denom = 1.0f64;
    for i in 1..=j {
        denom *= (n + i) as f64;
    }
    let mut sum = 0.0f64;
    for d in (1..a.len()).step_by(2) {
        if a[d] == 0.0 {
            continue;
        }
        let df = d as f64;
        let x = (et * df).powi(2);
        sum += a[d] * df.powi(j as i32) * (-0.5 * x).exp() * laguerre_assoc(n, j, x)?;
    }
    Ok(sum / denom)
}

/// f_j(n) with the default cutoff policy.
pub fn f_series(j: usize, n: usize, params: (f64, f64, f64), tol: f64) -> Result<f64> {
    f_series_with(j, n, params, tol, DEFAULT_M_MAX)
}

impl NonlinearityProfile {
    /// Tabulate f, g, P up to n < n_levels with the default cutoff policy.
    pub fn build(rc: f64, eta: f64, theta: f64, n_levels: usize) -> Result<Self> {
        Self::build_with(rc, eta, theta, n_levels, DEFAULT_SERIES_TOL, DEFAULT_M_MAX)
    }

    pub fn build_with(
        rc: f64,
        eta: f64,
        theta: f64,
        n_levels: usize,
        tol: f64,
        m_max: usize,
    ) -> Result<Self> {
        if n_levels == 0 {
            return Err(Error::Domain("profile needs at least one level".into()));
        }
        let j = 1usize;
        let (a, mtop) = weights_a(rc, eta, theta, j, tol, m_max)?;
        let et = eta * theta;
        let mut f = vec![0.0f64; n_levels];
        // contract A(d) against L^1_n(x_d), recurrence run across n per d
        for d in (1..a.len()).step_by(2) {
            if a[d] == 0.0 {
                continue;
            }
            let df = d as f64;
            let x = (et * df).powi(2);
            let pref = a[d] * df * (-0.5 * x).exp();
            let mut lm1 = 1.0f64; // L^1_0
            let mut l = 2.0 - x; // L^1_1
            f[0] += pref * lm1;
            if n_levels > 1 {
                f[1] += pref * l;
            }
            for n in 2..n_levels {
                let nf = (n - 1) as f64;
                let next = ((2.0 * nf + 2.0 - x) * l - (nf + 1.0) * lm1) / (nf + 1.0);
                lm1 = l;
                l = next;
                f[n] += pref * l;
            }
        }
        for (n, v) in f.iter_mut().enumerate() {
            *v /= (n + 1) as f64;
        }
        Ok(Self::from_f_table(f, (rc, eta, theta), mtop, tol))
    }

    /// Constant profile f ≡ value (the standard-coherent-state limit).
    pub fn constant(value: f64, n_levels: usize) -> Self {
        Self::from_f_table(vec![value; n_levels], (f64::NAN, f64::NAN, f64::NAN), 0, 0.0)
    }

    fn from_f_table(f: Vec<f64>, params: (f64, f64, f64), cutoff: usize, tol: f64) -> Self {
        let n = f.len();
        let mut p = vec![1.0f64; n + 1];
        for l in 1..=n {
            p[l] = p[l - 1] * f[l - 1];
        }
        let mut g = vec![0.0f64; n];
        g[0] = f[0] * f[0];
        for k in 1..n {
            g[k] = (k as f64 + 1.0) * f[k] * f[k] - k as f64 * f[k - 1] * f[k - 1];
        }
        NonlinearityProfile {
            f_table: f,
            g_table: g,
            p_table: p,
            params,
            series_cutoff: cutoff,
            series_tol: tol,
        }
    }

    pub fn n_levels(&self) -> usize {
        self.f_table.len()
    }

    pub fn f(&self, n: usize) -> Result<f64> {
        self.f_table
            .get(n)
            .copied()
            .ok_or_else(|| Error::Range(format!("f({n}) outside table of {} levels", self.n_levels())))
    }

    /// True where f has a (numerical) zero; Ĉ = (1/f)b̂ is singular there.
    pub fn f_is_zero(&self, n: usize) -> bool {
        self.f_table.get(n).map(|v| v.abs() < F_ZERO_EPS).unwrap_or(true)
    }

    /// First flagged level, if any, within n < limit.
    pub fn first_zero_below(&self, limit: usize) -> Option<usize> {
        (0..limit.min(self.n_levels())).find(|&n| self.f_is_zero(n))
    }

    /// F(n) = n·f(n−1)², the helper operator of the disentangling derivation.
    pub fn big_f(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        Ok(n as f64 * self.f(n - 1)?.powi(2))
    }
}

pub fn g_of_n(profile: &NonlinearityProfile, n: usize) -> Result<f64> {
    profile
        .g_table
        .get(n)
        .copied()
        .ok_or_else(|| Error::Range(format!("g({n}) outside table of {} levels", profile.n_levels())))
}

/// ε and σ of the small-ηθ linearization f(n) ≈ ε + σn, with the printed
/// Γ, Δ. σ's series carries (iηθ)², hence σ ≤ 0.
pub fn linearize_f(params: (f64, f64, f64)) -> Result<LinearizedF> {
    linearize_f_with(params, DEFAULT_SERIES_TOL, DEFAULT_M_MAX)
}

pub fn linearize_f_with(params: (f64, f64, f64), tol: f64, m_max: usize) -> Result<LinearizedF> {
    let (rc, eta, theta) = params;
    let (a, _) = weights_a(rc, eta, theta, 1, tol, m_max)?;
    let et = eta * theta;
    let mut eps = 0.0f64;
    let mut sigma = 0.0f64;
    for d in (1..a.len()).step_by(2) {
        if a[d] == 0.0 {
            continue;
        }
        let df = d as f64;
        let e = (-0.5 * (et * df).powi(2)).exp();
        eps += a[d] * df * e;
        sigma += a[d] * (-(et * et) * df * df * df / 2.0) * e;
    }
    Ok(LinearizedF::from_eps_sigma(eps, sigma))
}

impl LinearizedF {
    pub fn from_eps_sigma(eps: f64, sigma: f64) -> Self {
        LinearizedF {
            eps,
            sigma,
            gamma_coef: (eps - sigma).powi(2) + sigma * eps + 2.0 * sigma,
            delta_coef: sigma * (sigma - 3.0 * eps) + eps * eps,
        }
    }

    /// (Γ, Δ) under the requested convention.
    pub fn gamma_delta(&self, mode: GammaDeltaMode) -> (f64, f64) {
        match mode {
            GammaDeltaMode::Paper => (self.gamma_coef, self.delta_coef),
            GammaDeltaMode::Exact => {
                (3.0 * self.sigma * self.sigma, self.sigma * self.sigma - 4.0 * self.eps * self.sigma)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: per-(m,k) summation with direct-series Laguerre,
    /// fixed high cutoff. Independent of the A(d) reorganization above.
    fn f_brute(j: usize, n: usize, rc: f64, eta: f64, theta: f64, m_cap: usize) -> f64 {
        let et = eta * theta;
        let mut sum = 0.0f64;
        let mut m = 1usize;
        while m <= m_cap {
            let mf = m as f64;
            let base = mf * rc.ln() - mf.ln() + ln_gamma(mf) - (mf - 1.0) * 4f64.ln()
                - 2.0 * ln_gamma((mf + 1.0) / 2.0);
            for k in 0..=(m - 1) / 2 {
                let kf = k as f64;
                let d = mf - 2.0 * kf;
                let w_ln =
                    base + ln_gamma(mf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(mf - kf + 1.0);
                if w_ln <= -745.0 {
                    continue;
                }
                let x = (et * d).powi(2);
                let mut denom = 1.0;
                for i in 1..=j {
                    denom *= (n + i) as f64;
                }
                sum += w_ln.exp() * (-0.5 * x).exp() * d.powi(j as i32)
                    * laguerre_direct(n, j, x)
                    / denom;
            }
            m += 2;
        }
        sum
    }

    fn laguerre_direct(n: usize, j: usize, x: f64) -> f64 {
        // L^j_n(x) = Σ_m (−x)^m C(n+j, n−m)/m!
        let mut sum = 0.0f64;
        for m in 0..=n {
            let ln_c = ln_gamma((n + j) as f64 + 1.0)
                - ln_gamma((n - m) as f64 + 1.0)
                - ln_gamma((j + m) as f64 + 1.0)
                - ln_gamma(m as f64 + 1.0);
            let term = ln_c.exp() * (-x).powi(m as i32);
            sum += term;
        }
        sum
    }

    #[test]
    fn laguerre_trivials() {
        // L^j_n(0) = C(n+j, n)
        assert_eq!(laguerre_assoc(3, 2, 0.0).unwrap(), 10.0);
        // L^1_1(x) = 2 − x
        assert!((laguerre_assoc(1, 1, 0.7).unwrap() - 1.3).abs() < 1e-15);
        // recurrence vs direct series
        let a = laguerre_assoc(10, 1, 0.64).unwrap();
        let b = laguerre_direct(10, 1, 0.64);
        assert!((a - b).abs() / b.abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn f_series_zero_reflectivity() {
        for n in 0..4 {
            assert_eq!(f_series(1, n, (0.0, 0.5, 1e-4), 1e-14).unwrap(), 0.0);
        }
    }

    #[test]
    fn f_series_rejects_bad_params() {
        assert!(f_series(1, 0, (1.0, 0.5, 1e-4), 1e-14).is_err());
        assert!(f_series(1, 0, (0.5, 0.5, 1e-4), 0.0).is_err());
    }

    #[test]
    fn small_eta_theta_is_constant_in_n() {
        let prof = NonlinearityProfile::build(0.9, 1e-5, 1e-4, 51).unwrap();
        let f0 = prof.f_table[0];
        for n in 0..51 {
            assert!(
                (prof.f_table[n] - f0).abs() / f0.abs() < 1e-10,
                "n={n}: {} vs {f0}",
                prof.f_table[n]
            );
        }
        // value against brute-force oracle at high cutoff
        let oracle = f_brute(1, 0, 0.9, 1e-5, 1e-4, 2001);
        assert!((f0 - oracle).abs() / oracle.abs() < 1e-11, "{f0} vs {oracle}");
    }

    #[test]
    fn varying_profile_matches_brute_force() {
        let prof = NonlinearityProfile::build_with(0.99, 0.8, 1e-4, 6, 1e-13, 40001).unwrap();
        for n in 0..6 {
            let oracle = f_brute(1, n, 0.99, 0.8, 1e-4, prof.series_cutoff + 500);
            assert!(
                (prof.f_table[n] - oracle).abs() / oracle.abs() < 1e-9,
                "n={n}: {} vs {oracle}",
                prof.f_table[n]
            );
        }
    }

    #[test]
    fn scalar_f_series_matches_profile() {
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 8).unwrap();
        for n in 0..8 {
            let s = f_series(1, n, (0.95, 0.19, 1.0), 1e-14).unwrap();
            assert!((s - prof.f_table[n]).abs() < 1e-12 * (1.0 + s.abs()));
        }
    }

    #[test]
    fn cauchy_tol_halving() {
        let p1 = NonlinearityProfile::build_with(0.95, 0.19, 1.0, 10, 1e-10, 10001).unwrap();
        let p2 = NonlinearityProfile::build_with(0.95, 0.19, 1.0, 10, 5e-11, 10001).unwrap();
        for n in 0..10 {
            assert!((p1.f_table[n] - p2.f_table[n]).abs() < 1e-10 * (1.0 + p1.f_table[n].abs()));
        }
    }

    #[test]
    fn cap_binds_error() {
        // r_c = 0.998 needs m in the tens of thousands; the default cap must
        // refuse rather than return a truncated sum
        let e = NonlinearityProfile::build(0.998, 0.82, 1e-4, 4);
        assert!(matches!(e, Err(Error::Numeric(_))));
    }

    #[test]
    fn p_table_recursion_and_g_telescoping() {
        let prof = NonlinearityProfile::build(0.95, 0.8, 1e-4, 31).unwrap();
        let mut direct = 1.0f64;
        for l in 1..=30 {
            direct *= prof.f_table[l - 1];
            assert!((prof.p_table[l] - direct).abs() <= 1e-12 * direct.abs());
        }
        let n = prof.n_levels();
        let sum: f64 = prof.g_table.iter().sum();
        let telescoped = n as f64 * prof.f_table[n - 1].powi(2);
        assert!((sum - telescoped).abs() / telescoped.abs() < 1e-10);
    }

    #[test]
    fn g_trivials() {
        let unit = NonlinearityProfile::constant(1.0, 10);
        for n in 0..10 {
            assert_eq!(g_of_n(&unit, n).unwrap(), 1.0);
        }
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 11).unwrap();
        assert_eq!(g_of_n(&prof, 0).unwrap(), prof.f_table[0].powi(2));
        // against the scalar oracle
        for n in 1..11 {
            let fn_ = f_series(1, n, (0.95, 0.19, 1.0), 1e-14).unwrap();
            let fm1 = f_series(1, n - 1, (0.95, 0.19, 1.0), 1e-14).unwrap();
            let want = (n as f64 + 1.0) * fn_ * fn_ - n as f64 * fm1 * fm1;
            assert!((g_of_n(&prof, n).unwrap() - want).abs() < 1e-11);
        }
        assert!(matches!(g_of_n(&prof, 11), Err(Error::Range(_))));
    }

    #[test]
    fn linearization_small_eta_theta() {
        // ηθ → 0: σ → 0, ε → constant-f limit
        let lin = linearize_f((0.9, 1e-5, 1e-4)).unwrap();
        assert!(lin.sigma.abs() < 1e-15, "sigma = {}", lin.sigma);
        let f0 = f_series(1, 0, (0.9, 1e-5, 1e-4), 1e-14).unwrap();
        assert!((lin.eps - f0).abs() / f0 < 1e-10);
        assert!(lin.sigma <= 0.0);

        // residual bound |f(n) − (ε+σn)| ≤ K·(ηθ)⁴·n² with moderate K
        let (rc, eta, theta) = (0.95, 0.19, 1.0);
        let lin = linearize_f((rc, eta, theta)).unwrap();
        let prof = NonlinearityProfile::build(rc, eta, theta, 21).unwrap();
        let et4 = (eta * theta).powi(4);
        for n in 1..21 {
            let resid = (prof.f_table[n] - (lin.eps + lin.sigma * n as f64)).abs();
            assert!(resid <= 50.0 * et4 * (n * n) as f64, "n={n} resid={resid:.3e}");
        }
    }

    #[test]
    fn gamma_delta_formulas() {
        // ε=1, σ=0 → Γ = 1, Δ = 1 by the printed formulas
        let lin = LinearizedF::from_eps_sigma(1.0, 0.0);
        assert_eq!(lin.gamma_coef, 1.0);
        assert_eq!(lin.delta_coef, 1.0);

        // exact mode reproduces the direct expansion of g with f = ε+σn
        let (eps, sigma) = (1.42, -0.11);
        let lin = LinearizedF::from_eps_sigma(eps, sigma);
        let (gam, del) = lin.gamma_delta(GammaDeltaMode::Exact);
        for n in 0..12 {
            let nf = n as f64;
            let f_n = eps + sigma * nf;
            let f_nm1 = eps + sigma * (nf - 1.0);
            let g_direct = if n == 0 {
                f_n * f_n
            } else {
                (nf + 1.0) * f_n * f_n - nf * f_nm1 * f_nm1
            };
            let g_model = eps * eps - del * nf + gam * nf * nf;
            assert!((g_direct - g_model).abs() < 1e-12, "n={n}");
        }
        // the printed formulas deviate from the exact expansion (documented);
        // just record that they differ for σ ≠ 0
        let (gp, dp) = lin.gamma_delta(GammaDeltaMode::Paper);
        assert!((gp - gam).abs() > 1e-6 || (dp - del).abs() > 1e-6);
    }

    #[test]
    fn f_zero_flagging() {
        // large η at θ = 1 drives f through zero within a few tens of levels
        let prof = NonlinearityProfile::build_with(0.99, 0.8, 1.0, 40, 1e-13, 40001).unwrap();
        let has_sign_change = prof.f_table.windows(2).any(|w| w[0] * w[1] < 0.0);
        assert!(has_sign_change, "expected f to cross zero in this regime");
        let unit = NonlinearityProfile::constant(1.0, 10);
        assert_eq!(unit.first_zero_below(10), None);
    }

    #[test]
    fn big_f_helper() {
        let prof = NonlinearityProfile::build(0.95, 0.19, 1.0, 6).unwrap();
        assert_eq!(prof.big_f(0).unwrap(), 0.0);
        for n in 1..6 {
            assert_eq!(prof.big_f(n).unwrap(), n as f64 * prof.f_table[n - 1].powi(2));
        }
    }
}
