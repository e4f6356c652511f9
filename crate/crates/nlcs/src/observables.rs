//! Nonclassicality metrics of the membrane state: quadrature squeezing S₁/S₂,
//! the Mandel parameter, and Husimi Q-function grids with peak detection.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::evolution::factors;
use crate::fockspace::{DensityMatrix, Ket};
use crate::nonlinearity::NonlinearityProfile;
use crate::states::SuperpositionComponent;

type C64 = Complex64;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureReport {
    pub tau: f64,
    /// ⟨b̂†b̂⟩ (real).
    pub a1: f64,
    /// ⟨b̂²⟩e^{2iτ}.
    pub a2: C64,
    /// ⟨b̂⟩e^{iτ}.
    pub a3: C64,
    pub s1: f64,
    pub s2: f64,
    pub var_x1: f64,
    pub var_x2: f64,
    pub uncertainty_product: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QNormalization {
    Raw,
    /// Divided by a state-dependent constant (ℵ² or ℵ₊²), as in the figures.
    PerPaper(f64),
}

#[derive(Debug, Clone)]
pub struct QGrid {
    pub re_axis: Vec<f64>,
    pub im_axis: Vec<f64>,
    /// values[[i, j]] = Q(re_axis[i] + i·im_axis[j]).
    pub values: Array2<f64>,
    pub normalization: QNormalization,
}

#[derive(Debug, Clone, Copy)]
pub struct QGridSpec {
    /// Grid covers [−half_extent, half_extent]².
    pub half_extent: f64,
    /// Points per axis.
    pub points: usize,
    /// Grow half_extent by 2 until boundary Q < 1e-6·max (up to 8 times).
    pub auto_extend: bool,
}

impl Default for QGridSpec {
    fn default() -> Self {
        QGridSpec { half_extent: 5.0, points: 201, auto_extend: true }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QPeak {
    pub re: f64,
    pub im: f64,
    pub value: f64,
}

// --- moments -----------------------------------------------------------

/// (⟨b⟩, ⟨b²⟩, ⟨n⟩, ⟨n²⟩) from a normalized ket.
fn ket_moments(psi: &Ket) -> (C64, C64, f64, f64) {
    let c = &psi.amplitudes;
    let dim = c.len();
    let mut b = C64::new(0.0, 0.0);
    let mut b2 = C64::new(0.0, 0.0);
    let mut n1 = 0.0;
    let mut n2 = 0.0;
    for k in 0..dim {
        let p = c[k].norm_sqr();
        n1 += k as f64 * p;
        n2 += (k * k) as f64 * p;
        if k + 1 < dim {
            b += c[k].conj() * c[k + 1] * ((k + 1) as f64).sqrt();
        }
        if k + 2 < dim {
            b2 += c[k].conj() * c[k + 2] * (((k + 1) * (k + 2)) as f64).sqrt();
        }
    }
    (b, b2, n1, n2)
}

fn rho_moments(rho: &DensityMatrix) -> (C64, C64, f64, f64) {
    let m = &rho.entries;
    let dim = rho.dim();
    let mut b = C64::new(0.0, 0.0);
    let mut b2 = C64::new(0.0, 0.0);
    let mut n1 = 0.0;
    let mut n2 = 0.0;
    for k in 0..dim {
        let p = m[[k, k]].re;
        n1 += k as f64 * p;
        n2 += (k * k) as f64 * p;
        // Tr(ρ b) = Σ_k ρ[k+1, k]·√(k+1)
        if k + 1 < dim {
            b += m[[k + 1, k]] * ((k + 1) as f64).sqrt();
        }
        if k + 2 < dim {
            b2 += m[[k + 2, k]] * (((k + 1) * (k + 2)) as f64).sqrt();
        }
    }
    (b, b2, n1, n2)
}

fn report_from_moments(tau: f64, b: C64, b2: C64, n1: f64) -> QuadratureReport {
    let i = C64::new(0.0, 1.0);
    let a1 = n1;
    let a2 = b2 * (2.0 * i * tau).exp();
    let a3 = b * (i * tau).exp();
    let s1 = 2.0 * a1 + 2.0 * a2.re - 4.0 * a3.re * a3.re;
    let s2 = 2.0 * a1 - 2.0 * a2.re - 4.0 * a3.im * a3.im;
    let var_x1 = (s1 + 1.0) / 4.0;
    let var_x2 = (s2 + 1.0) / 4.0;
    QuadratureReport { tau, a1, a2, a3, s1, s2, var_x1, var_x2, uncertainty_product: var_x1 * var_x2 }
}

/// Squeezing report for a normalized membrane ket, in the e^{iτ}-rotated frame.
pub fn squeezing_ket(psi: &Ket, tau: f64) -> Result<QuadratureReport> {
    if (psi.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Usage(format!("squeezing: ket norm {} != 1", psi.norm())));
    }
    let (b, b2, n1, _) = ket_moments(psi);
    Ok(report_from_moments(tau, b, b2, n1))
}

pub fn squeezing_rho(rho: &DensityMatrix, tau: f64) -> Result<QuadratureReport> {
    let t = rho.trace();
    if (t.re - 1.0).abs() > 1e-9 || t.im.abs() > 1e-9 {
        return Err(Error::Usage(format!("squeezing: density matrix trace {t} != 1")));
    }
    let (b, b2, n1, _) = rho_moments(rho);
    Ok(report_from_moments(tau, b, b2, n1))
}

/// Mandel parameter (⟨n²⟩−⟨n⟩²)/⟨n⟩ − 1, with the vacuum convention M = 0.
pub fn mandel_ket(psi: &Ket) -> f64 {
    let (_, _, n1, n2) = ket_moments(psi);
    if n1 < 1e-14 {
        return 0.0;
    }
    (n2 - n1 * n1) / n1 - 1.0
}

pub fn mandel_rho(rho: &DensityMatrix) -> f64 {
    let (_, _, n1, n2) = rho_moments(rho);
    if n1 < 1e-14 {
        return 0.0;
    }
    (n2 - n1 * n1) / n1 - 1.0
}

// --- Husimi Q ----------------------------------------------------------

/// Pivoted Cholesky factorization ρ ≈ Σ_r L_r L_r†, stopping when the
/// residual diagonal drops below 1e-12 of the trace.
fn pivoted_cholesky(rho: &Array2<C64>) -> Vec<Array1<C64>> {
    let n = rho.nrows();
    let mut d: Vec<f64> = (0..n).map(|k| rho[[k, k]].re.max(0.0)).collect();
    let trace: f64 = d.iter().sum();
    let tol = 1e-12 * trace.max(1e-300);
    let mut cols: Vec<Array1<C64>> = Vec::new();
    for _ in 0..n.min(256) {
        let (p, &dp) = match d
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        {
            Some(x) => x,
            None => break,
        };
        if dp <= tol {
            break;
        }
        let sq = dp.sqrt();
        let mut col = Array1::<C64>::zeros(n);
        for i in 0..n {
            col[i] = rho[[i, p]];
        }
        for prev in &cols {
            let lp = prev[p].conj();
            for i in 0..n {
                let pi = prev[i];
                col[i] -= pi * lp;
            }
        }
        col.mapv_inplace(|x| x / sq);
        for i in 0..n {
            d[i] = (d[i] - col[i].norm_sqr()).max(0.0);
        }
        cols.push(col);
    }
    cols
}

/// ⟨γ|v⟩ with |γ⟩ an ordinary coherent state, coefficients in log space
/// (|⟨k|γ⟩| ≤ 1 always, so exp() never overflows; underflow is harmless).
fn coherent_overlap(gamma: C64, v: &Array1<C64>, half_ln_fact: &[f64]) -> C64 {
    let g2 = gamma.norm_sqr();
    let ln_g = if g2 > 0.0 { gamma.norm().ln() } else { f64::NEG_INFINITY };
    let arg = gamma.arg();
    let mut acc = C64::new(0.0, 0.0);
    for (k, &vk) in v.iter().enumerate() {
        if vk.norm_sqr() == 0.0 {
            continue;
        }
        let lm = -0.5 * g2 + if k == 0 { 0.0 } else { k as f64 * ln_g } - half_ln_fact[k];
        if lm < -745.0 {
            continue;
        }
        // conj(⟨k|γ⟩)·v_k = e^{−|γ|²/2}(γ*)^k/√k!·v_k
        acc += C64::from_polar(lm.exp(), -(k as f64) * arg) * vk;
    }
    acc
}

fn half_ln_fact_table(dim: usize) -> Vec<f64> {
    (0..dim).map(|k| 0.5 * ln_gamma(k as f64 + 1.0)).collect()
}

fn axis(half_extent: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| -half_extent + 2.0 * half_extent * i as f64 / (points - 1) as f64)
        .collect()
}

fn q_from_columns(cols: &[(f64, Array1<C64>)], spec: &QGridSpec, dim: usize) -> Result<QGrid> {
    let table = half_ln_fact_table(dim);
    let mut half = spec.half_extent;
    for attempt in 0..9 {
        let re = axis(half, spec.points);
        let im = axis(half, spec.points);
        let rows: Vec<Vec<f64>> = re
            .par_iter()
            .map(|&x| {
                im.iter()
                    .map(|&y| {
                        let gamma = C64::new(x, y);
                        let q: f64 = cols
                            .iter()
                            .map(|(w, col)| w * coherent_overlap(gamma, col, &table).norm_sqr())
                            .sum();
                        q / std::f64::consts::PI
                    })
                    .collect()
            })
            .collect();
        let mut values = Array2::<f64>::zeros((spec.points, spec.points));
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                values[[i, j]] = v;
            }
        }
        let max = values.iter().cloned().fold(0.0f64, f64::max);
        let mut boundary = 0.0f64;
        for i in 0..spec.points {
            boundary = boundary
                .max(values[[i, 0]])
                .max(values[[i, spec.points - 1]])
                .max(values[[0, i]])
                .max(values[[spec.points - 1, i]]);
        }
        if !spec.auto_extend || boundary < 1e-6 * max {
            return Ok(QGrid { re_axis: re, im_axis: im, values, normalization: QNormalization::Raw });
        }
        if attempt == 8 {
            break;
        }
        half += 2.0;
    }
    Err(Error::Range(format!(
        "Q grid still carries boundary weight at half-extent {half}; state does not fit"
    )))
}

/// Q(γ) = ⟨γ|ρ|γ⟩/π over a uniform grid.
pub fn husimi_q(rho: &DensityMatrix, spec: &QGridSpec) -> Result<QGrid> {
    let cols: Vec<(f64, Array1<C64>)> =
        pivoted_cholesky(&rho.entries).into_iter().map(|c| (1.0, c)).collect();
    if cols.is_empty() {
        return Err(Error::Numeric("husimi_q: zero density matrix".into()));
    }
    q_from_columns(&cols, spec, rho.dim())
}

/// Q for an explicit low-rank mixture Σ w|v⟩⟨v| (e.g. Eq. 40 components),
/// bypassing the dense density matrix entirely.
pub fn husimi_q_components(comps: &[SuperpositionComponent], spec: &QGridSpec) -> Result<QGrid> {
    if comps.is_empty() {
        return Err(Error::Usage("husimi_q_components: empty component list".into()));
    }
    let dim = comps[0].vector.len();
    let cols: Vec<(f64, Array1<C64>)> =
        comps.iter().map(|c| (c.weight, c.vector.clone())).collect();
    q_from_columns(&cols, spec, dim)
}

pub fn husimi_q_ket(psi: &Ket, spec: &QGridSpec) -> Result<QGrid> {
    let cols = vec![(1.0, psi.amplitudes.clone())];
    q_from_columns(&cols, spec, psi.dim())
}

impl QGrid {
    /// Riemann sum ∫Q d²γ (should be ≈ 1 in raw mode on a covering grid).
    pub fn riemann_sum(&self) -> f64 {
        let dx = self.re_axis[1] - self.re_axis[0];
        let dy = self.im_axis[1] - self.im_axis[0];
        self.values.iter().sum::<f64>() * dx * dy
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn rescale(&mut self, divisor: f64) {
        self.values.mapv_inplace(|v| v / divisor);
        self.normalization = QNormalization::PerPaper(divisor);
    }
}

/// Local maxima over 8-neighborhoods above rel_threshold·max, plus all
/// pairwise distances (the "separation" metric).
pub fn count_q_peaks(grid: &QGrid, rel_threshold: f64) -> (Vec<QPeak>, Vec<f64>) {
    let n = grid.re_axis.len();
    let m = grid.im_axis.len();
    let max = grid.max_value();
    let thr = rel_threshold * max;
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        for j in 1..m - 1 {
            let v = grid.values[[i, j]];
            if v < thr {
                continue;
            }
            let mut is_peak = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    if grid.values[[(i as i64 + di) as usize, (j as i64 + dj) as usize]] > v {
                        is_peak = false;
                        break 'nb;
                    }
                }
            }
            if is_peak {
                peaks.push(QPeak { re: grid.re_axis[i], im: grid.im_axis[j], value: v });
            }
        }
    }
    peaks.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());
    let mut dists = Vec::new();
    for (i, a) in peaks.iter().enumerate() {
        for b in &peaks[i + 1..] {
            dists.push(((a.re - b.re).powi(2) + (a.im - b.im).powi(2)).sqrt());
        }
    }
    (peaks, dists)
}

/// The paper's printed q_n formula (which omits P(l) in the overlap sum),
/// kept as a comparison mode: Σ_n (|α|^{2n}/n!)e^{−2n²ImΘg(0)}·|e^{Λ_n|γ|e^{iφ}}|²/π.
pub fn qn_paper_formula(
    alpha: C64,
    tau: f64,
    beta: C64,
    profile: &NonlinearityProfile,
    gamma: C64,
    n_max: usize,
) -> f64 {
    let fac = factors(tau, beta);
    let g0 = profile.g_table[0];
    let alpha2 = alpha.norm_sqr();
    let mut total = 0.0;
    for n in 0..=n_max {
        let ln_pw = -alpha2 + if n == 0 { 0.0 } else { n as f64 * alpha2.ln() }
            - ln_gamma(n as f64 + 1.0);
        let w = -2.0 * (n * n) as f64 * fac.theta_big.im * g0;
        let lam = fac.lambda_n(n);
        // |Σ_l (Λ_n|γ|e^{iφ})^l/l!|² = e^{2Re(Λ_n γ̄ᵉᶠᶠ)} with γᵉᶠᶠ = |γ|e^{iφ}
        let z = lam * C64::from_polar(gamma.norm(), gamma.arg());
        total += (ln_pw + w + 2.0 * z.re).exp();
    }
    total / std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::Basis;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn squeezing_trivials() {
        let vac = Ket::fock(10, 0, Basis::Membrane).unwrap();
        let r = squeezing_ket(&vac, 0.7).unwrap();
        assert!(r.s1.abs() < 1e-12 && r.s2.abs() < 1e-12);

        let coh = Ket::coherent(40, c(0.9, 0.4), Basis::Membrane);
        let r = squeezing_ket(&coh, 1.3).unwrap();
        assert!(r.s1.abs() < 1e-9 && r.s2.abs() < 1e-9, "S1={} S2={}", r.s1, r.s2);
        assert!((r.uncertainty_product - 1.0 / 16.0).abs() < 1e-9);
        assert!((r.s1 - (4.0 * r.var_x1 - 1.0)).abs() < 1e-15);
        assert!((r.s2 - (4.0 * r.var_x2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn squeezing_rejects_unnormalized() {
        let mut bad = Ket::fock(5, 0, Basis::Membrane).unwrap();
        bad.amplitudes[0] = c(2.0, 0.0);
        assert!(matches!(squeezing_ket(&bad, 0.0), Err(Error::Usage(_))));
    }

    #[test]
    fn squeezing_global_phase_invariant() {
        let base = Ket::coherent(40, c(0.5, 0.8), Basis::Membrane);
        let r0 = squeezing_ket(&base, 0.9).unwrap();
        for ph in [0.3, 1.9, 4.4] {
            let rot = Ket::new(base.amplitudes.mapv(|x| x * C64::from_polar(1.0, ph)), Basis::Membrane);
            let r = squeezing_ket(&rot, 0.9).unwrap();
            assert!((r.s1 - r0.s1).abs() < 1e-12);
            assert!((r.s2 - r0.s2).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezing_rho_matches_ket() {
        let psi = Ket::coherent(30, c(0.4, -0.6), Basis::Membrane);
        let rho = DensityMatrix::from_ket(&psi);
        let a = squeezing_ket(&psi, 2.2).unwrap();
        let b = squeezing_rho(&rho, 2.2).unwrap();
        assert!((a.s1 - b.s1).abs() < 1e-12);
        assert!((a.s2 - b.s2).abs() < 1e-12);
    }

    #[test]
    fn mandel_trivials() {
        let coh = Ket::coherent(60, c(1.1, 0.7), Basis::Membrane);
        assert!(mandel_ket(&coh).abs() < 1e-10);
        let fock = Ket::fock(10, 4, Basis::Membrane).unwrap();
        assert!((mandel_ket(&fock) + 1.0).abs() < 1e-14);
        let vac = Ket::fock(10, 0, Basis::Membrane).unwrap();
        assert_eq!(mandel_ket(&vac), 0.0);
    }

    #[test]
    fn mandel_classical_mixture_nonnegative() {
        // classical mixtures of coherent states are super-Poissonian
        let dim = 50;
        let mut state = 0xdeadbeefu64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..5 {
            let mut rho = Array2::<C64>::zeros((dim, dim));
            let mut wsum = 0.0;
            for _ in 0..3 {
                let w = rnd() + 0.1;
                let alpha = c(2.0 * rnd() - 1.0, 2.0 * rnd() - 1.0);
                let k = Ket::coherent(dim, alpha, Basis::Membrane);
                for i in 0..dim {
                    for j in 0..dim {
                        rho[[i, j]] += k.amplitudes[i] * k.amplitudes[j].conj() * w;
                    }
                }
                wsum += w;
            }
            rho.mapv_inplace(|x| x / wsum);
            let dm = DensityMatrix::new(rho, Basis::Membrane);
            assert!(mandel_rho(&dm) >= -1e-10);
        }
    }

    #[test]
    fn husimi_vacuum_and_coherent() {
        let vac = DensityMatrix::from_ket(&Ket::fock(10, 0, Basis::Membrane).unwrap());
        let spec = QGridSpec { half_extent: 5.0, points: 101, auto_extend: false };
        let grid = husimi_q(&vac, &spec).unwrap();
        let max = grid.max_value();
        assert!((max - 1.0 / std::f64::consts::PI).abs() < 1e-6, "max = {max}");
        // peak at origin
        let (peaks, _) = count_q_peaks(&grid, 0.1);
        assert_eq!(peaks.len(), 1);
        assert!(peaks[0].re.abs() < 0.06 && peaks[0].im.abs() < 0.06);
        // Q(γ) = e^{−|γ|²}/π at a couple of points
        let i = 70usize;
        let j = 40usize;
        let g2 = grid.re_axis[i].powi(2) + grid.im_axis[j].powi(2);
        let want = (-g2).exp() / std::f64::consts::PI;
        assert!((grid.values[[i, j]] - want).abs() < 1e-12);
        // Riemann sum ≈ 1
        let s = grid.riemann_sum();
        assert!((0.99..=1.001).contains(&s), "sum = {s}");

        // coherent state peaks at α
        let a = c(1.5, -0.8);
        let coh = DensityMatrix::from_ket(&Ket::coherent(40, a, Basis::Membrane));
        let grid = husimi_q(&coh, &QGridSpec::default()).unwrap();
        let (peaks, _) = count_q_peaks(&grid, 0.1);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].re - a.re).abs() < 0.06 && (peaks[0].im - a.im).abs() < 0.06);
    }

    #[test]
    fn husimi_cat_two_peaks() {
        // ideal two-component coherent cat at ζ = ±2
        let dim = 40;
        let z = 2.0;
        let p = Ket::coherent(dim, c(z, 0.0), Basis::Membrane);
        let m = Ket::coherent(dim, c(-z, 0.0), Basis::Membrane);
        let mut amps = &p.amplitudes + &m.amplitudes;
        let nrm = amps.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        amps.mapv_inplace(|x| x / nrm);
        let rho = DensityMatrix::from_ket(&Ket::new(amps, Basis::Membrane));
        let grid = husimi_q(&rho, &QGridSpec::default()).unwrap();
        let (peaks, dists) = count_q_peaks(&grid, 0.1);
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        assert!((dists[0] - 2.0 * z).abs() < 0.2, "separation = {}", dists[0]);
        assert!(grid.values.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn husimi_low_rank_matches_direct() {
        // mixed two-component state: Cholesky route vs direct ⟨γ|ρ|γ⟩
        let dim = 30;
        let a = Ket::coherent(dim, c(1.0, 0.5), Basis::Membrane);
        let b = Ket::coherent(dim, c(-0.7, 0.2), Basis::Membrane);
        let mut rho = Array2::<C64>::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                rho[[i, j]] = a.amplitudes[i] * a.amplitudes[j].conj() * 0.6
                    + b.amplitudes[i] * b.amplitudes[j].conj() * 0.4;
            }
        }
        let dm = DensityMatrix::new(rho.clone(), Basis::Membrane);
        let spec = QGridSpec { half_extent: 4.0, points: 41, auto_extend: false };
        let grid = husimi_q(&dm, &spec).unwrap();
        let table = half_ln_fact_table(dim);
        for &i in &[3usize, 17, 33] {
            for &j in &[5usize, 20, 38] {
                let gamma = c(grid.re_axis[i], grid.im_axis[j]);
                // direct: unnormalized true coherent coefficients and sandwich
                // (Ket::coherent renormalizes over the truncation, which is
                // exactly the discrepancy we must not bake into the oracle)
                let mut gk = Array1::<C64>::zeros(dim);
                let mut ck = c((-gamma.norm_sqr() / 2.0).exp(), 0.0);
                gk[0] = ck;
                for k in 1..dim {
                    ck *= gamma / (k as f64).sqrt();
                    gk[k] = ck;
                }
                let v = rho.dot(&gk);
                let direct: C64 = gk.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                let want = direct.re / std::f64::consts::PI;
                assert!(
                    (grid.values[[i, j]] - want).abs() < 1e-10,
                    "({i},{j}): {} vs {want}",
                    grid.values[[i, j]]
                );
            }
        }
        let _ = table;
    }

    #[test]
    fn auto_extend_grows_grid() {
        // coherent state far outside the initial window
        let a = c(6.5, 0.0);
        let psi = Ket::coherent(120, a, Basis::Membrane);
        let spec = QGridSpec { half_extent: 5.0, points: 101, auto_extend: true };
        let grid = husimi_q_ket(&psi, &spec).unwrap();
        assert!(grid.re_axis.last().unwrap() > &6.5);
        let (peaks, _) = count_q_peaks(&grid, 0.1);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].re - 6.5).abs() < 0.2);
    }
}
