//! Truncated-Fock-space linear algebra: ladder operators, dense matrix
//! exponentials, tensor products, partial trace, fidelities.
//!
//! Everything is dense `Array2<Complex64>`. Hermitian eigenproblems (needed by
//! Uhlmann fidelity, trace distance and positivity checks) go through a real
//! symmetric Jacobi solver on the 2n×2n embedding [[A, -B], [B, A]] of
//! H = A + iB, which keeps the crate free of LAPACK linkage.

use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Which mode(s) an operator or state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Field,
    Membrane,
    /// Joint field⊗membrane space, field index slow: row = n·dim_m + k.
    Joint { dim_f: usize, dim_m: usize },
}

#[derive(Debug, Clone)]
pub struct Ket {
    pub amplitudes: Array1<C64>,
    pub basis: Basis,
}

#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub entries: Array2<C64>,
    pub basis: Basis,
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub entries: Array2<C64>,
    pub basis: Basis,
}

impl Ket {
    pub fn new(amplitudes: Array1<C64>, basis: Basis) -> Self {
        Ket { amplitudes, basis }
    }

    /// Fock basis state |k⟩.
    pub fn fock(dim: usize, k: usize, basis: Basis) -> Result<Self> {
        if k >= dim {
            return Err(Error::Domain(format!("fock level {k} outside dim {dim}")));
        }
        let mut a = Array1::zeros(dim);
        a[k] = C64::new(1.0, 0.0);
        Ok(Ket { amplitudes: a, basis })
    }

    /// Truncated coherent state, normalized over the kept levels.
    pub fn coherent(dim: usize, alpha: C64, basis: Basis) -> Self {
        let mut a = Array1::zeros(dim);
        // c_k = α^k/√k!, built recursively to avoid factorial overflow
        let mut c = C64::new(1.0, 0.0);
        a[0] = c;
        for k in 1..dim {
            c *= alpha / (k as f64).sqrt();
            a[k] = c;
        }
        let mut ket = Ket { amplitudes: a, basis };
        ket.normalize();
        ket
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
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

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl DenseOperator {
    pub fn new(entries: Array2<C64>, basis: Basis) -> Self {
        DenseOperator { entries, basis }
    }

    pub fn identity(dim: usize, basis: Basis) -> Self {
        DenseOperator { entries: Array2::eye(dim), basis }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn dagger(&self) -> Self {
        DenseOperator { entries: dagger(&self.entries.view()), basis: self.basis }
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        Ket { amplitudes: self.entries.dot(&ket.amplitudes), basis: ket.basis }
    }

    pub fn matmul(&self, other: &DenseOperator) -> Self {
        DenseOperator { entries: self.entries.dot(&other.entries), basis: self.basis }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = &self.entries - &dagger(&self.entries.view());
        d.iter().map(|c| c.norm()).fold(0.0, f64::max) <= tol
    }
}

impl DensityMatrix {
    pub fn new(entries: Array2<C64>, basis: Basis) -> Self {
        DensityMatrix { entries, basis }
    }

    pub fn from_ket(ket: &Ket) -> Self {
        let n = ket.dim();
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[[i, j]] = ket.amplitudes[i] * ket.amplitudes[j].conj();
            }
        }
        DensityMatrix { entries: m, basis: ket.basis }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().iter().sum()
    }

    pub fn normalize(&mut self) {
        let t = self.trace().re;
        if t != 0.0 {
            self.entries.mapv_inplace(|c| c / t);
        }
    }

    /// Enforce exact Hermiticity: ρ ← (ρ + ρ†)/2.
    pub fn symmetrize(&mut self) {
        let h = dagger(&self.entries.view());
        self.entries = (&self.entries + &h) * C64::new(0.5, 0.0);
    }

    /// ⟨A⟩ = Tr(ρA).
    pub fn expect(&self, op: &ArrayView2<C64>) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.entries[[i, k]] * op[[k, i]];
            }
        }
        acc
    }

    /// Population of level k.
    pub fn population(&self, k: usize) -> f64 {
        self.entries[[k, k]].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (vals, _) = eigh(&self.entries.view());
        vals.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Basic sanity: unit trace, Hermitian, near-positive.
    pub fn check_valid(&self) -> Result<()> {
        let t = self.trace();
        if (t.re - 1.0).abs() > 1e-9 || t.im.abs() > 1e-9 {
            return Err(Error::Numeric(format!("density matrix trace = {t}, expected 1")));
        }
        let herm_dev = {
            let d = &self.entries - &dagger(&self.entries.view());
            d.iter().map(|c| c.norm()).fold(0.0, f64::max)
        };
        if herm_dev > 1e-12 {
            return Err(Error::Numeric(format!("density matrix non-Hermitian by {herm_dev:.3e}")));
        }
        let lam = self.min_eigenvalue();
        if lam < -1e-9 {
            return Err(Error::Numeric(format!("density matrix min eigenvalue {lam:.3e} < -1e-9")));
        }
        Ok(())
    }
}

pub fn dagger(m: &ArrayView2<C64>) -> Array2<C64> {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[[j, i]] = m[[i, j]].conj();
        }
    }
    out
}

/// (lower, raise, number) on a dim-level truncation.
pub fn ladder_ops(dim: usize, basis: Basis) -> Result<(DenseOperator, DenseOperator, DenseOperator)> {
    if dim < 2 {
        return Err(Error::Domain(format!("ladder_ops requires dim >= 2, got {dim}")));
    }
    let mut lower = Array2::zeros((dim, dim));
    let mut number = Array2::zeros((dim, dim));
    for k in 1..dim {
        lower[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    for k in 0..dim {
        number[[k, k]] = C64::new(k as f64, 0.0);
    }
    let raise = dagger(&lower.view());
    Ok((
        DenseOperator::new(lower, basis),
        DenseOperator::new(raise, basis),
        DenseOperator::new(number, basis),
    ))
}

/// Kronecker product, left factor index slow (matches `Basis::Joint` layout).
pub fn kron(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> Array2<C64> {
    let (ra, ca) = (a.nrows(), a.ncols());
    let (rb, cb) = (b.nrows(), b.ncols());
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

fn one_norm(m: &ArrayView2<C64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|c| c.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Matrix exponential by scaling-and-squaring with a Taylor series on the
/// scaled matrix. Accuracy contract: 1e-12 relative Frobenius error.
pub fn expm(op: &DenseOperator) -> Result<DenseOperator> {
    if op.entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Numeric("expm: non-finite entries".into()));
    }
    Ok(DenseOperator::new(expm_raw(&op.entries.view()), op.basis))
}

pub fn expm_raw(m: &ArrayView2<C64>) -> Array2<C64> {
    let n = m.nrows();
    let nrm = one_norm(m);
    // scale so the series argument has 1-norm <= 0.5
    let s = if nrm > 0.5 { (nrm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.mapv(|c| c / 2f64.powi(s as i32));
    let mut result = Array2::eye(n);
    let mut term: Array2<C64> = Array2::eye(n);
    for k in 1..=30 {
        term = term.dot(&scaled) / C64::new(k as f64, 0.0);
        result = result + &term;
        let tn = one_norm(&term.view());
        if tn < 1e-17 * (1.0 + one_norm(&result.view())) {
            break;
        }
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

/// Trace out the field mode of a joint density matrix.
pub fn partial_trace_field(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let Basis::Joint { dim_f, dim_m } = rho.basis else {
        return Err(Error::Usage("partial_trace_field requires a joint-basis density matrix".into()));
    };
    if rho.dim() != dim_f * dim_m {
        return Err(Error::Usage(format!(
            "joint density matrix dim {} inconsistent with {}×{}",
            rho.dim(),
            dim_f,
            dim_m
        )));
    }
    let mut out = Array2::zeros((dim_m, dim_m));
    for n in 0..dim_f {
        let o = n * dim_m;
        for k in 0..dim_m {
            for l in 0..dim_m {
                out[[k, l]] += rho.entries[[o + k, o + l]];
            }
        }
    }
    Ok(DensityMatrix::new(out, Basis::Membrane))
}

/// |⟨a|b⟩|² for kets.
pub fn fidelity(a: &Ket, b: &Ket) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Usage(format!("fidelity: dim mismatch {} vs {}", a.dim(), b.dim())));
    }
    Ok(a.inner(b).norm_sqr())
}

/// ⟨ψ|ρ|ψ⟩ for a ket against a density matrix.
pub fn fidelity_ket_rho(psi: &Ket, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::Usage(format!("fidelity: dim mismatch {} vs {}", psi.dim(), rho.dim())));
    }
    let v = rho.entries.dot(&psi.amplitudes);
    let f: C64 = psi.amplitudes.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(f.re.clamp(0.0, 1.0))
}

/// Uhlmann fidelity (Tr√(√ρ σ √ρ))².
pub fn fidelity_mixed(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Usage(format!(
            "fidelity: dim mismatch {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let sqrt_rho = herm_func(&rho.entries.view(), |x| if x > 0.0 { x.sqrt() } else { 0.0 });
    let inner = sqrt_rho.dot(&sigma.entries).dot(&sqrt_rho);
    // inner is Hermitian PSD up to rounding; Tr√ = Σ √λ⁺
    let (vals, _) = eigh(&inner.view());
    let tr: f64 = vals.iter().map(|&x| if x > 0.0 { x.sqrt() } else { 0.0 }).sum();
    Ok((tr * tr).min(1.0))
}

/// Trace distance ½Tr|ρ − σ|.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Usage(format!(
            "trace_distance: dim mismatch {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let mut d = &rho.entries - &sigma.entries;
    let h = dagger(&d.view());
    d = (d + h) * C64::new(0.5, 0.0);
    let (vals, _) = eigh(&d.view());
    Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
}

/// Truncation-leak guard: total population at and above level
/// floor(0.999·(dim−1)) must stay below 1e-8.
pub fn leak_guard(populations: &[f64], label: &str) -> Result<()> {
    let dim = populations.len();
    if dim < 2 {
        return Ok(());
    }
    let idx = (0.999 * (dim - 1) as f64).floor() as usize;
    let leak: f64 = populations[idx..].iter().sum();
    if leak > 1e-8 {
        return Err(Error::TruncationLeak(format!(
            "{label}: population {leak:.3e} at levels >= {idx} of dim {dim} exceeds 1e-8; raise the truncation"
        )));
    }
    Ok(())
}

/// Ket populations |c_k|², convenience for the leak guard.
pub fn ket_populations(ket: &Ket) -> Vec<f64> {
    ket.amplitudes.iter().map(|c| c.norm_sqr()).collect()
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblem via real Jacobi on the [[A,-B],[B,A]] embedding.
// ---------------------------------------------------------------------------

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
/// Each eigenpair of H appears twice in the embedding; we keep one per pair.
pub fn eigh(h: &ArrayView2<C64>) -> (Vec<f64>, Array2<C64>) {
    let n = h.nrows();
    let mut e = embed(h);
    let mut v = Array2::<f64>::eye(2 * n);
    jacobi_sweeps(&mut e, &mut v);
    // collect (eigenvalue, real vector) pairs, sorted ascending
    let mut pairs: Vec<(f64, usize)> = (0..2 * n).map(|j| (e[[j, j]], j)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // The embedded spectrum covers every complex eigenvalue exactly twice: if
    // (x;y) is an eigenvector then so is (−y;x) (the embedding of i·(x+iy)).
    // Sorted ascending, the diagonal therefore splits into adjacent duplicate
    // pairs; each pair contributes one complex eigenvalue and one complex
    // eigenvector. Taking one value per pair fixes the output count at n by
    // construction — no rank-detection threshold, which would be fragile in
    // quasi-degenerate clusters (e.g. the near-zero spectrum of a low-rank
    // difference matrix). Per pair, keep whichever of the two real columns
    // survives Gram-Schmidt against the kept set with the larger residual.
    let mut vals: Vec<f64> = Vec::with_capacity(n);
    let mut vecs: Vec<Array1<C64>> = Vec::with_capacity(n);
    for pr in pairs.chunks(2) {
        let lam = 0.5 * (pr[0].0 + pr[1].0);
        let mut best_nrm = -1.0f64;
        let mut best = Array1::<C64>::zeros(n);
        for &(_, j) in pr {
            let mut cand = Array1::<C64>::zeros(n);
            for i in 0..n {
                cand[i] = C64::new(v[[i, j]], v[[i + n, j]]);
            }
            // two MGS passes for orthogonality against the kept set
            for _ in 0..2 {
                for u in vecs.iter() {
                    let ov: C64 = u.iter().zip(cand.iter()).map(|(a, b)| a.conj() * b).sum();
                    for i in 0..n {
                        let ui = u[i];
                        cand[i] -= ov * ui;
                    }
                }
            }
            let nrm = cand.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if nrm > best_nrm {
                best_nrm = nrm;
                best = cand;
            }
        }
        if best_nrm < 1e-8 {
            // both columns already captured (deep quasi-degenerate cluster):
            // complete the basis with the coordinate direction least
            // represented by the kept set, re-orthogonalized
            let mut covered = vec![0.0f64; n];
            for u in vecs.iter() {
                for i in 0..n {
                    covered[i] += u[i].norm_sqr();
                }
            }
            let imin = covered
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(i, _)| i)
                .unwrap_or(0);
            best = Array1::<C64>::zeros(n);
            best[imin] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for u in vecs.iter() {
                    let ov: C64 = u.iter().zip(best.iter()).map(|(a, b)| a.conj() * b).sum();
                    for i in 0..n {
                        let ui = u[i];
                        best[i] -= ov * ui;
                    }
                }
            }
            best_nrm = best.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        }
        best.mapv_inplace(|c| c / best_nrm);
        vals.push(lam);
        vecs.push(best);
    }
    let mut out = Array2::<C64>::zeros((n, vals.len()));
    for (j, u) in vecs.iter().enumerate() {
        for i in 0..n {
            out[[i, j]] = u[i];
        }
    }
    (vals, out)
}

/// Apply a scalar function to a Hermitian matrix through its spectrum.
pub fn herm_func(h: &ArrayView2<C64>, f: impl Fn(f64) -> f64) -> Array2<C64> {
    let n = h.nrows();
    let (vals, vecs) = eigh(h);
    let mut out = Array2::<C64>::zeros((n, n));
    for (j, &lam) in vals.iter().enumerate() {
        let flam = f(lam);
        if flam == 0.0 {
            continue;
        }
        for i in 0..n {
            for k in 0..n {
                out[[i, k]] += vecs[[i, j]] * vecs[[k, j]].conj() * flam;
            }
        }
    }
    out
}

fn embed(h: &ArrayView2<C64>) -> Array2<f64> {
    let n = h.nrows();
    let mut e = Array2::<f64>::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let c = h[[i, j]];
            e[[i, j]] = c.re;
            e[[i + n, j + n]] = c.re;
            e[[i, j + n]] = -c.im;
            e[[i + n, j]] = c.im;
        }
    }
    // exact symmetry, averaging away rounding in the caller's Hermiticity
    for i in 0..2 * n {
        for j in (i + 1)..2 * n {
            let m = 0.5 * (e[[i, j]] + e[[j, i]]);
            e[[i, j]] = m;
            e[[j, i]] = m;
        }
    }
    e
}

fn jacobi_sweeps(a: &mut Array2<f64>, v: &mut Array2<f64>) {
    let n = a.nrows();
    let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let tol = 1e-14 * fro;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[[p, q]] * a[[p, q]];
            }
        }
        if off.sqrt() <= tol {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
}
