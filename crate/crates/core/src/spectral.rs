//! Shift-invert Lanczos for the pencil `(S, M)`, resolvents and
//! resolvent-difference norms in the `M`-geometry, and log-log rate fits.

use faer::linalg::solvers::SolveCore;
use faer::sparse::linalg::solvers::Llt;
use faer::{Conj, Mat, MatMut, Side};
use log::{debug, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::fem::AssembledForm;
use crate::scalar::{axpy, dot, norm2, Scalar};
use crate::sparse::CsrMatrix;

/// Cholesky factorization of `S - shift·M`.
pub struct ShiftedFactor<T: Scalar> {
    llt: Llt<usize, T>,
    n: usize,
    shift: f64,
}

impl<T: Scalar> ShiftedFactor<T> {
    /// Fails unless `S - shift·M` is Hermitian positive definite.
    pub fn new(s: &CsrMatrix<T>, m: Option<&CsrMatrix<f64>>, shift: f64) -> Result<Self> {
        let shifted;
        let a = match m {
            Some(m) if shift != 0.0 => {
                shifted = s.add_scaled(m, T::from_f64(-shift))?;
                &shifted
            }
            _ => s,
        };
        let sym = a.pattern().symbolic_llt()?;
        let vals = a.csc_values();
        let llt = Llt::try_new_with_symbolic(sym, a.as_faer(&vals), Side::Lower).map_err(|e| {
            Error::Factorization(format!("S - ({shift})M is not positive definite: {e:?}"))
        })?;
        Ok(Self {
            llt,
            n: a.n(),
            shift,
        })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn solve_in_place(&self, x: &mut [T]) {
        let n = self.n;
        self.llt
            .solve_in_place_with_conj(Conj::No, MatMut::from_column_major_slice_mut(x, n, 1));
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// `S - σM` with `σ` lowered by `max(|σ|, 1)` after each failed factorization.
fn factor_below<T: Scalar>(
    s: &CsrMatrix<T>,
    m: &CsrMatrix<f64>,
    mut sigma: f64,
    retries: usize,
) -> Result<(ShiftedFactor<T>, usize)> {
    let mut last = None;
    for attempt in 0..=retries {
        match ShiftedFactor::new(s, Some(m), sigma) {
            Ok(f) => return Ok((f, attempt + 1)),
            Err(e) => {
                debug!("factorization at shift {sigma} failed: {e}");
                last = Some(e);
                sigma -= sigma.abs().max(1.0);
            }
        }
    }
    Err(Error::Factorization(format!(
        "no positive definite shift after {retries} retries (last: {})",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EigOptions {
    /// Bound on `‖Sv - λMv‖₂ / ‖v‖_M`.
    pub tol: f64,
    /// Relative Ritz residual at which a Lanczos pair is locked.
    pub lanczos_tol: f64,
    /// Budget for the Krylov basis in bytes; caps the basis dimension.
    pub memory_bytes: usize,
    pub max_dim: usize,
    pub max_restarts: usize,
    pub shift_retries: usize,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            lanczos_tol: 1e-12,
            memory_bytes: 200_000_000,
            max_dim: 160,
            max_restarts: 40,
            shift_retries: 5,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralResult<T> {
    pub eigenvalues: Vec<f64>,
    /// `M`-orthonormal.
    pub eigenvectors: Vec<Vec<T>>,
    pub residuals: Vec<f64>,
    pub shift: f64,
    /// Largest imaginary part seen in a Rayleigh quotient.
    pub max_ritz_imag: f64,
    pub factorizations: usize,
    pub solves: usize,
}

/// M-inner-product workspace around the operator `(S - σM)⁻¹ M`.
struct ShiftInvert<'a, T: Scalar> {
    factor: &'a ShiftedFactor<T>,
    m: &'a CsrMatrix<f64>,
    solves: usize,
}

fn mass_apply<T: Scalar>(m: &CsrMatrix<f64>, x: &[T]) -> Vec<T> {
    let rp = m.pattern().row_ptr();
    let ci = m.pattern().col_idx();
    let v = m.values();
    (0..m.n())
        .map(|i| {
            let mut acc = T::from_f64(0.0);
            for p in rp[i]..rp[i + 1] {
                acc += x[ci[p]].scale(v[p]);
            }
            acc
        })
        .collect()
}

fn m_norm<T: Scalar>(m: &CsrMatrix<f64>, x: &[T]) -> f64 {
    dot(x, &mass_apply(m, x)).re_part().max(0.0).sqrt()
}

impl<T: Scalar> ShiftInvert<'_, T> {
    fn apply_from_mass(&mut self, mx: &[T]) -> Vec<T> {
        self.solves += 1;
        self.factor.solve(mx)
    }
}

struct Basis<T> {
    v: Vec<Vec<T>>,
    mv: Vec<Vec<T>>,
}

impl<T: Scalar> Basis<T> {
    fn new() -> Self {
        Self {
            v: Vec::new(),
            mv: Vec::new(),
        }
    }

    /// Classical Gram–Schmidt twice; returns accumulated coefficients.
    fn orthogonalize(&self, w: &mut [T]) -> Vec<T> {
        let mut coef = vec![T::from_f64(0.0); self.v.len()];
        for _ in 0..2 {
            for (i, (b, mb)) in self.v.iter().zip(&self.mv).enumerate() {
                let c = dot(mb, w);
                axpy(-c, b, w);
                coef[i] += c;
            }
        }
        coef
    }

    fn push(&mut self, v: Vec<T>, mv: Vec<T>) {
        self.v.push(v);
        self.mv.push(mv);
    }
}

fn random_vector<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    (0..n).map(|_| T::sample(rng)).collect()
}

struct TopPair<T> {
    theta: f64,
    vector: Vec<T>,
    converged: bool,
    max_imag: f64,
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, Mat<f64>) {
    let k = alpha.len();
    let t = Mat::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .expect("tridiagonal eigendecomposition");
    let s = evd.S().column_vector();
    ((0..k).map(|i| s[i]).collect(), evd.U().to_owned())
}

/// Largest eigenpair of the shift-invert operator restricted to the
/// `M`-orthogonal complement of `locked`.
fn lanczos_top<T: Scalar>(
    op: &mut ShiftInvert<'_, T>,
    locked: &Basis<T>,
    start: Vec<T>,
    max_dim: usize,
    tol: f64,
) -> TopPair<T> {
    let m = op.m;
    let mut q = start;
    locked.orthogonalize(&mut q);
    let nq = m_norm(m, &q);
    for x in q.iter_mut() {
        *x = x.scale(1.0 / nq);
    }
    let mut basis = Basis::new();
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut max_imag: f64 = 0.0;
    let mut mq = mass_apply(m, &q);
    basis.push(q, mq.clone());
    loop {
        let j = basis.v.len() - 1;
        let mut w = op.apply_from_mass(&mq);
        locked.orthogonalize(&mut w);
        let coef = basis.orthogonalize(&mut w);
        max_imag = max_imag.max(coef[j].im_part().abs());
        alpha.push(coef[j].re_part());
        let mw = mass_apply(m, &w);
        let b = dot(&w, &mw).re_part().max(0.0).sqrt();
        let dim = j + 1;
        let check = dim >= max_dim || dim % 4 == 0 || b == 0.0 || dim < 4;
        if check {
            let (theta, y) = tridiagonal_eigen(&alpha, &beta);
            let top = dim - 1;
            let th = theta[top];
            let res = (b * y[(dim - 1, top)]).abs();
            let converged = res <= tol * th.abs() || b <= 1e-300;
            if converged || dim >= max_dim {
                let n = basis.v[0].len();
                let mut v = vec![T::from_f64(0.0); n];
                for (i, bi) in basis.v.iter().enumerate() {
                    axpy(T::from_f64(y[(i, top)]), bi, &mut v);
                }
                return TopPair {
                    theta: th,
                    vector: v,
                    converged,
                    max_imag,
                };
            }
        }
        beta.push(b);
        for x in w.iter_mut() {
            *x = x.scale(1.0 / b);
        }
        mq = mw.into_iter().map(|x| x.scale(1.0 / b)).collect();
        basis.push(w, mq.clone());
    }
}

fn pencil_residual<T: Scalar>(s: &CsrMatrix<T>, m: &CsrMatrix<f64>, v: &[T], lambda: f64) -> f64 {
    let sv = s.matvec(v);
    let mv = mass_apply(m, v);
    let r: Vec<T> = sv.iter().zip(&mv).map(|(a, b)| *a - b.scale(lambda)).collect();
    norm2(&r) / dot(v, &mv).re_part().max(0.0).sqrt()
}

/// Rayleigh–Ritz on the span of `vs` (assumed `M`-orthonormal).
fn rayleigh_ritz<T: Scalar>(
    s: &CsrMatrix<T>,
    m: &CsrMatrix<f64>,
    vs: &[Vec<T>],
) -> (Vec<f64>, Vec<Vec<T>>, f64) {
    let k = vs.len();
    let svs: Vec<Vec<T>> = vs.iter().map(|v| s.matvec(v)).collect();
    let g = Mat::<T>::from_fn(k, k, |i, j| dot(&vs[i], &svs[j]));
    let mut imag: f64 = 0.0;
    for i in 0..k {
        imag = imag.max(g[(i, i)].im_part().abs());
    }
    let evd = g.self_adjoint_eigen(Side::Lower).expect("small Hermitian eigenproblem");
    let lam: Vec<f64> = (0..k).map(|i| evd.S().column_vector()[i].re_part()).collect();
    let u = evd.U();
    let n = vs[0].len();
    let rotated = (0..k)
        .map(|c| {
            let mut v = vec![T::from_f64(0.0); n];
            for (i, vi) in vs.iter().enumerate() {
                axpy(u[(i, c)], vi, &mut v);
            }
            let nv = m_norm(m, &v);
            v.iter().map(|x| x.scale(1.0 / nv)).collect()
        })
        .collect();
    (lam, rotated, imag)
}

fn m_orthonormalize<T: Scalar>(m: &CsrMatrix<f64>, vs: &mut Vec<Vec<T>>) {
    let mut basis = Basis::new();
    for v in vs.drain(..) {
        let mut v = v;
        basis.orthogonalize(&mut v);
        let nv = m_norm(m, &v);
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / nv));
        let mv = mass_apply(m, &v);
        basis.push(v, mv);
    }
    *vs = basis.v;
}

/// Lumped-mass Gershgorin estimate of the bottom of the pencil.
pub fn gershgorin_shift<T: Scalar>(s: &CsrMatrix<T>, m: &CsrMatrix<f64>) -> f64 {
    let mut lo = f64::INFINITY;
    for i in 0..s.n() {
        let mut d = 0.0;
        let mut r = 0.0;
        for (j, v) in s.pattern().row(i).iter().zip(&s.values()[s.pattern().row_ptr()[i]..]) {
            if *j == i {
                d = v.re_part();
            } else {
                r += v.modulus();
            }
        }
        let lump: f64 = m.pattern().row(i).iter().map(|&j| m.get(i, j)).sum();
        lo = lo.min((d - r) / lump);
    }
    lo - 1.0
}

fn memory_dim<T: Scalar>(n: usize, opts: &EigOptions) -> usize {
    let per = 2 * n * std::mem::size_of::<T>();
    (opts.memory_bytes / per.max(1)).clamp(8, opts.max_dim.max(8))
}

/// The `k` smallest eigenpairs of `Sv = λMv`.
///
/// With `shift = None` the shift is chosen below the spectrum from a
/// Gershgorin bound and a short Lanczos probe.
pub fn lowest_eigs<T: Scalar>(
    s: &CsrMatrix<T>,
    m: &CsrMatrix<f64>,
    k: usize,
    shift: Option<f64>,
    opts: &EigOptions,
) -> Result<SpectralResult<T>> {
    let n = s.n();
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("requested {k} eigenpairs of a {n}×{n} pencil")));
    }
    if m.n() != n {
        return Err(Error::Parameter("S and M sizes differ".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_dim = memory_dim::<T>(n, opts).min(n);
    let mut factorizations = 0;
    let mut solves = 0;

    let (factor, sigma) = match shift {
        Some(sig) => {
            let (f, tries) = factor_below(s, m, sig, opts.shift_retries)?;
            factorizations += tries;
            let sg = f.shift();
            (f, sg)
        }
        None => {
            let sig0 = gershgorin_shift(s, m);
            let (f0, tries) = factor_below(s, m, sig0, opts.shift_retries)?;
            factorizations += tries;
            let sig0 = f0.shift();
            let mut op = ShiftInvert {
                factor: &f0,
                m,
                solves: 0,
            };
            let probe = lanczos_top(&mut op, &Basis::new(), random_vector(n, &mut rng), 60.min(n), 1e-3);
            solves += op.solves;
            let lam_hat = sig0 + 1.0 / probe.theta;
            let sig = lam_hat - 0.5 * lam_hat.abs().max(1.0);
            if sig <= sig0 {
                (f0, sig0)
            } else {
                drop(f0);
                let (f, tries) = factor_below(s, m, sig, opts.shift_retries)?;
                factorizations += tries;
                let sg = f.shift();
                (f, sg)
            }
        }
    };
    debug!("lowest_eigs: n = {n}, shift = {sigma}, basis cap = {max_dim}");

    let mut op = ShiftInvert {
        factor: &factor,
        m,
        solves: 0,
    };
    let mut locked = Basis::new();
    let mut max_imag: f64 = 0.0;
    while locked.v.len() < k {
        let mut start = random_vector(n, &mut rng);
        let mut pair = None;
        for _ in 0..=opts.max_restarts {
            let p = lanczos_top(&mut op, &locked, start, max_dim.min(n - locked.v.len()), opts.lanczos_tol);
            max_imag = max_imag.max(p.max_imag);
            if p.converged {
                pair = Some(p);
                break;
            }
            start = p.vector;
        }
        let Some(p) = pair else {
            return Err(Error::Numeric(format!(
                "Lanczos did not converge for eigenpair {} after {} restarts",
                locked.v.len() + 1,
                opts.max_restarts
            )));
        };
        if !(p.theta > 0.0) {
            return Err(Error::Shift(format!(
                "shift {sigma} is not below the spectrum (Ritz value {})",
                p.theta
            )));
        }
        let mut v = p.vector;
        locked.orthogonalize(&mut v);
        let nv = m_norm(m, &v);
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / nv));
        let mv = mass_apply(m, &v);
        locked.push(v, mv);
    }

    let mut vs = locked.v;
    let (mut lam, mut vecs, imag) = rayleigh_ritz(s, m, &vs);
    max_imag = max_imag.max(imag);
    let mut res: Vec<f64> = lam
        .iter()
        .zip(&vecs)
        .map(|(l, v)| pencil_residual(s, m, v, *l))
        .collect();
    // Block inverse iteration if the locked pairs are not accurate enough.
    for _ in 0..4 {
        if res.iter().all(|r| *r <= opts.tol) {
            break;
        }
        vs = vecs
            .iter()
            .map(|v| op.apply_from_mass(&mass_apply(m, v)))
            .collect();
        m_orthonormalize(m, &mut vs);
        let (l2, v2, im2) = rayleigh_ritz(s, m, &vs);
        max_imag = max_imag.max(im2);
        lam = l2;
        vecs = v2;
        res = lam
            .iter()
            .zip(&vecs)
            .map(|(l, v)| pencil_residual(s, m, v, *l))
            .collect();
    }
    if let Some(r) = res.iter().find(|r| **r > opts.tol) {
        warn!("eigenpair residual {r:e} exceeds tolerance {:e}", opts.tol);
    }
    solves += op.solves;
    Ok(SpectralResult {
        eigenvalues: lam,
        eigenvectors: vecs,
        residuals: res,
        shift: sigma,
        max_ritz_imag: max_imag,
        factorizations,
        solves,
    })
}

/// Discrete resolvent `x = (S - λM)⁻¹ M rhs`.
pub struct Resolvent<'a, T: Scalar> {
    factor: ShiftedFactor<T>,
    m: &'a CsrMatrix<f64>,
    lambda: f64,
}

impl<'a, T: Scalar> Resolvent<'a, T> {
    /// Fails with a shift error unless `λ` is below the pencil's spectrum.
    pub fn new(s: &CsrMatrix<T>, m: &'a CsrMatrix<f64>, lambda: f64) -> Result<Self> {
        let factor = ShiftedFactor::new(s, Some(m), lambda).map_err(|e| {
            Error::Shift(format!("λ = {lambda} is not below the spectrum: {e}"))
        })?;
        Ok(Self { factor, m, lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn apply(&self, rhs: &[T]) -> Vec<T> {
        self.factor.solve(&mass_apply(self.m, rhs))
    }
}

pub fn resolvent_apply<T: Scalar>(
    s: &CsrMatrix<T>,
    m: &CsrMatrix<f64>,
    lambda: f64,
    rhs: &[T],
) -> Result<Vec<T>> {
    Ok(Resolvent::new(s, m, lambda)?.apply(rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            max_iter: 200,
            seed: 0xd1ff,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffNorm {
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `‖R_δ(λ) - R_ε(λ)‖` in the `M`-operator norm by power iteration.
pub fn resolvent_diff_norm_with<T: Scalar>(
    r_delta: &Resolvent<'_, T>,
    r_eps: &Resolvent<'_, T>,
    opts: &PowerOptions,
) -> DiffNorm {
    let m = r_delta.m;
    let n = m.n();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<T> = random_vector(n, &mut rng);
    let nx = m_norm(m, &x);
    x.iter_mut().for_each(|v| *v = v.scale(1.0 / nx));
    let mut est = 0.0;
    for it in 1..=opts.max_iter {
        let a = r_delta.apply(&x);
        let b = r_eps.apply(&x);
        let d: Vec<T> = a.iter().zip(&b).map(|(p, q)| *p - *q).collect();
        let nd = m_norm(m, &d);
        if nd == 0.0 {
            return DiffNorm {
                norm: 0.0,
                iterations: it,
                converged: true,
            };
        }
        let done = (nd - est).abs() <= opts.rel_tol * nd;
        est = nd;
        if done {
            return DiffNorm {
                norm: est,
                iterations: it,
                converged: true,
            };
        }
        x = d.into_iter().map(|v| v.scale(1.0 / nd)).collect();
    }
    DiffNorm {
        norm: est,
        iterations: opts.max_iter,
        converged: false,
    }
}

pub fn resolvent_diff_norm<T: Scalar>(
    form_delta: &AssembledForm<T>,
    form_eps: &AssembledForm<T>,
    lambda: f64,
    opts: &PowerOptions,
) -> Result<DiffNorm> {
    if !std::sync::Arc::ptr_eq(form_delta.s.pattern(), form_eps.s.pattern())
        && form_delta.s.n() != form_eps.s.n()
    {
        return Err(Error::Parameter("forms live on different meshes".into()));
    }
    let m = &*form_delta.m;
    let rd = Resolvent::new(&form_delta.s, m, lambda)?;
    let re = Resolvent::new(&form_eps.s, m, lambda)?;
    Ok(resolvent_diff_norm_with(&rd, &re, opts))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_ci: (f64, f64),
    pub intercept_ci: (f64, f64),
    pub points: usize,
    pub excluded: usize,
}

/// Least squares `log(value) = intercept + slope·log(ε)` with 95% intervals.
pub fn fit_rate(eps: &[f64], values: &[f64]) -> Result<RateFit> {
    if eps.len() != values.len() {
        return Err(Error::Fit("eps and values differ in length".into()));
    }
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(values)
        .filter(|(e, v)| **e > 0.0 && **v > 0.0 && v.is_finite())
        .map(|(e, v)| (e.ln(), v.ln()))
        .collect();
    let excluded = eps.len() - pts.len();
    if excluded > 0 {
        warn!("fit_rate: excluded {excluded} non-positive points");
    }
    let n = pts.len();
    if n < 3 {
        return Err(Error::Fit(format!("need at least 3 positive points, have {n}")));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all eps values coincide".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let sigma2 = sse / (nf - 2.0);
    let se_slope = (sigma2 / sxx).sqrt();
    let se_int = (sigma2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    let t = StudentsT::new(0.0, 1.0, nf - 2.0)
        .map_err(|e| Error::Fit(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(RateFit {
        slope,
        intercept,
        slope_ci: (slope - t * se_slope, slope + t * se_slope),
        intercept_ci: (intercept - t * se_int, intercept + t * se_int),
        points: n,
        excluded,
    })
}

/// Outcome of one ε-sweep comparing the δ-form with its squeezed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub eps: Vec<f64>,
    /// Discrete resolvent-difference norm in the `M`-geometry.
    pub res_norm: Vec<f64>,
    pub res_converged: Vec<bool>,
    pub res_iterations: Vec<usize>,
    pub lambda_delta: f64,
    pub lambda_eps: Vec<f64>,
    pub eig_gap: Vec<f64>,
    pub res_fit: Option<RateFit>,
    pub gap_fit: Option<RateFit>,
    /// Resolvent point `λ` used for every comparison.
    pub shift: f64,
    pub max_residual: f64,
    pub flags: Vec<String>,
}

impl ConvergenceReport {
    /// CSV with columns `eps,res_norm,eig_gap,converged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,res_norm,eig_gap,converged\n");
        for i in 0..self.eps.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{}\n",
                self.eps[i], self.res_norm[i], self.eig_gap[i], self.res_converged[i]
            ));
        }
        out
    }
}
