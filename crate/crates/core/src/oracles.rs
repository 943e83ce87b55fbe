//! One-dimensional reference solvers and the wedge criterion function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{scale_profile, TubeProfile};
use crate::quadrature::GaussLegendre;

/// Bound state `-α²/4` of `-u'' + α δ_0 u` on the line.
pub fn delta_point_eigenvalue(alpha: f64) -> Result<f64> {
    if !(alpha < 0.0) {
        return Err(Error::NoBoundState(format!(
            "point interaction with alpha = {alpha} >= 0 has no bound state"
        )));
    }
    Ok(-0.25 * alpha * alpha)
}

/// Symmetric tridiagonal matrix with constant off-diagonal `off`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    /// `(T - σ)⁻¹ y` by the Thomas algorithm; needs `T - σ` positive definite.
    fn solve_shifted(&self, sigma: f64, y: &[f64]) -> Vec<f64> {
        let n = y.len();
        let mut c = vec![0.0; n];
        let mut z = vec![0.0; n];
        let mut piv = self.diag[0] - sigma;
        c[0] = self.off / piv;
        z[0] = y[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - sigma - self.off * c[i - 1];
            c[i] = self.off / piv;
            z[i] = (y[i] - self.off * z[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            z[i] -= c[i] * z[i + 1];
        }
        z
    }

    /// Smallest eigenvalue in `[lo, hi]`: Sturm bisection down to a narrow
    /// bracket, then inverse iteration shifted by its lower end.
    fn lowest(&self, mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > 1e-4 * lo.abs().max(hi.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let sigma = lo;
        let mut y = vec![1.0; self.diag.len()];
        let mut est = 0.5 * (lo + hi);
        for _ in 0..12 {
            let z = self.solve_shifted(sigma, &y);
            let yy: f64 = y.iter().map(|v| v * v).sum();
            let yz: f64 = y.iter().zip(&z).map(|(a, b)| a * b).sum();
            let next = sigma + yy / yz;
            let nz = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            y = z.into_iter().map(|v| v / nz).collect();
            let done = (next - est).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0);
            est = next;
            if done {
                break;
            }
        }
        est.clamp(lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let mut q = 1.0;
        let mut count = 0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - off2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + off2.sqrt());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |a, d| a.min(*d)) - r;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |a, d| a.max(*d)) + r;
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (0-based), bisected to `tol`.
    fn eigenvalue(&self, j: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * (lo.abs().max(hi.abs()).max(1.0)) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Cell averages of `v` over `[x_i - h/2, x_i + h/2]`, split at `breaks`.
fn cell_averages(nodes: &[f64], h: f64, breaks: &[f64], v: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let gl = GaussLegendre::new(4);
    nodes
        .iter()
        .map(|&x| {
            let (a, b) = (x - 0.5 * h, x + 0.5 * h);
            if !breaks.iter().any(|&t| t > a && t < b) {
                return gl.integrate(a, b, v) / h;
            }
            let mut pts = vec![a];
            pts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
            pts.push(b);
            gl.integrate_composite(&pts, v) / h
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Oracle1dOptions {
    /// Grid cells per squeezed half-width ε on the coarse grid.
    pub cells_per_eps: usize,
    /// Upper bound on the coarse step.
    pub h_max: f64,
    /// Domain half-length in decay lengths `1/√|λ_est|`.
    pub decay_lengths: f64,
}

impl Default for Oracle1dOptions {
    fn default() -> Self {
        Self {
            cells_per_eps: 16,
            h_max: 1e-2,
            decay_lengths: 20.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Squeezed1d {
    /// Richardson value `(4λ_{h/2} - λ_h)/3`.
    pub lambda: f64,
    pub lambda_h: f64,
    pub lambda_h2: f64,
    pub h: f64,
    pub half_length: f64,
    pub nodes: usize,
}

/// Lowest FD eigenvalue of `-u'' + W u` on `(-X, X)`, Dirichlet ends, with
/// `±support` on grid nodes; `None` if nonnegative.
fn lowest_on_grid(w: &dyn Fn(f64) -> f64, breaks: &[f64], half: f64, h: f64) -> Option<f64> {
    let n = (2.0 * half / h).round() as usize - 1;
    let nodes: Vec<f64> = (1..=n).map(|i| -half + i as f64 * h).collect();
    let v = cell_averages(&nodes, h, breaks, w);
    let tri = Tridiagonal {
        diag: v.iter().map(|vi| 2.0 / (h * h) + vi).collect(),
        off: -1.0 / (h * h),
    };
    if tri.count_below(0.0) == 0 {
        return None;
    }
    // -D² is positive semidefinite, so λ₀ >= min v
    let lo = v.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    Some(tri.lowest(lo, 0.0))
}

/// Ground state of `-d²/dt² + (β/ε) g((β/ε) t)` by second-order finite
/// differences and one Richardson step.
pub fn squeezed_1d_eigenvalue(
    profile: &TubeProfile,
    eps: f64,
    opts: &Oracle1dOptions,
) -> Result<Option<Squeezed1d>> {
    let beta = profile.beta;
    let p = scale_profile(profile, eps, beta)?;
    let gl = GaussLegendre::new(16);
    let alpha = p.transverse_integral(0.0, &gl);
    if !(alpha < 0.0) {
        return Ok(None);
    }
    let lam_est = 0.25 * alpha * alpha;
    let half_raw = opts.decay_lengths / lam_est.sqrt();
    // step: ε/cells_per_eps, capped; ±ε and ±X on grid nodes
    let cells = ((eps / opts.h_max).ceil() as usize).max(opts.cells_per_eps);
    let h = eps / cells as f64;
    let half = (half_raw / eps).ceil().max(1.0) * eps;
    let breaks = p.t_breaks();
    let w = |t: f64| p.eval(0.0, t);
    let Some(l1) = lowest_on_grid(&w, &breaks, half, h) else {
        return Ok(None);
    };
    let l2 = lowest_on_grid(&w, &breaks, half, 0.5 * h).unwrap_or(l1);
    Ok(Some(Squeezed1d {
        lambda: (4.0 * l2 - l1) / 3.0,
        lambda_h: l1,
        lambda_h2: l2,
        h,
        half_length: half,
        nodes: (2.0 * half / h).round() as usize - 1,
    }))
}

/// Ground state of the square well `-u'' - depth·1_{|t|<a} u` from
/// `k tan(k a) = √(depth - k²)`, `λ = k² - depth`.
pub fn square_well_ground_state(depth: f64, a: f64) -> Result<f64> {
    if !(depth > 0.0) || !(a > 0.0) {
        return Err(Error::NoBoundState(format!("square well depth {depth}, half-width {a}")));
    }
    let f = |k: f64| k * (k * a).tan() - (depth - k * k).max(0.0).sqrt();
    let mut lo = 0.0;
    let mut hi = depth.sqrt().min(0.5 * PI / a * (1.0 - 1e-15));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    let k = 0.5 * (lo + hi);
    Ok(k * k - depth)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspSpectrum {
    /// Richardson-extrapolated eigenvalues.
    pub eigenvalues: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub length: f64,
    pub cells: usize,
}

/// Lowest `k` eigenvalues of `B f = -f'' + x^d f` on `(0, X)`, `f(0) = f(X) = 0`.
pub fn cusp_operator_eigs(d: f64, k: usize, length: f64, cells: usize) -> Result<CuspSpectrum> {
    if !(d > 1.0) {
        return Err(Error::Parameter(format!("cusp exponent must exceed 1, got {d}")));
    }
    if k == 0 || cells < 2 * k + 2 {
        return Err(Error::Parameter(format!("need k >= 1 and enough cells, got k = {k}, {cells} cells")));
    }
    let solve = |cells: usize| -> Vec<f64> {
        let h = length / cells as f64;
        let tri = Tridiagonal {
            diag: (1..cells)
                .map(|i| 2.0 / (h * h) + (i as f64 * h).powf(d))
                .collect(),
            off: -1.0 / (h * h),
        };
        let (lo, hi) = tri.bounds();
        (0..k).map(|j| tri.eigenvalue(j, lo, hi)).collect()
    };
    let coarse = solve(cells);
    let fine = solve(2 * cells);
    let eigenvalues: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let top = eigenvalues[k - 1];
    if length.powf(d) < top + 10.0 {
        return Err(Error::Domain(format!(
            "X = {length}: X^d = {} is below E_{k} + 10 = {}",
            length.powf(d),
            top + 10.0
        )));
    }
    Ok(CuspSpectrum {
        eigenvalues,
        coarse,
        fine,
        length,
        cells,
    })
}

/// Observed order `log2((λ_h - λ_{h/2}) / (λ_{h/2} - λ_{h/4}))` of a 1D solver.
pub fn self_convergence_order(l_h: f64, l_h2: f64, l_h4: f64) -> f64 {
    ((l_h - l_h2) / (l_h2 - l_h4)).abs().log2()
}

/// Lowest FD eigenvalue of the squeezed problem on one grid of step `h`
/// (no extrapolation); used by self-convergence checks.
pub fn squeezed_1d_on_grid(profile: &TubeProfile, eps: f64, h: f64, half: f64) -> Result<Option<f64>> {
    let p = scale_profile(profile, eps, profile.beta)?;
    let breaks = p.t_breaks();
    Ok(lowest_on_grid(&|t| p.eval(0.0, t), &breaks, half, h))
}

/// Inputs of the wedge criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeParams {
    pub phi: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl WedgeParams {
    pub fn new(phi: f64, alpha: f64, theta: f64) -> Result<Self> {
        if !(phi > 0.0 && phi < PI) {
            return Err(Error::Parameter(format!("opening angle must lie in (0, π), got {phi}")));
        }
        if !(alpha < 0.0) {
            return Err(Error::Parameter(format!("wedge strength must be negative, got {alpha}")));
        }
        if !theta.is_finite() {
            return Err(Error::Parameter("Θ must be finite".into()));
        }
        Ok(Self { phi, alpha, theta })
    }
}

/// `F(x, y) = 1 + x⁴/4 - Θx² + (α/√π) x e^{-y² tan²(φ/2)} (1 + erf y)`.
pub fn wedge_f(p: &WedgeParams, x: f64, y: f64) -> f64 {
    let tan = (0.5 * p.phi).tan();
    1.0 + 0.25 * x.powi(4) - p.theta * x * x
        + p.alpha / PI.sqrt() * x * (-y * y * tan * tan).exp() * (1.0 + libm::erf(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeInfimum {
    pub value: f64,
    pub argmin: (f64, f64),
    pub negative: bool,
    pub refined: bool,
    pub grid_value: f64,
}

pub const GRID: usize = 200;
const LOG_LO: f64 = -3.0;
const LOG_HI: f64 = 3.0;

/// Grid scan on `(10⁻³, 10³)²` (log-spaced) followed by Nelder–Mead in
/// `(ln x, ln y)`.
pub fn wedge_f_infimum(p: &WedgeParams) -> WedgeInfimum {
    let ax = |i: usize| 10f64.powf(LOG_LO + (LOG_HI - LOG_LO) * i as f64 / (GRID - 1) as f64);
    let mut best = (f64::INFINITY, 1.0, 1.0);
    for i in 0..GRID {
        for j in 0..GRID {
            let (x, y) = (ax(i), ax(j));
            let v = wedge_f(p, x, y);
            if v < best.0 {
                best = (v, x, y);
            }
        }
    }
    let f = |u: [f64; 2]| {
        // keep the search inside a generous box around the scan window
        let lx = u[0].clamp(-16.0, 16.0);
        let ly = u[1].clamp(-16.0, 16.0);
        wedge_f(p, lx.exp(), ly.exp())
    };
    let nm = nelder_mead(f, [best.1.ln(), best.2.ln()], 0.05, 1e-14, 4000);
    let (value, argmin, refined) = if nm.converged && nm.value <= best.0 {
        (nm.value, (nm.point[0].clamp(-16.0, 16.0).exp(), nm.point[1].clamp(-16.0, 16.0).exp()), true)
    } else {
        (best.0, (best.1, best.2), false)
    };
    WedgeInfimum {
        value,
        argmin,
        negative: value < -1e-8,
        refined,
        grid_value: best.0,
    }
}

struct NelderMead {
    point: [f64; 2],
    value: f64,
    converged: bool,
}

fn nelder_mead(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: f64, ftol: f64, max_iter: usize) -> NelderMead {
    let mut s = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut fs = s.map(&f);
    let comb = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| fs[a].partial_cmp(&fs[b]).unwrap_or(std::cmp::Ordering::Equal));
        s = idx.map(|i| s[i]);
        fs = idx.map(|i| fs[i]);
        let spread = (fs[2] - fs[0]).abs();
        let size = (s[1][0] - s[0][0]).abs().max((s[1][1] - s[0][1]).abs())
            .max((s[2][0] - s[0][0]).abs().max((s[2][1] - s[0][1]).abs()));
        if spread <= ftol * (fs[0].abs() + 1e-12) && size < 1e-9 {
            return NelderMead {
                point: s[0],
                value: fs[0],
                converged: true,
            };
        }
        let c = [0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])];
        let xr = comb(c, s[2], -1.0);
        let fr = f(xr);
        if fr < fs[0] {
            let xe = comb(c, s[2], -2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                fs[2] = fe;
            } else {
                s[2] = xr;
                fs[2] = fr;
            }
        } else if fr < fs[1] {
            s[2] = xr;
            fs[2] = fr;
        } else {
            let (xc, fc) = if fr < fs[2] {
                let x = comb(c, xr, 0.5);
                (x, f(x))
            } else {
                let x = comb(c, s[2], 0.5);
                (x, f(x))
            };
            if fc < fs[2].min(fr) {
                s[2] = xc;
                fs[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = comb(s[0], s[i], 0.5);
                    fs[i] = f(s[i]);
                }
            }
        }
    }
    NelderMead {
        point: s[0],
        value: fs[0],
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{potential_from_alpha, StrengthFunction};

    #[test]
    fn point_interaction_examples() {
        assert_eq!(delta_point_eigenvalue(-5.0).unwrap(), -6.25);
        assert_eq!(delta_point_eigenvalue(-2.0).unwrap(), -1.0);
        let w = delta_point_eigenvalue(-1e-3).unwrap();
        assert!((w + 2.5e-7).abs() < 1e-20 && w < 0.0);
        assert!(matches!(delta_point_eigenvalue(0.0), Err(Error::NoBoundState(_))));
    }

    fn well(alpha: f64, beta: f64) -> TubeProfile {
        potential_from_alpha(&StrengthFunction::constant(0, alpha), beta).unwrap()
    }

    #[test]
    fn square_well_matches_transcendental_oracle() {
        let beta = 0.25;
        let p = well(-5.0, beta);
        let r = squeezed_1d_eigenvalue(&p, beta, &Oracle1dOptions { cells_per_eps: 32, ..Default::default() })
            .unwrap()
            .unwrap();
        let exact = square_well_ground_state(10.0, beta).unwrap();
        assert!((r.lambda - exact).abs() < 1e-8, "{} vs {exact}", r.lambda);
        // the transcendental relation holds at the bisected root
        let k = (10.0 + exact).sqrt();
        assert!((k * (k * beta).tan() - (-exact).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn squeezing_sweep_converges_linearly() {
        let beta = 1.0 / 64.0;
        let p = well(-5.0, beta);
        let eps: Vec<f64> = (1..=6).map(|j| beta / 2f64.powi(j)).collect();
        let gaps: Vec<f64> = eps
            .iter()
            .map(|&e| {
                squeezed_1d_eigenvalue(&p, e, &Oracle1dOptions::default()).unwrap().unwrap().lambda + 6.25
            })
            .collect();
        let fit = crate::spectral::fit_rate(&eps, &gaps).unwrap();
        assert!(fit.slope >= 0.9, "slope {}", fit.slope);
        assert!(gaps[5].abs() < 1e-2);
    }

    #[test]
    fn zero_profile_has_no_bound_state() {
        let p = TubeProfile::constant(0, 0.1, 0.0).unwrap();
        assert!(squeezed_1d_eigenvalue(&p, 0.05, &Oracle1dOptions::default()).unwrap().is_none());
    }

    #[test]
    fn fd_is_second_order() {
        let p = well(-3.0, 0.2);
        let half = 12.0;
        let l: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&h| squeezed_1d_on_grid(&p, 0.1, h, half).unwrap().unwrap())
            .collect();
        let order = self_convergence_order(l[0], l[1], l[2]);
        assert!((order - 2.0).abs() < 0.2, "{order}");
        let c: Vec<f64> = [200, 400, 800]
            .iter()
            .map(|&n| {
                let s = cusp_operator_eigs(4.0, 1, 5.0, n).unwrap();
                s.coarse[0]
            })
            .collect();
        let order = self_convergence_order(c[0], c[1], c[2]);
        assert!((order - 2.0).abs() < 0.2, "{order}");
    }

    #[test]
    fn cusp_operator_harmonic_levels() {
        let s = cusp_operator_eigs(2.0, 5, 8.0, 2000).unwrap();
        for (k, e) in s.eigenvalues.iter().enumerate() {
            let exact = 4.0 * k as f64 + 3.0;
            assert!((e - exact).abs() < 1e-3, "E_{} = {e}", k + 1);
        }
        let a = cusp_operator_eigs(2.0, 1, 8.0, 2000).unwrap().eigenvalues[0];
        let b = cusp_operator_eigs(2.0, 1, 16.0, 4000).unwrap().eigenvalues[0];
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        assert!(matches!(cusp_operator_eigs(2.0, 3, 3.0, 500), Err(Error::Domain(_))));
    }

    /// RK4 shooting on f'' = (x^d - E) f from f(0) = 0, f'(0) = 1.
    fn shoot(d: f64, e: f64, x_end: f64, n: usize) -> f64 {
        let h = x_end / n as f64;
        let rhs = |x: f64, y: [f64; 2]| [y[1], (x.powf(d) - e) * y[0]];
        let mut y = [0.0, 1.0];
        for i in 0..n {
            let x = i as f64 * h;
            let k1 = rhs(x, y);
            let k2 = rhs(x + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(x + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for c in 0..2 {
                y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            }
        }
        y[0]
    }

    #[test]
    fn quartic_ground_state_matches_shooting() {
        let fd = cusp_operator_eigs(4.0, 1, 4.0, 4000).unwrap().eigenvalues[0];
        // the decaying solution changes sign of f(X) across the eigenvalue
        let (mut lo, mut hi) = (fd - 0.05, fd + 0.05);
        let x_end = 3.5;
        let flo = shoot(4.0, lo, x_end, 20000);
        assert!(flo * shoot(4.0, hi, x_end, 20000) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if shoot(4.0, mid, x_end, 20000) * flo > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = 0.5 * (lo + hi);
        assert!((fd - e).abs() < 1e-4, "{fd} vs {e}");
    }

    #[test]
    fn wedge_f_examples() {
        let p0 = WedgeParams { phi: 1.0, alpha: 0.0, theta: 1.5 };
        assert_eq!(wedge_f(&p0, 2.0, 0.3), 1.0 + 4.0 - 6.0);
        let mut p0b = p0;
        p0b.phi = 2.0;
        assert_eq!(wedge_f(&p0b, 2.0, 5.0), wedge_f(&p0, 2.0, 0.3));
        let p = WedgeParams::new(1.0, -0.5, 1.5).unwrap();
        assert!(wedge_f(&p, 0.7, 0.2) < wedge_f(&p0, 0.7, 0.2));

        // φ = π/2, y = 1: e^{-1}(1 + erf 1) with erf(1) = 0.8427007929497149
        let q = WedgeParams::new(PI / 2.0, -1.0, 0.0).unwrap();
        let x = 1.0;
        let erf1 = 0.842_700_792_949_714_9;
        let expected = 1.0 + 0.25 - (1.0 / PI.sqrt()) * (-1.0f64).exp() * (1.0 + erf1);
        assert!((wedge_f(&q, x, 1.0) - expected).abs() < 1e-15);
        assert!(((-1.0f64).exp() * (1.0 + erf1) - 0.677_891_737_956_514_8).abs() < 1e-15);
    }

    #[test]
    fn wedge_infimum_examples() {
        let neg = wedge_f_infimum(&WedgeParams::new(PI / 3.0, -1e-6, 1.5).unwrap());
        assert!((neg.value + 1.25).abs() < 1e-4, "{}", neg.value);
        assert!(neg.negative);
        let pos = wedge_f_infimum(&WedgeParams::new(PI / 3.0, -1e-6, 0.5).unwrap());
        assert!((pos.value - 0.75).abs() < 1e-4, "{}", pos.value);
        assert!(!pos.negative);
        let vals: Vec<f64> = [-0.1, -1.0, -10.0]
            .iter()
            .map(|&a| wedge_f_infimum(&WedgeParams::new(PI / 3.0, a, 0.5).unwrap()).value)
            .collect();
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2], "{vals:?}");
    }

    #[test]
    fn wedge_flag_is_monotone_in_strength() {
        let mut seen = false;
        for i in 0..30 {
            let a = -0.05 * 1.3f64.powi(i);
            let r = wedge_f_infimum(&WedgeParams::new(PI / 4.0, a, 0.8).unwrap());
            if seen {
                assert!(r.negative, "flag dropped at alpha = {a}");
            }
            seen |= r.negative;
        }
        assert!(seen);
    }
}
