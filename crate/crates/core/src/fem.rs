//! P1 finite elements on a uniform Dirichlet box.
//!
//! Every matrix assembled on a [`Mesh`] lives on the mesh's shared sparsity
//! pattern, so forms can be added without re-merging and the symbolic
//! Cholesky analysis is done once per mesh.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Network, Vec2};
use crate::potentials::{StrengthFunction, TubeProfile};
use crate::quadrature::GaussLegendre;
use crate::scalar::Scalar;
use crate::sparse::{CsrMatrix, Pattern};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl BoxDomain {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn square(half: f64) -> Self {
        Self::new(-half, half, -half, half)
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn contains_open(&self, p: Vec2) -> bool {
        p.x > self.x0 && p.x < self.x1 && p.y > self.y0 && p.y < self.y1
    }
}

/// Uniform triangulation: each cell split along its lower-left to
/// upper-right diagonal into `(p00, p10, p11)` and `(p00, p11, p01)`.
#[derive(Debug, Clone)]
pub struct Mesh {
    domain: BoxDomain,
    h: f64,
    nx: usize,
    ny: usize,
    /// Unknown index of each node, `None` on the Dirichlet boundary.
    dof: Vec<Option<usize>>,
    n_dof: usize,
    pattern: Arc<Pattern>,
}

/// Summary written into reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeshSummary {
    pub domain: BoxDomain,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub nodes: usize,
    pub triangles: usize,
    pub unknowns: usize,
    pub nnz: usize,
}

pub fn build_mesh(domain: BoxDomain, h: f64) -> Result<Mesh> {
    if !(h > 0.0) {
        return Err(Error::Parameter(format!("mesh step must be positive, got {h}")));
    }
    let cells = |len: f64| -> Result<usize> {
        if !(len > 0.0) {
            return Err(Error::Parameter("box has non-positive side length".into()));
        }
        let n = (len / h).round();
        if (n * h - len).abs() > 1e-9 || n < 1.0 {
            return Err(Error::Parameter(format!(
                "mesh step {h} does not divide box side {len}"
            )));
        }
        Ok(n as usize)
    };
    let nx = cells(domain.x1 - domain.x0)?;
    let ny = cells(domain.y1 - domain.y0)?;
    let mut dof = vec![None; (nx + 1) * (ny + 1)];
    let mut n_dof = 0;
    for j in 1..ny {
        for i in 1..nx {
            dof[j * (nx + 1) + i] = Some(n_dof);
            n_dof += 1;
        }
    }
    let mut mesh = Mesh {
        domain,
        h,
        nx,
        ny,
        dof,
        n_dof,
        pattern: Arc::new(Pattern::from_pairs(0, std::iter::empty())),
    };
    let mut pairs = Vec::with_capacity(7 * n_dof);
    for tri in 0..mesh.n_triangles() {
        let d = mesh.triangle(tri).map(|v| mesh.dof[v]);
        for a in d.iter().flatten() {
            for b in d.iter().flatten() {
                pairs.push((*a, *b));
            }
        }
    }
    mesh.pattern = Arc::new(Pattern::from_pairs(n_dof, pairs));
    Ok(mesh)
}

/// Triangle containing a point, with barycentric coordinates of its vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub triangle: usize,
    pub bary: [f64; 3],
}

impl Mesh {
    pub fn domain(&self) -> BoxDomain {
        self.domain
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn n_nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }
    pub fn n_triangles(&self) -> usize {
        2 * self.nx * self.ny
    }
    pub fn n_dof(&self) -> usize {
        self.n_dof
    }
    pub fn pattern(&self) -> &Arc<Pattern> {
        &self.pattern
    }
    pub fn dof(&self, node: usize) -> Option<usize> {
        self.dof[node]
    }

    pub fn node(&self, v: usize) -> Vec2 {
        let (i, j) = (v % (self.nx + 1), v / (self.nx + 1));
        Vec2::new(
            self.domain.x0 + i as f64 * self.h,
            self.domain.y0 + j as f64 * self.h,
        )
    }

    /// Positions of the interior unknowns, in unknown order.
    pub fn dof_points(&self) -> Vec<Vec2> {
        let mut pts = vec![Vec2::default(); self.n_dof];
        for (v, d) in self.dof.iter().enumerate() {
            if let Some(d) = d {
                pts[*d] = self.node(v);
            }
        }
        pts
    }

    /// Interpolates `f` at the unknowns (boundary values dropped).
    pub fn interpolate<T>(&self, f: impl Fn(Vec2) -> T) -> Vec<T> {
        self.dof_points().into_iter().map(f).collect()
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        let cell = t / 2;
        let (i, j) = (cell % self.nx, cell / self.nx);
        let w = self.nx + 1;
        let p00 = j * w + i;
        let (p10, p11, p01) = (p00 + 1, p00 + w + 1, p00 + w);
        if t % 2 == 0 {
            [p00, p10, p11]
        } else {
            [p00, p11, p01]
        }
    }

    pub fn triangle_points(&self, t: usize) -> [Vec2; 3] {
        self.triangle(t).map(|v| self.node(v))
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x)
    }

    /// Triangle containing `x` (closed domain). Points on a shared edge go to
    /// the cell below/left of it.
    pub fn locate(&self, x: Vec2) -> Option<Location> {
        let d = self.domain;
        let tol = 1e-12 * self.h;
        if x.x < d.x0 - tol || x.x > d.x1 + tol || x.y < d.y0 - tol || x.y > d.y1 + tol {
            return None;
        }
        let fx = ((x.x - d.x0) / self.h).clamp(0.0, self.nx as f64);
        let fy = ((x.y - d.y0) / self.h).clamp(0.0, self.ny as f64);
        let i = (fx.floor() as usize).min(self.nx - 1);
        let j = (fy.floor() as usize).min(self.ny - 1);
        let (xi, eta) = (fx - i as f64, fy - j as f64);
        let cell = j * self.nx + i;
        Some(if xi >= eta {
            Location {
                triangle: 2 * cell,
                bary: [1.0 - xi, xi - eta, eta],
            }
        } else {
            Location {
                triangle: 2 * cell + 1,
                bary: [1.0 - eta, xi, eta - xi],
            }
        })
    }

    pub fn summary(&self) -> MeshSummary {
        MeshSummary {
            domain: self.domain,
            h: self.h,
            nx: self.nx,
            ny: self.ny,
            nodes: self.n_nodes(),
            triangles: self.n_triangles(),
            unknowns: self.n_dof,
            nnz: self.pattern.nnz(),
        }
    }
}

/// Gradients of the three P1 basis functions and the area of a triangle.
fn p1_gradients(p: &[Vec2; 3]) -> ([Vec2; 3], f64) {
    let det = (p[1] - p[0]).x * (p[2] - p[0]).y - (p[1] - p[0]).y * (p[2] - p[0]).x;
    let area = 0.5 * det;
    let g = [
        Vec2::new(p[1].y - p[2].y, p[2].x - p[1].x),
        Vec2::new(p[2].y - p[0].y, p[0].x - p[2].x),
        Vec2::new(p[0].y - p[1].y, p[1].x - p[0].x),
    ]
    .map(|v| (1.0 / det) * v);
    (g, area)
}

const CHUNK: usize = 4096;

/// Assembles element matrices `K[a][b]` (row `a` conjugated in the form)
/// into the mesh pattern. Parallel over triangle chunks, merged in chunk order.
fn assemble_elements<T: Scalar>(
    mesh: &Mesh,
    element: impl Fn(usize, &[Vec2; 3]) -> [[T; 3]; 3] + Sync,
) -> CsrMatrix<T> {
    let n_tri = mesh.n_triangles();
    let pattern = Arc::clone(mesh.pattern());
    let chunks: Vec<Vec<(usize, T)>> = (0..n_tri.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut out = Vec::with_capacity(CHUNK * 9);
            for t in c * CHUNK..((c + 1) * CHUNK).min(n_tri) {
                let v = mesh.triangle(t);
                let k = element(t, &v.map(|i| mesh.node(i)));
                for a in 0..3 {
                    let Some(da) = mesh.dof[v[a]] else { continue };
                    for b in 0..3 {
                        let Some(db) = mesh.dof[v[b]] else { continue };
                        let pos = pattern.position(da, db).expect("element entry in mesh pattern");
                        out.push((pos, k[a][b]));
                    }
                }
            }
            out
        })
        .collect();
    let mut m = CsrMatrix::zeros(Arc::clone(&pattern));
    let vals = m.values_mut();
    for chunk in chunks {
        for (p, v) in chunk {
            vals[p] += v;
        }
    }
    m
}

fn mass_element(area: f64) -> [[f64; 3]; 3] {
    let mut k = [[area / 12.0; 3]; 3];
    for (a, row) in k.iter_mut().enumerate() {
        row[a] = area / 6.0;
    }
    k
}

pub fn assemble_mass(mesh: &Mesh) -> CsrMatrix<f64> {
    assemble_elements(mesh, |_, p| mass_element(p1_gradients(p).1))
}

pub fn assemble_stiffness(mesh: &Mesh) -> CsrMatrix<f64> {
    assemble_elements(mesh, |_, p| {
        let (g, area) = p1_gradients(p);
        let mut k = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                k[a][b] = area * g[a].dot(g[b]);
            }
        }
        k
    })
}

/// Vector potentials with closed forms used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorPotential {
    /// Homogeneous field strength: `A = (b/2)(-y, x)`.
    pub b: f64,
    /// Adds `c ∇(xy) = c (y, x)`.
    #[serde(default)]
    pub gauge_xy: f64,
}

impl VectorPotential {
    pub fn homogeneous(b: f64) -> Self {
        Self { b, gauge_xy: 0.0 }
    }

    pub fn eval(&self, p: Vec2) -> Vec2 {
        Vec2::new(
            -0.5 * self.b * p.y + self.gauge_xy * p.y,
            0.5 * self.b * p.x + self.gauge_xy * p.x,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.b == 0.0 && self.gauge_xy == 0.0
    }
}

/// `∫_T (i∇u + Au)·conj(i∇v + Av)` with `A` at the barycentre for the
/// first-order coupling and vertex quadrature for `|A|² u v̄`.
pub fn assemble_magnetic_stiffness(
    mesh: &Mesh,
    a: impl Fn(Vec2) -> Vec2 + Sync,
) -> CsrMatrix<Complex64> {
    assemble_elements(mesh, |_, p| {
        let (g, area) = p1_gradients(p);
        let bary = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
        let ab = a(bary);
        let mut k = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let re = area * g[i].dot(g[j]);
                let im = area / 3.0 * ab.dot(g[j] - g[i]);
                k[i][j] = Complex64::new(re, im);
            }
            let ai = a(p[i]);
            k[i][i] += area / 3.0 * ai.dot(ai);
        }
        k
    })
}

/// `∫_T W u v̄` by the edge-midpoint rule, `W` real.
pub fn assemble_volume_potential(mesh: &Mesh, w: impl Fn(Vec2) -> f64 + Sync) -> CsrMatrix<f64> {
    assemble_elements(mesh, |_, p| {
        let (_, area) = p1_gradients(p);
        // midpoint of edge (a, b): φ_a = φ_b = 1/2
        let m = [
            w(0.5 * (p[1] + p[2])),
            w(0.5 * (p[0] + p[2])),
            w(0.5 * (p[0] + p[1])),
        ];
        let mut k = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                // midpoints where both φ_a and φ_b are nonzero
                let acc: f64 = (0..3).filter(|&e| e != a && e != b).map(|e| 0.25 * m[e]).sum();
                k[a][b] = area / 3.0 * acc;
            }
        }
        k
    })
}

/// Quadrature used for squeezed potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqueezedQuadrature {
    /// Gauss–Legendre in tube coordinates with the Jacobian `1 - tκ`; panel
    /// ends on the support edges `|t| = ε`.
    #[default]
    Tube,
    /// Edge-midpoint rule on `evaluate_scaled`.
    Midpoint,
}

fn check_resolution(mesh: &Mesh, eps: f64) -> Result<()> {
    let limit = eps / 4.0;
    if mesh.h() > limit * (1.0 + 1e-12) {
        return Err(Error::Resolution {
            eps,
            h: mesh.h(),
            limit,
        });
    }
    Ok(())
}

/// Matrix of `∫ V_ε u v̄` for the squeezed profiles on `net`.
pub fn assemble_squeezed_potential(
    mesh: &Mesh,
    net: &Network,
    profiles: &[TubeProfile],
    eps: f64,
    quadrature: SqueezedQuadrature,
) -> Result<CsrMatrix<f64>> {
    check_resolution(mesh, eps)?;
    if !(eps > 0.0) || eps > net.beta() * (1.0 + 1e-12) {
        return Err(Error::Parameter(format!(
            "eps = {eps} must lie in (0, beta = {}]",
            net.beta()
        )));
    }
    match quadrature {
        SqueezedQuadrature::Midpoint => Ok(assemble_volume_potential(mesh, |x| {
            crate::potentials::evaluate_scaled(net, profiles, eps, x)
        })),
        SqueezedQuadrature::Tube => assemble_tube_potential(mesh, net, profiles, eps),
    }
}

const TUBE_POINTS: usize = 4;

fn assemble_tube_potential(
    mesh: &Mesh,
    net: &Network,
    profiles: &[TubeProfile],
    eps: f64,
) -> Result<CsrMatrix<f64>> {
    let h = mesh.h();
    let gl = GaussLegendre::new(TUBE_POINTS);
    let mut contributions: Vec<Vec<(Location, f64)>> = Vec::new();
    for prof in profiles {
        let seg = net.segment(prof.segment)?;
        let p = crate::potentials::scale_profile(prof, eps, net.beta())?;
        let l = seg.length();
        let ns = (2.0 * l / h).ceil() as usize;
        // t panels: profile breakpoints, refined to at most h/2
        let mut t_edges = Vec::new();
        for w in p.t_breaks().windows(2) {
            let m = ((w[1] - w[0]) / (0.5 * h)).ceil().max(1.0) as usize;
            for i in 0..m {
                t_edges.push(w[0] + (w[1] - w[0]) * i as f64 / m as f64);
            }
        }
        t_edges.push(eps);
        let k = prof.segment;
        let out: Result<Vec<Vec<(Location, f64)>>> = (0..ns)
            .into_par_iter()
            .map(|is| {
                let (s0, s1) = (l * is as f64 / ns as f64, l * (is + 1) as f64 / ns as f64);
                let mut local = Vec::new();
                for (s, ws) in gl.on(s0, s1) {
                    let kappa = seg.curvature(s)?;
                    for w in t_edges.windows(2) {
                        for (t, wt) in gl.on(w[0], w[1]) {
                            let v = p.eval(s, t);
                            if v == 0.0 {
                                continue;
                            }
                            let x = seg.offset(s, t);
                            match net.locate(x, eps) {
                                Some(c) if c.segment == k => {}
                                Some(_) => continue,
                                // numerically on the tube edge; keep it
                                None => {}
                            }
                            let loc = mesh.locate(x).ok_or_else(|| {
                                Error::Geometry(format!(
                                    "tube point ({}, {}) outside the mesh box",
                                    x.x, x.y
                                ))
                            })?;
                            local.push((loc, ws * wt * (1.0 - t * kappa) * v));
                        }
                    }
                }
                Ok(local)
            })
            .collect();
        contributions.extend(out?);
    }
    Ok(scatter_rank_one(mesh, contributions.into_iter().flatten(), |w| w))
}

/// Adds `w φ_a(x) φ_b(x)` for every `(location, weight)` pair.
fn scatter_rank_one<T: Scalar, W: Copy>(
    mesh: &Mesh,
    points: impl Iterator<Item = (Location, W)>,
    weight: impl Fn(W) -> T,
) -> CsrMatrix<T> {
    let mut m = CsrMatrix::zeros(Arc::clone(mesh.pattern()));
    let pattern = Arc::clone(mesh.pattern());
    let vals = m.values_mut();
    for (loc, w) in points {
        let v = mesh.triangle(loc.triangle);
        let w = weight(w);
        for a in 0..3 {
            let Some(da) = mesh.dof[v[a]] else { continue };
            for b in 0..3 {
                let Some(db) = mesh.dof[v[b]] else { continue };
                let pos = pattern.position(da, db).expect("entry in mesh pattern");
                vals[pos] += w.scale(loc.bary[a] * loc.bary[b]);
            }
        }
    }
    m
}

pub const DELTA_POINTS: usize = 4;

/// Quadrature points `(location, segment, s, weight)` along the network, with
/// `DELTA_POINTS` Gauss points per arc-length interval of length at most `h`.
fn line_quadrature(mesh: &Mesh, net: &Network) -> Result<Vec<(Location, usize, f64, f64)>> {
    let gl = GaussLegendre::new(DELTA_POINTS);
    let h = mesh.h();
    let mut out = Vec::new();
    for (k, seg) in net.segments().iter().enumerate() {
        let l = seg.length();
        let n = (l / h).ceil().max(1.0) as usize;
        for i in 0..n {
            for (s, w) in gl.on(l * i as f64 / n as f64, l * (i + 1) as f64 / n as f64) {
                let x = seg.point(s);
                if !mesh.domain().contains_open(x) {
                    return Err(Error::Geometry(format!(
                        "network point ({}, {}) is not inside the open box",
                        x.x, x.y
                    )));
                }
                let loc = mesh.locate(x).expect("point inside box");
                out.push((loc, k, s, w));
            }
        }
    }
    Ok(out)
}

/// `∫_Σ α |u|²dσ` with a per-point strength `alpha(segment, s)`.
pub fn assemble_delta_term_fn<T: Scalar>(
    mesh: &Mesh,
    net: &Network,
    alpha: impl Fn(usize, f64) -> T,
) -> Result<CsrMatrix<T>> {
    let pts = line_quadrature(mesh, net)?;
    let mut weighted = Vec::with_capacity(pts.len());
    for (loc, k, s, w) in pts {
        let a = alpha(k, s);
        if !(a.modulus().is_finite()) {
            return Err(Error::Numeric(format!(
                "strength not finite on segment {k} at s = {s}"
            )));
        }
        weighted.push((loc, a.scale(w)));
    }
    Ok(scatter_rank_one(mesh, weighted.into_iter(), |w| w))
}

/// δ-term for real strengths, one [`StrengthFunction`] per listed segment;
/// segments without a strength carry α = 0.
pub fn assemble_delta_term(
    mesh: &Mesh,
    net: &Network,
    strengths: &[StrengthFunction],
) -> Result<CsrMatrix<f64>> {
    let pts = line_quadrature(mesh, net)?;
    let mut by_segment: Vec<Vec<(usize, f64)>> = vec![Vec::new(); net.len()];
    for (i, (_, k, s, _)) in pts.iter().enumerate() {
        by_segment[*k].push((i, *s));
    }
    let mut alpha = vec![0.0; pts.len()];
    for a in strengths {
        if a.segment >= net.len() {
            return Err(Error::Parameter(format!(
                "strength given for missing segment {}",
                a.segment
            )));
        }
        let nodes = &by_segment[a.segment];
        let s: Vec<f64> = nodes.iter().map(|&(_, s)| s).collect();
        for ((i, _), v) in nodes.iter().zip(a.eval_many(&s)?) {
            alpha[*i] += v;
        }
    }
    Ok(scatter_rank_one(
        mesh,
        pts.iter().zip(&alpha).map(|((loc, _, _, w), a)| (*loc, a * w)),
        |w| w,
    ))
}

/// Which terms a form carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormMeta {
    pub magnetic: bool,
    pub delta: bool,
    pub eps: Option<f64>,
}

/// Discrete sesquilinear form `S` with mass matrix `M` on one mesh.
#[derive(Debug, Clone)]
pub struct AssembledForm<T> {
    pub s: CsrMatrix<T>,
    pub m: Arc<CsrMatrix<f64>>,
    pub meta: FormMeta,
}

pub const HERMITIAN_TOL: f64 = 1e-12;

impl<T: Scalar> AssembledForm<T> {
    pub fn new(s: CsrMatrix<T>, m: Arc<CsrMatrix<f64>>, meta: FormMeta) -> Result<Self> {
        if s.n() != m.n() {
            return Err(Error::Parameter("form and mass matrix sizes differ".into()));
        }
        let r = s.hermitian_residual();
        if r > HERMITIAN_TOL {
            return Err(Error::Numeric(format!("form is not Hermitian: residual {r:e}")));
        }
        Ok(Self { s, m, meta })
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.s.hermitian_residual()
    }
}

/// Checks that `M` is symmetric positive definite: nonnegative Gershgorin
/// bound and a successful Cholesky factorization.
pub fn check_mass_spd(m: &CsrMatrix<f64>) -> Result<()> {
    let (lo, _) = m.gershgorin_bounds();
    if lo < -1e-14 * m.max_abs() {
        return Err(Error::Numeric(format!("mass matrix Gershgorin bound {lo:e} < 0")));
    }
    if m.hermitian_residual() > 0.0 {
        return Err(Error::Numeric("mass matrix is not symmetric".into()));
    }
    crate::spectral::ShiftedFactor::new(m, None, 0.0)
        .map(|_| ())
        .map_err(|e| Error::Numeric(format!("mass matrix is not positive definite: {e}")))
}
