//! Experiment configurations, runners and reports.
//!
//! Every runner returns a [`Report`]: a JSON document echoing the resolved
//! configuration together with β, the mesh, the resolvent point, solver
//! residuals and flags, plus a CSV table whose SHA-256 is embedded in the
//! JSON. Nothing in a report depends on wall-clock time.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{info, warn};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fem::{
    assemble_delta_term, assemble_magnetic_stiffness, assemble_mass, assemble_squeezed_potential,
    assemble_stiffness, assemble_volume_potential, build_mesh, check_mass_spd, AssembledForm,
    BoxDomain, FormMeta, Mesh, MeshSummary, SqueezedQuadrature, VectorPotential,
};
use crate::geometry::{cusp_curve, star_graph, BetaOptions, CurveSegment, Network, SegmentSpec, Vec2};
use crate::oracles::{
    cusp_operator_eigs, delta_point_eigenvalue, squeezed_1d_eigenvalue, wedge_f_infimum,
    Oracle1dOptions, WedgeParams,
};
use crate::potentials::{
    effective_alpha, potential_from_alpha, ProfileShape, ScalarFn, StrengthFunction, StrengthLaw,
    TubeProfile, DEFAULT_ORDER,
};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;
use crate::spectral::{
    fit_rate, lowest_eigs, resolvent_diff_norm_with, ConvergenceReport, EigOptions, PowerOptions,
    RateFit, Resolvent, SpectralResult,
};

pub const DEFAULT_SEED: u64 = 0x5eed;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn yes() -> bool {
    true
}

fn default_k() -> usize {
    1
}

// ---------------------------------------------------------------------------
// configuration pieces

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub domain: BoxDomain,
    pub h: f64,
}

impl MeshConfig {
    pub fn build(&self) -> Result<Mesh> {
        build_mesh(self.domain, self.h)
    }

    fn refined(&self) -> Self {
        Self {
            domain: self.domain,
            h: 0.5 * self.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub segments: Vec<SegmentSpec>,
    #[serde(flatten)]
    pub beta: BetaOptions,
}

impl NetworkConfig {
    pub fn build(&self) -> Result<Network> {
        Network::from_specs(&self.segments, self.beta)
    }
}

/// Transverse profile on one segment; its half-width is the network's β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub segment: usize,
    pub shape: ProfileShape,
}

/// How the interaction is specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coupling {
    /// Profiles `V^(k)`; the δ-strengths are their transverse integrals.
    Profiles { profiles: Vec<ProfileSpec> },
    /// Strengths `α_k`; the profiles are `α_k / (2β)`.
    Alpha { alpha: Vec<StrengthFunction> },
}

/// Roundtrip `α → V → ∫V dt` on sample points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfCheck {
    pub max_abs_error: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
}

pub const SELF_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ResolvedCoupling {
    pub profiles: Vec<TubeProfile>,
    pub strengths: Vec<StrengthFunction>,
    pub self_check: Option<SelfCheck>,
}

impl Coupling {
    pub fn resolve(&self, net: &Network) -> Result<ResolvedCoupling> {
        let beta = net.beta();
        let check_segment = |k: usize| -> Result<()> {
            if k >= net.len() {
                return Err(Error::Config(format!("coupling refers to missing segment {k}")));
            }
            Ok(())
        };
        match self {
            Coupling::Profiles { profiles } => {
                let mut tube = Vec::with_capacity(profiles.len());
                let mut strengths = Vec::with_capacity(profiles.len());
                for p in profiles {
                    check_segment(p.segment)?;
                    let v = TubeProfile::new(p.segment, beta, p.shape.clone())?;
                    v.check_integrable(net.segment(p.segment)?.length())?;
                    strengths.push(effective_alpha(&v, DEFAULT_ORDER)?);
                    tube.push(v);
                }
                Ok(ResolvedCoupling {
                    profiles: tube,
                    strengths,
                    self_check: None,
                })
            }
            Coupling::Alpha { alpha } => {
                let mut tube = Vec::with_capacity(alpha.len());
                let mut worst: f64 = 0.0;
                let mut samples = 0;
                for a in alpha {
                    check_segment(a.segment)?;
                    if !matches!(a.law, StrengthLaw::Function { .. }) {
                        return Err(Error::Config(
                            "alpha coupling needs explicit strength functions".into(),
                        ));
                    }
                    let v = potential_from_alpha(a, beta)?;
                    let back = effective_alpha(&v, DEFAULT_ORDER)?;
                    let l = net.segment(a.segment)?.length();
                    let s: Vec<f64> = (0..=100).map(|i| l * i as f64 / 100.0).collect();
                    for (x, y) in a.eval_many(&s)?.iter().zip(back.eval_many(&s)?) {
                        worst = worst.max((x - y).abs() / x.abs().max(1.0));
                    }
                    samples += s.len();
                    tube.push(v);
                }
                Ok(ResolvedCoupling {
                    profiles: tube,
                    strengths: alpha.clone(),
                    self_check: Some(SelfCheck {
                        max_abs_error: worst,
                        samples,
                        tolerance: SELF_CHECK_TOL,
                        passed: worst <= SELF_CHECK_TOL,
                    }),
                })
            }
        }
    }
}

/// Background potential `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Background {
    Constant { value: f64 },
    /// `f(|x|)`
    Radial { f: ScalarFn },
}

impl Background {
    pub fn eval(&self, p: Vec2) -> f64 {
        match self {
            Background::Constant { value } => *value,
            Background::Radial { f } => f.eval(p.norm()),
        }
    }
}

/// Either an explicit list or a geometric sequence `max·ratio^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsGrid {
    List(Vec<f64>),
    Geometric {
        max: f64,
        count: usize,
        #[serde(default = "default_ratio")]
        ratio: f64,
    },
}

fn default_ratio() -> f64 {
    0.7
}

impl EpsGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            EpsGrid::List(v) => v.clone(),
            EpsGrid::Geometric { max, count, ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::Config(format!("eps ratio must lie in (0, 1), got {ratio}")));
                }
                (0..*count).map(|i| max * ratio.powi(i as i32)).collect()
            }
        };
        if v.is_empty() {
            return Err(Error::Config("eps grid is empty".into()));
        }
        if v.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return Err(Error::Config("eps values must be positive and finite".into()));
        }
        if v.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("eps grid must be strictly decreasing".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub eig: EigOptions,
    pub power: PowerOptions,
    pub quadrature: SqueezedQuadrature,
}

impl SolverConfig {
    fn seeded(&self, seed: u64) -> Self {
        let mut s = *self;
        s.eig.seed = seed;
        s.power.seed = seed;
        s
    }
}

/// Side options that do not change results.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Directory for Matrix Market dumps of the assembled matrices.
    pub dump_mm: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub config: Value,
    pub beta: Option<f64>,
    pub beta_cap: Option<f64>,
    pub mesh: Option<MeshSummary>,
    pub shift: Option<f64>,
    pub residuals: Vec<f64>,
    pub flags: Vec<String>,
    pub results: Value,
    pub csv_sha256: String,
    #[serde(skip)]
    pub csv: String,
}

impl Report {
    fn new(scenario: &str, config: &impl Serialize, csv: String) -> Result<Self> {
        Ok(Self {
            scenario: scenario.into(),
            config: serde_json::to_value(config)?,
            beta: None,
            beta_cap: None,
            mesh: None,
            shift: None,
            residuals: Vec::new(),
            flags: Vec::new(),
            results: Value::Null,
            csv_sha256: sha256_hex(&csv),
            csv,
        })
    }

    fn with_network(mut self, net: &Network) -> Self {
        self.beta = Some(net.beta());
        self.beta_cap = Some(net.beta_cap());
        self
    }

    /// 0 on success, 2 if any flag was raised.
    pub fn exit_code(&self) -> i32 {
        if self.flags.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `report.json` and `data.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json()? + "\n")?;
        std::fs::write(dir.join("data.csv"), &self.csv)?;
        Ok(())
    }
}

pub fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn num(x: f64) -> String {
    format!("{x:.17e}")
}

// ---------------------------------------------------------------------------
// forms

fn base_operator<T: Scalar>(
    mesh: &Mesh,
    field: Option<&VectorPotential>,
    background: Option<&Background>,
) -> Result<CsrMatrix<T>> {
    let mut s = match field.filter(|a| !a.is_zero()) {
        None => assemble_stiffness(mesh).map(T::from_f64),
        Some(a) => {
            if !T::IS_COMPLEX {
                return Err(Error::Parameter("a magnetic form needs complex scalars".into()));
            }
            let a = *a;
            assemble_magnetic_stiffness(mesh, move |p| a.eval(p)).map(|z| T::from_re_im(z.re, z.im))
        }
    };
    if let Some(q) = background {
        let q = q.clone();
        s = s.add_scaled(&assemble_volume_potential(mesh, move |p| q.eval(p)), T::from_f64(1.0))?;
    }
    Ok(s)
}

struct FormBuilder<'a, T: Scalar> {
    mesh: &'a Mesh,
    m: Arc<CsrMatrix<f64>>,
    base: CsrMatrix<T>,
    magnetic: bool,
}

impl<'a, T: Scalar> FormBuilder<'a, T> {
    fn new(mesh: &'a Mesh, field: Option<&VectorPotential>, background: Option<&Background>) -> Result<Self> {
        let m = assemble_mass(mesh);
        check_mass_spd(&m)?;
        Ok(Self {
            mesh,
            m: Arc::new(m),
            base: base_operator(mesh, field, background)?,
            magnetic: field.is_some_and(|a| !a.is_zero()),
        })
    }

    fn plain(&self) -> Result<AssembledForm<T>> {
        AssembledForm::new(
            self.base.clone(),
            Arc::clone(&self.m),
            FormMeta {
                magnetic: self.magnetic,
                delta: false,
                eps: None,
            },
        )
    }

    fn delta(&self, net: &Network, strengths: &[StrengthFunction]) -> Result<AssembledForm<T>> {
        let d = assemble_delta_term(self.mesh, net, strengths)?;
        AssembledForm::new(
            self.base.add_scaled(&d, T::from_f64(1.0))?,
            Arc::clone(&self.m),
            FormMeta {
                magnetic: self.magnetic,
                delta: true,
                eps: None,
            },
        )
    }

    fn squeezed(
        &self,
        net: &Network,
        profiles: &[TubeProfile],
        eps: f64,
        quadrature: SqueezedQuadrature,
    ) -> Result<AssembledForm<T>> {
        let v = assemble_squeezed_potential(self.mesh, net, profiles, eps, quadrature)?;
        AssembledForm::new(
            self.base.add_scaled(&v, T::from_f64(1.0))?,
            Arc::clone(&self.m),
            FormMeta {
                magnetic: self.magnetic,
                delta: false,
                eps: Some(eps),
            },
        )
    }
}

fn dump<T: Scalar>(opts: &RunOptions, name: &str, a: &CsrMatrix<T>, comment: &str) -> Result<()> {
    if let Some(dir) = &opts.dump_mm {
        std::fs::create_dir_all(dir)?;
        a.write_matrix_market(&dir.join(format!("{name}.mtx")), comment)?;
    }
    Ok(())
}

fn first_eig<T: Scalar>(form: &AssembledForm<T>, k: usize, eig: &EigOptions) -> Result<SpectralResult<T>> {
    lowest_eigs(&form.s, &form.m, k, None, eig)
}

// ---------------------------------------------------------------------------
// convergence

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub network: NetworkConfig,
    pub coupling: Coupling,
    /// Homogeneous magnetic field; absent or zero gives a real operator.
    #[serde(default)]
    pub field: Option<VectorPotential>,
    #[serde(default)]
    pub background: Option<Background>,
    pub eps: EpsGrid,
    pub mesh: MeshConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Resolvent point; by default `λ₁(δ) - max(1, |λ₁(δ)|)`.
    #[serde(default)]
    pub shift: Option<f64>,
    /// Repeat the largest ε on the mesh `h/2`.
    #[serde(default = "yes")]
    pub refinement_check: bool,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

/// Largest tolerated relative change of the resolvent-difference norm
/// under `h → h/2` at the largest ε.
pub const REFINEMENT_TOL: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementCheck {
    pub eps: f64,
    pub h: f64,
    pub norm_h: f64,
    pub norm_h2: f64,
    pub relative_change: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOutcome {
    pub report: ConvergenceReport,
    pub self_check: Option<SelfCheck>,
    pub refinement: Option<RefinementCheck>,
    pub hermitian_residual: f64,
}

pub fn run_convergence(cfg: &ConvergenceConfig, opts: &RunOptions) -> Result<Report> {
    if cfg.field.is_some_and(|a| !a.is_zero()) {
        convergence_impl::<Complex64>(cfg, opts)
    } else {
        convergence_impl::<f64>(cfg, opts)
    }
}

struct EpsPoint {
    lambda: f64,
    residual: f64,
    norm: f64,
    iterations: usize,
    converged: bool,
    hermitian: f64,
}

fn convergence_impl<T: Scalar>(cfg: &ConvergenceConfig, opts: &RunOptions) -> Result<Report> {
    let solver = cfg.solver.seeded(cfg.seed);
    let net = cfg.network.build()?;
    let beta = net.beta();
    let eps = cfg.eps.values()?;
    if eps[0] > beta {
        return Err(Error::Config(format!("largest eps {} exceeds β = {beta}", eps[0])));
    }
    let eps_min = eps[eps.len() - 1];
    if cfg.mesh.h > eps_min / 4.0 * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "h = {} must not exceed min(eps)/4 = {}",
            cfg.mesh.h,
            eps_min / 4.0
        )));
    }
    let coupling = cfg.coupling.resolve(&net)?;
    let mesh = cfg.mesh.build()?;
    let fb = FormBuilder::<T>::new(&mesh, cfg.field.as_ref(), cfg.background.as_ref())?;
    let delta = fb.delta(&net, &coupling.strengths)?;
    dump(opts, "M", &fb.m, "mass matrix")?;
    dump(opts, "S_delta", &delta.s, "delta form")?;
    let ground = first_eig(&delta, 1, &solver.eig)?;
    let lambda_delta = ground.eigenvalues[0];
    let shift = cfg
        .shift
        .unwrap_or(lambda_delta - lambda_delta.abs().max(1.0));
    info!("λ₁(δ) = {lambda_delta}, resolvent point {shift}");
    let r_delta = Resolvent::new(&delta.s, &fb.m, shift)?;

    let points: Vec<EpsPoint> = eps
        .par_iter()
        .map(|&e| -> Result<EpsPoint> {
            let at = Error::at_eps(e);
            let inner = || -> Result<EpsPoint> {
                let form = fb.squeezed(&net, &coupling.profiles, e, solver.quadrature)?;
                let g = first_eig(&form, 1, &solver.eig)?;
                if !(shift < g.eigenvalues[0]) {
                    return Err(Error::Shift(format!(
                        "resolvent point {shift} is not below λ₁ = {}",
                        g.eigenvalues[0]
                    )));
                }
                let r_eps = Resolvent::new(&form.s, &fb.m, shift)?;
                let d = resolvent_diff_norm_with(&r_delta, &r_eps, &solver.power);
                Ok(EpsPoint {
                    lambda: g.eigenvalues[0],
                    residual: g.residuals[0],
                    norm: d.norm,
                    iterations: d.iterations,
                    converged: d.converged,
                    hermitian: form.hermitian_residual(),
                })
            };
            inner().map_err(at)
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, &e) in eps.iter().enumerate() {
        if opts.dump_mm.is_some() {
            let form = fb.squeezed(&net, &coupling.profiles, e, solver.quadrature).map_err(Error::at_eps(e))?;
            dump(opts, &format!("S_eps_{i}"), &form.s, &format!("squeezed form, eps = {e}"))?;
        }
    }

    let mut flags = Vec::new();
    let res_norm: Vec<f64> = points.iter().map(|p| p.norm).collect();
    let lambda_eps: Vec<f64> = points.iter().map(|p| p.lambda).collect();
    let eig_gap: Vec<f64> = lambda_eps.iter().map(|l| (l - lambda_delta).abs()).collect();
    let fit = |v: &[f64], what: &str, flags: &mut Vec<String>| -> Option<RateFit> {
        match fit_rate(&eps, v) {
            Ok(f) => Some(f),
            Err(e) => {
                warn!("{what} fit skipped: {e}");
                flags.push(format!("insufficient_points_for_{what}_fit"));
                None
            }
        }
    };
    let res_fit = fit(&res_norm, "res_norm", &mut flags);
    let gap_fit = fit(&eig_gap, "eig_gap", &mut flags);
    if res_norm.windows(2).any(|w| !(w[1] < w[0])) {
        flags.push("res_norm_not_strictly_decreasing".into());
    }
    if points.iter().any(|p| !p.converged) {
        flags.push("power_iteration_not_converged".into());
    }
    let hermitian = points
        .iter()
        .map(|p| p.hermitian)
        .fold(delta.hermitian_residual(), f64::max);
    if let Some(sc) = &coupling.self_check {
        if !sc.passed {
            flags.push("alpha_roundtrip_failed".into());
        }
    }

    let refinement = if cfg.refinement_check {
        let fine = cfg.mesh.refined();
        let mesh2 = fine.build()?;
        let fb2 = FormBuilder::<T>::new(&mesh2, cfg.field.as_ref(), cfg.background.as_ref())?;
        let d2 = fb2.delta(&net, &coupling.strengths)?;
        let rd2 = Resolvent::new(&d2.s, &fb2.m, shift)?;
        let e = eps[0];
        let f2 = fb2
            .squeezed(&net, &coupling.profiles, e, solver.quadrature)
            .map_err(Error::at_eps(e))?;
        let re2 = Resolvent::new(&f2.s, &fb2.m, shift).map_err(Error::at_eps(e))?;
        let n2 = resolvent_diff_norm_with(&rd2, &re2, &solver.power).norm;
        let rel = (n2 - res_norm[0]).abs() / res_norm[0];
        let passed = rel < REFINEMENT_TOL;
        if !passed {
            flags.push("discretization_not_subordinate".into());
        }
        Some(RefinementCheck {
            eps: e,
            h: cfg.mesh.h,
            norm_h: res_norm[0],
            norm_h2: n2,
            relative_change: rel,
            passed,
        })
    } else {
        None
    };

    let mut residuals = vec![ground.residuals[0]];
    residuals.extend(points.iter().map(|p| p.residual));
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let conv = ConvergenceReport {
        eps: eps.clone(),
        res_norm,
        res_converged: points.iter().map(|p| p.converged).collect(),
        res_iterations: points.iter().map(|p| p.iterations).collect(),
        lambda_delta,
        lambda_eps,
        eig_gap,
        res_fit,
        gap_fit,
        shift,
        max_residual,
        flags: flags.clone(),
    };
    let outcome = ConvergenceOutcome {
        self_check: coupling.self_check,
        refinement,
        hermitian_residual: hermitian,
        report: conv,
    };
    let mut rep = Report::new("converge", cfg, outcome.report.to_csv())?.with_network(&net);
    rep.mesh = Some(mesh.summary());
    rep.shift = Some(shift);
    rep.residuals = residuals;
    rep.flags = flags;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// star graphs

fn default_star_cap() -> f64 {
    0.25
}

fn default_rotation() -> f64 {
    17f64.to_radians()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarGraphConfig {
    pub edges: usize,
    pub edge_length: f64,
    /// Consecutive angles between rays, radians, summing to 2π.
    pub angles: Vec<f64>,
    pub alpha: f64,
    /// Squeezed width; the δ-form is used when absent.
    #[serde(default)]
    pub eps: Option<f64>,
    pub mesh: MeshConfig,
    /// Also solve the symmetric graph and a rotated copy of it.
    #[serde(default = "yes")]
    pub symmetric_comparison: bool,
    #[serde(default = "default_rotation")]
    pub rotation: f64,
    /// Repeat every solve on `h/2` for the error estimate.
    #[serde(default = "yes")]
    pub refine: bool,
    #[serde(default = "default_star_cap")]
    pub beta_cap: f64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphLevels {
    pub name: String,
    pub angles: Vec<f64>,
    pub rotation: f64,
    pub lambda_h: f64,
    pub lambda_h2: Option<f64>,
    pub beta: f64,
}

impl GraphLevels {
    fn best(&self) -> f64 {
        self.lambda_h2.unwrap_or(self.lambda_h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarGraphOutcome {
    pub graphs: Vec<GraphLevels>,
    /// `λ(Γ) - λ(Σ)` on the finest mesh.
    pub gap: Option<f64>,
    /// `λ(Γ_rot) - λ(Γ)` on the finest mesh.
    pub rotation_gap: Option<f64>,
    /// `max |λ(h) - λ(h/2)|` over the solved graphs.
    pub error_estimate: Option<f64>,
    pub congruent: bool,
    pub strict_inequality_resolved: Option<bool>,
}

fn is_symmetric(angles: &[f64]) -> bool {
    let a = 2.0 * PI / angles.len() as f64;
    angles.iter().all(|x| (x - a).abs() < 1e-10)
}

pub fn run_stargraph(cfg: &StarGraphConfig, opts: &RunOptions) -> Result<Report> {
    if cfg.edges <= 2 {
        return Err(Error::Config(format!("star graph needs N > 2 edges, got {}", cfg.edges)));
    }
    if cfg.angles.len() != cfg.edges {
        return Err(Error::Config(format!(
            "{} angles given for {} edges",
            cfg.angles.len(),
            cfg.edges
        )));
    }
    let sum: f64 = cfg.angles.iter().sum();
    if (sum - 2.0 * PI).abs() > 1e-10 || cfg.angles.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::Config(format!("angles must be positive and sum to 2π, sum = {sum}")));
    }
    if !(cfg.edge_length > 0.0) {
        return Err(Error::Config("edge length must be positive".into()));
    }
    let solver = cfg.solver.seeded(cfg.seed);
    let sym = vec![2.0 * PI / cfg.edges as f64; cfg.edges];
    let mut graphs = vec![("sigma", cfg.angles.clone(), 0.0)];
    if cfg.symmetric_comparison {
        graphs.push(("gamma", sym.clone(), 0.0));
        graphs.push(("gamma_rotated", sym, cfg.rotation));
    }
    let mut meshes = vec![cfg.mesh];
    if cfg.refine {
        meshes.push(cfg.mesh.refined());
    }
    let mut levels = Vec::new();
    let mut residuals = Vec::new();
    let mut csv = String::from("graph,h,lambda,residual\n");
    let mut first_beta = None;
    for (name, angles, rot) in &graphs {
        let net = Network::new(
            star_graph(cfg.edge_length, angles, *rot)?,
            BetaOptions::with_cap(cfg.beta_cap),
        )?;
        first_beta.get_or_insert(net.beta());
        let mut lam = Vec::new();
        for (level, mc) in meshes.iter().enumerate() {
            let mesh = mc.build()?;
            let fb = FormBuilder::<f64>::new(&mesh, None, None)?;
            let form = match cfg.eps {
                None => fb.delta(&net, &constant_strengths(&net, cfg.alpha))?,
                Some(e) => {
                    let prof = constant_profiles(&net, cfg.alpha)?;
                    fb.squeezed(&net, &prof, e, solver.quadrature).map_err(Error::at_eps(e))?
                }
            };
            if level == 0 {
                dump(opts, &format!("S_{name}"), &form.s, "star graph form")?;
            }
            let r = first_eig(&form, 1, &solver.eig)?;
            info!("{name} at h = {}: λ₁ = {}", mc.h, r.eigenvalues[0]);
            writeln!(csv, "{name},{},{},{}", num(mc.h), num(r.eigenvalues[0]), num(r.residuals[0])).ok();
            residuals.push(r.residuals[0]);
            lam.push(r.eigenvalues[0]);
        }
        levels.push(GraphLevels {
            name: name.to_string(),
            angles: angles.clone(),
            rotation: *rot,
            lambda_h: lam[0],
            lambda_h2: lam.get(1).copied(),
            beta: net.beta(),
        });
    }
    let error_estimate = cfg.refine.then(|| {
        levels
            .iter()
            .map(|g| (g.lambda_h - g.lambda_h2.unwrap()).abs())
            .fold(0.0, f64::max)
    });
    let congruent = is_symmetric(&cfg.angles);
    let mut flags = Vec::new();
    let (gap, rotation_gap) = if cfg.symmetric_comparison {
        (
            Some(levels[1].best() - levels[0].best()),
            Some(levels[2].best() - levels[1].best()),
        )
    } else {
        (None, None)
    };
    let mut strict = None;
    if let (Some(g), Some(err)) = (gap, error_estimate) {
        if congruent {
            if g.abs() > err {
                flags.push("congruent_gap_exceeds_error_estimate".into());
            }
        } else {
            let ok = g > 5.0 * err;
            strict = Some(ok);
            if !ok {
                flags.push("gap_not_resolved".into());
            }
        }
    }
    if let (Some(rg), Some(err)) = (rotation_gap, error_estimate) {
        if rg.abs() > err {
            flags.push("rotation_gap_exceeds_error_estimate".into());
        }
    }
    let outcome = StarGraphOutcome {
        graphs: levels,
        gap,
        rotation_gap,
        error_estimate,
        congruent,
        strict_inequality_resolved: strict,
    };
    let mut rep = Report::new("stargraph", cfg, csv)?;
    rep.beta = first_beta;
    rep.beta_cap = Some(cfg.beta_cap);
    rep.mesh = Some(cfg.mesh.build()?.summary());
    rep.residuals = residuals;
    rep.flags = flags;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

fn constant_strengths(net: &Network, alpha: f64) -> Vec<StrengthFunction> {
    (0..net.len()).map(|k| StrengthFunction::constant(k, alpha)).collect()
}

fn constant_profiles(net: &Network, alpha: f64) -> Result<Vec<TubeProfile>> {
    (0..net.len())
        .map(|k| TubeProfile::constant(k, net.beta(), alpha / (2.0 * net.beta())))
        .collect()
}

// ---------------------------------------------------------------------------
// cusp

fn default_x_join() -> f64 {
    0.5
}

fn default_cusp_cap() -> f64 {
    0.25
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspOracleConfig {
    pub length: f64,
    pub cells: usize,
}

impl Default for CuspOracleConfig {
    fn default() -> Self {
        Self {
            length: 8.0,
            cells: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspConfig {
    pub d: f64,
    /// Negative strengths of increasing magnitude.
    pub alphas: Vec<f64>,
    #[serde(default = "default_x_join")]
    pub x_join: f64,
    #[serde(default)]
    pub eps: Option<f64>,
    pub mesh: MeshConfig,
    #[serde(default = "default_cusp_cap")]
    pub beta_cap: f64,
    #[serde(default)]
    pub oracle: CuspOracleConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspPoint {
    pub alpha: f64,
    pub lambda: f64,
    /// `(λ₁ + α²) / |α|^{6/(d+2)}`
    pub ratio: f64,
    pub deviation: f64,
    /// Two-term expansion `-α² + target |α|^{6/(d+2)}`.
    pub expansion: f64,
    pub expansion_negative: bool,
    pub outside_asymptotic_regime: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspOutcome {
    pub e1: f64,
    /// `2^{2/(d+2)} E₁(B)`
    pub target: f64,
    pub points: Vec<CuspPoint>,
    pub deviation_strictly_decreasing: bool,
}

pub fn run_cusp(cfg: &CuspConfig, opts: &RunOptions) -> Result<Report> {
    if !(cfg.d > 1.0) {
        return Err(Error::Config(format!("cusp exponent must exceed 1, got {}", cfg.d)));
    }
    if cfg.alphas.is_empty() || cfg.alphas.iter().any(|a| !(*a < 0.0)) {
        return Err(Error::Config("cusp strengths must be negative".into()));
    }
    if cfg.alphas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Config("cusp strengths must increase in magnitude".into()));
    }
    let deepest = cfg.alphas[cfg.alphas.len() - 1].abs();
    let decay = 2.0 / deepest;
    if decay < 4.0 * cfg.mesh.h {
        return Err(Error::Resolution {
            eps: decay,
            h: cfg.mesh.h,
            limit: decay / 4.0,
        });
    }
    let solver = cfg.solver.seeded(cfg.seed);
    let b = cusp_operator_eigs(cfg.d, 1, cfg.oracle.length, cfg.oracle.cells)?;
    let e1 = b.eigenvalues[0];
    let p = 6.0 / (cfg.d + 2.0);
    let target = 2f64.powf(2.0 / (cfg.d + 2.0)) * e1;
    let net = Network::new(cusp_curve(cfg.d, cfg.x_join)?, BetaOptions::with_cap(cfg.beta_cap))?;
    let mesh = cfg.mesh.build()?;
    let fb = FormBuilder::<f64>::new(&mesh, None, None)?;
    let mut points = Vec::new();
    let mut csv = String::from("alpha,lambda,ratio,deviation,outside_regime\n");
    let mut flags = Vec::new();
    for &alpha in &cfg.alphas {
        let form = match cfg.eps {
            None => fb.delta(&net, &constant_strengths(&net, alpha))?,
            Some(e) => fb
                .squeezed(&net, &constant_profiles(&net, alpha)?, e, solver.quadrature)
                .map_err(Error::at_eps(e))?,
        };
        dump(opts, &format!("S_alpha_{}", points.len()), &form.s, &format!("cusp form, alpha = {alpha}"))?;
        let r = first_eig(&form, 1, &solver.eig)?;
        let lambda = r.eigenvalues[0];
        let scale = alpha.abs().powf(p);
        let ratio = (lambda + alpha * alpha) / scale;
        let expansion = -alpha * alpha + target * scale;
        let outside = lambda >= 0.0;
        if outside {
            flags.push(format!("outside_asymptotic_regime_at_alpha_{alpha}"));
        }
        writeln!(csv, "{},{},{},{},{}", num(alpha), num(lambda), num(ratio), num((ratio - target).abs()), outside).ok();
        points.push(CuspPoint {
            alpha,
            lambda,
            ratio,
            deviation: (ratio - target).abs(),
            expansion,
            expansion_negative: expansion < 0.0,
            outside_asymptotic_regime: outside,
            residual: r.residuals[0],
        });
    }
    let decreasing = points.windows(2).all(|w| w[1].deviation < w[0].deviation);
    if points.len() > 1 && !decreasing {
        flags.push("deviation_not_strictly_decreasing".into());
    }
    let outcome = CuspOutcome {
        e1,
        target,
        deviation_strictly_decreasing: decreasing,
        points,
    };
    let mut rep = Report::new("cusp", cfg, csv)?.with_network(&net);
    rep.mesh = Some(mesh.summary());
    rep.residuals = outcome.points.iter().map(|p| p.residual).collect();
    rep.flags = flags;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// wedge

fn default_ray_cap() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeConfig {
    /// Opening angle, radians, in (0, π).
    pub phi: f64,
    pub alpha: f64,
    /// Essential-spectrum infimum in units of the field; the criterion is
    /// skipped when absent.
    #[serde(default)]
    pub theta: Option<f64>,
    pub b: f64,
    /// Length of the two truncated rays.
    pub ray_length: f64,
    pub mesh: MeshConfig,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_ray_cap")]
    pub beta_cap: f64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeOutcome {
    pub criterion: Option<crate::oracles::WedgeInfimum>,
    pub eigenvalues: Vec<f64>,
    pub hermitian_residual: f64,
    pub max_ritz_imag: f64,
    /// `λ₁ < Θ·b`
    pub below_essential_proxy: Option<bool>,
}

pub fn wedge_network(phi: f64, ray_length: f64, beta_cap: f64) -> Result<Network> {
    Network::new(
        star_graph(ray_length, &[phi, 2.0 * PI - phi], -0.5 * phi)?,
        BetaOptions::with_cap(beta_cap),
    )
}

pub fn run_wedge(cfg: &WedgeConfig, opts: &RunOptions) -> Result<Report> {
    if cfg.b == 0.0 {
        return Err(Error::Config("the wedge scenario is magnetic: b must be nonzero".into()));
    }
    if !(cfg.phi > 0.0 && cfg.phi < PI) {
        return Err(Error::Config(format!("opening angle must lie in (0, π), got {}", cfg.phi)));
    }
    let solver = cfg.solver.seeded(cfg.seed);
    let criterion = match cfg.theta {
        Some(theta) => Some(wedge_f_infimum(&WedgeParams::new(cfg.phi, cfg.alpha, theta)?)),
        None => {
            warn!("Θ not given; skipping the analytic criterion");
            None
        }
    };
    let net = wedge_network(cfg.phi, cfg.ray_length, cfg.beta_cap)?;
    let mesh = cfg.mesh.build()?;
    let field = VectorPotential::homogeneous(cfg.b);
    let fb = FormBuilder::<Complex64>::new(&mesh, Some(&field), None)?;
    let form = match cfg.eps {
        None => fb.delta(&net, &constant_strengths(&net, cfg.alpha))?,
        Some(e) => fb
            .squeezed(&net, &constant_profiles(&net, cfg.alpha)?, e, solver.quadrature)
            .map_err(Error::at_eps(e))?,
    };
    dump(opts, "M", &fb.m, "mass matrix")?;
    dump(opts, "S", &form.s, "magnetic wedge form")?;
    let r = first_eig(&form, cfg.k, &solver.eig)?;
    let mut csv = String::from("k,lambda,residual\n");
    for (i, (l, res)) in r.eigenvalues.iter().zip(&r.residuals).enumerate() {
        writeln!(csv, "{},{},{}", i + 1, num(*l), num(*res)).ok();
    }
    let below = cfg.theta.map(|t| r.eigenvalues[0] < t * cfg.b);
    let outcome = WedgeOutcome {
        criterion,
        eigenvalues: r.eigenvalues.clone(),
        hermitian_residual: form.hermitian_residual(),
        max_ritz_imag: r.max_ritz_imag,
        below_essential_proxy: below,
    };
    let mut flags = Vec::new();
    if cfg.theta.is_none() {
        flags.push("criterion_skipped_without_theta".into());
    }
    let mut rep = Report::new("wedge", cfg, csv)?.with_network(&net);
    rep.mesh = Some(mesh.summary());
    rep.residuals = r.residuals;
    rep.flags = flags;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// plain spectra

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Without a network the operator has no interaction term.
    #[serde(default)]
    pub network: Option<NetworkConfig>,
    #[serde(default)]
    pub coupling: Option<Coupling>,
    #[serde(default)]
    pub field: Option<VectorPotential>,
    #[serde(default)]
    pub background: Option<Background>,
    #[serde(default)]
    pub eps: Option<f64>,
    pub mesh: MeshConfig,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutcome {
    pub eigenvalues: Vec<f64>,
    pub shift: f64,
    pub hermitian_residual: f64,
    pub factorizations: usize,
    pub solves: usize,
}

pub fn run_spectrum(cfg: &SpectrumConfig, opts: &RunOptions) -> Result<Report> {
    if cfg.field.is_some_and(|a| !a.is_zero()) {
        spectrum_impl::<Complex64>(cfg, opts)
    } else {
        spectrum_impl::<f64>(cfg, opts)
    }
}

fn spectrum_impl<T: Scalar>(cfg: &SpectrumConfig, opts: &RunOptions) -> Result<Report> {
    let solver = cfg.solver.seeded(cfg.seed);
    let mesh = cfg.mesh.build()?;
    let fb = FormBuilder::<T>::new(&mesh, cfg.field.as_ref(), cfg.background.as_ref())?;
    let net = cfg.network.as_ref().map(|n| n.build()).transpose()?;
    let form = match (&net, &cfg.coupling) {
        (Some(net), Some(c)) => {
            let c = c.resolve(net)?;
            match cfg.eps {
                None => fb.delta(net, &c.strengths)?,
                Some(e) => {
                    if e > net.beta() {
                        return Err(Error::Config(format!("eps {e} exceeds β = {}", net.beta())));
                    }
                    fb.squeezed(net, &c.profiles, e, solver.quadrature).map_err(Error::at_eps(e))?
                }
            }
        }
        (None, None) => fb.plain()?,
        _ => return Err(Error::Config("network and coupling must be given together".into())),
    };
    dump(opts, "M", &fb.m, "mass matrix")?;
    dump(opts, "S", &form.s, "form")?;
    let r = first_eig(&form, cfg.k, &solver.eig)?;
    let mut csv = String::from("k,lambda,residual\n");
    for (i, (l, res)) in r.eigenvalues.iter().zip(&r.residuals).enumerate() {
        writeln!(csv, "{},{},{}", i + 1, num(*l), num(*res)).ok();
    }
    let outcome = SpectrumOutcome {
        eigenvalues: r.eigenvalues.clone(),
        shift: r.shift,
        hermitian_residual: form.hermitian_residual(),
        factorizations: r.factorizations,
        solves: r.solves,
    };
    let mut rep = Report::new("spectrum", cfg, csv)?;
    if let Some(net) = &net {
        rep = rep.with_network(net);
    }
    rep.mesh = Some(mesh.summary());
    rep.shift = Some(r.shift);
    rep.residuals = r.residuals;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// 1D oracles

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oracle1dConfig {
    /// Unscaled profile on `|t| < β`, constant in `s`.
    pub shape: ProfileShape,
    pub beta: f64,
    pub eps: EpsGrid,
    #[serde(default)]
    pub options: Oracle1dOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oracle1dOutcome {
    pub alpha: f64,
    /// `-α²/4`
    pub lambda_delta: f64,
    pub lambda: Vec<Option<f64>>,
    pub gap: Vec<Option<f64>>,
    pub fit: Option<RateFit>,
}

pub fn run_oracle1d(cfg: &Oracle1dConfig, _opts: &RunOptions) -> Result<Report> {
    let eps = cfg.eps.values()?;
    if eps[0] > cfg.beta {
        return Err(Error::Config(format!("largest eps {} exceeds β = {}", eps[0], cfg.beta)));
    }
    let v = TubeProfile::new(0, cfg.beta, cfg.shape.clone())?;
    let alpha = effective_alpha(&v, DEFAULT_ORDER)?.eval(0.0);
    let mut flags = Vec::new();
    let lambda_delta = match delta_point_eigenvalue(alpha) {
        Ok(l) => l,
        Err(e) => {
            flags.push("no_delta_bound_state".into());
            warn!("{e}");
            f64::NAN
        }
    };
    let lambda = eps
        .iter()
        .map(|&e| {
            squeezed_1d_eigenvalue(&v, e, &cfg.options)
                .map(|r| r.map(|r| r.lambda))
                .map_err(Error::at_eps(e))
        })
        .collect::<Result<Vec<_>>>()?;
    let gap: Vec<Option<f64>> = lambda.iter().map(|l| l.map(|l| (l - lambda_delta).abs())).collect();
    let usable: Vec<(f64, f64)> = eps
        .iter()
        .zip(&gap)
        .filter_map(|(e, g)| g.map(|g| (*e, g)))
        .collect();
    let (fe, fg): (Vec<f64>, Vec<f64>) = usable.into_iter().unzip();
    let fit = match fit_rate(&fe, &fg) {
        Ok(f) => Some(f),
        Err(e) => {
            warn!("fit skipped: {e}");
            flags.push("insufficient_points_for_fit".into());
            None
        }
    };
    let mut csv = String::from("eps,lambda,gap\n");
    for ((e, l), g) in eps.iter().zip(&lambda).zip(&gap) {
        let f = |x: &Option<f64>| x.map(num).unwrap_or_default();
        writeln!(csv, "{},{},{}", num(*e), f(l), f(g)).ok();
    }
    let outcome = Oracle1dOutcome {
        alpha,
        lambda_delta,
        lambda,
        gap,
        fit,
    };
    let mut rep = Report::new("oracle1d", cfg, csv)?;
    rep.beta = Some(cfg.beta);
    rep.flags = flags;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspBConfig {
    pub d: f64,
    pub k: usize,
    pub length: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspBOutcome {
    pub spectrum: crate::oracles::CuspSpectrum,
    /// `E_k` for `d = 2`: `4k - 1`.
    pub analytic: Option<Vec<f64>>,
    pub max_analytic_error: Option<f64>,
    /// Change of `E₁` when the interval is doubled.
    pub doubling_change: f64,
}

pub fn run_cusp_b(cfg: &CuspBConfig, _opts: &RunOptions) -> Result<Report> {
    let spectrum = cusp_operator_eigs(cfg.d, cfg.k, cfg.length, cfg.cells)?;
    let doubled = cusp_operator_eigs(cfg.d, 1, 2.0 * cfg.length, 2 * cfg.cells)?;
    let doubling_change = (doubled.eigenvalues[0] - spectrum.eigenvalues[0]).abs();
    let analytic = (cfg.d == 2.0).then(|| (1..=cfg.k).map(|k| 4.0 * k as f64 - 1.0).collect::<Vec<_>>());
    let max_analytic_error = analytic.as_ref().map(|a| {
        a.iter()
            .zip(&spectrum.eigenvalues)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    });
    let mut csv = String::from("k,eigenvalue,coarse,fine\n");
    for i in 0..cfg.k {
        writeln!(
            csv,
            "{},{},{},{}",
            i + 1,
            num(spectrum.eigenvalues[i]),
            num(spectrum.coarse[i]),
            num(spectrum.fine[i])
        )
        .ok();
    }
    let outcome = CuspBOutcome {
        spectrum,
        analytic,
        max_analytic_error,
        doubling_change,
    };
    let mut rep = Report::new("cusp-b", cfg, csv)?;
    rep.results = serde_json::to_value(&outcome)?;
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeFConfig {
    pub phi: f64,
    pub alpha: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeFOutcome {
    pub infimum: crate::oracles::WedgeInfimum,
    /// `min_x 1 + x⁴/4 - Θx²`, the `α → 0` limit.
    pub magnetic_only: f64,
}

pub fn run_wedge_f(cfg: &WedgeFConfig, _opts: &RunOptions) -> Result<Report> {
    let p = WedgeParams::new(cfg.phi, cfg.alpha, cfg.theta)?;
    let infimum = wedge_f_infimum(&p);
    let magnetic_only = if cfg.theta > 0.0 { 1.0 - cfg.theta * cfg.theta } else { 1.0 };
    let mut flags = Vec::new();
    if !infimum.refined {
        flags.push("optimizer_unrefined".into());
    }
    let csv = format!(
        "value,x,y,negative\n{},{},{},{}\n",
        num(infimum.value),
        num(infimum.argmin.0),
        num(infimum.argmin.1),
        infimum.negative
    );
    let mut rep = Report::new("wedge-f", cfg, csv)?;
    rep.flags = flags;
    rep.results = serde_json::to_value(WedgeFOutcome { infimum, magnetic_only })?;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// dispatch

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Converge,
    Stargraph,
    Cusp,
    WedgeF,
    Wedge,
    Spectrum,
    Oracle1d,
    CuspB,
}

/// Parses `config` for `scenario` and runs it; `seed` overrides the
/// config's seed where the scenario has one.
pub fn run_scenario(scenario: Scenario, mut config: Value, seed: Option<u64>, opts: &RunOptions) -> Result<Report> {
    let seeded = !matches!(scenario, Scenario::WedgeF | Scenario::Oracle1d | Scenario::CuspB);
    if let (Some(s), true) = (seed, seeded) {
        match config.as_object_mut() {
            Some(obj) => {
                obj.insert("seed".into(), json!(s));
            }
            None => return Err(Error::Config("configuration must be a JSON object".into())),
        }
    }
    match scenario {
        Scenario::Converge => run_convergence(&serde_json::from_value(config)?, opts),
        Scenario::Stargraph => run_stargraph(&serde_json::from_value(config)?, opts),
        Scenario::Cusp => run_cusp(&serde_json::from_value(config)?, opts),
        Scenario::WedgeF => run_wedge_f(&serde_json::from_value(config)?, opts),
        Scenario::Wedge => run_wedge(&serde_json::from_value(config)?, opts),
        Scenario::Spectrum => run_spectrum(&serde_json::from_value(config)?, opts),
        Scenario::Oracle1d => run_oracle1d(&serde_json::from_value(config)?, opts),
        Scenario::CuspB => run_cusp_b(&serde_json::from_value(config)?, opts),
    }
}

/// A straight segment `[-half_length, half_length] × {0}` as a network spec.
pub fn straight_segment(half_length: f64, beta_cap: f64) -> NetworkConfig {
    NetworkConfig {
        segments: vec![CurveSegment::line([-half_length, 0.0], [half_length, 0.0])
            .expect("nondegenerate segment")
            .spec()
            .clone()],
        beta: BetaOptions::with_cap(beta_cap),
    }
}
