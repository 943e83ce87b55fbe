//! Transverse potential profiles, the squeezing `V ↦ V_ε` and effective δ-strengths.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Network, Vec2};
use crate::quadrature::GaussLegendre;

pub const DEFAULT_ORDER: usize = 16;

/// Real function of one variable, serializable for configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFn {
    Constant { value: f64 },
    /// `Σ c_i x^i`
    Polynomial { coeffs: Vec<f64> },
    /// `amplitude · exp(-((x - center)/width)²)`
    Gaussian {
        amplitude: f64,
        #[serde(default)]
        center: f64,
        width: f64,
    },
    /// `offset + amplitude · cos(frequency · x + phase)`
    Cosine {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Piecewise linear through `(x_i, y_i)`, constant beyond the ends.
    Table { x: Vec<f64>, y: Vec<f64> },
}

impl ScalarFn {
    pub fn constant(value: f64) -> Self {
        ScalarFn::Constant { value }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScalarFn::Constant { value } => *value,
            ScalarFn::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            ScalarFn::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let u = (x - center) / width;
                amplitude * (-u * u).exp()
            }
            ScalarFn::Cosine {
                offset,
                amplitude,
                frequency,
                phase,
            } => offset + amplitude * (frequency * x + phase).cos(),
            ScalarFn::Table { x: xs, y: ys } => interp1(xs, ys, x),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ScalarFn::Table { x, y } => {
                if x.len() != y.len() || x.is_empty() {
                    return Err(Error::Parameter("table needs matching nonempty x, y".into()));
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Parameter("table abscissae must increase".into()));
                }
                if y.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parameter("table values must be finite".into()));
                }
            }
            ScalarFn::Gaussian { width, .. } if !(*width > 0.0) => {
                return Err(Error::Parameter("gaussian width must be positive".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Kinks of the function inside `(a, b)`, for composite quadrature.
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            ScalarFn::Table { x, .. } => x.iter().copied().filter(|&v| v > a && v < b).collect(),
            _ => Vec::new(),
        }
    }
}

fn interp1(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let n = xs.len();
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let f = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] * (1.0 - f) + ys[i + 1] * f
}

/// Profile shapes in the unscaled frame `(s, t)`, `|t| < β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileShape {
    Constant { value: f64 },
    /// `g_s(s) · g_t(t)`
    Separable { along: ScalarFn, across: ScalarFn },
    /// Bilinear interpolation of `values[i][j] = V(s_i, t_j)`; constant
    /// extension in `s`, zero outside `[t_0, t_last]`.
    Tabulated {
        s: Vec<f64>,
        t: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
    /// `α(s) / (2β)`: the inverse construction from a prescribed strength.
    Uniform { strength: ScalarFn },
}

/// Transverse profile `V^(k)` on segment `segment`, possibly squeezed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeProfile {
    pub segment: usize,
    pub beta: f64,
    pub shape: ProfileShape,
    /// `β/ε`; 1 for the unscaled profile.
    #[serde(default = "one")]
    pub squeeze: f64,
}

fn one() -> f64 {
    1.0
}

impl TubeProfile {
    pub fn new(segment: usize, beta: f64, shape: ProfileShape) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Parameter(format!("profile half-width must be positive, got {beta}")));
        }
        match &shape {
            ProfileShape::Constant { value } if !value.is_finite() => {
                return Err(Error::Parameter("profile value must be finite".into()))
            }
            ProfileShape::Separable { along, across } => {
                along.validate()?;
                across.validate()?;
            }
            ProfileShape::Uniform { strength } => strength.validate()?,
            ProfileShape::Tabulated { s, t, values } => {
                if s.is_empty() || t.len() < 2 || values.len() != s.len() {
                    return Err(Error::Parameter("tabulated profile has inconsistent grid".into()));
                }
                if values.iter().any(|row| row.len() != t.len() || row.iter().any(|v| !v.is_finite())) {
                    return Err(Error::Parameter(
                        "tabulated profile rows must match the t grid and be finite".into(),
                    ));
                }
                if s.windows(2).any(|w| !(w[1] > w[0])) || t.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Parameter("tabulated grids must increase".into()));
                }
            }
            _ => {}
        }
        Ok(Self {
            segment,
            beta,
            shape,
            squeeze: 1.0,
        })
    }

    pub fn constant(segment: usize, beta: f64, value: f64) -> Result<Self> {
        Self::new(segment, beta, ProfileShape::Constant { value })
    }

    /// Half-width of the support, `β/squeeze` (= ε once squeezed).
    pub fn support(&self) -> f64 {
        self.beta / self.squeeze
    }

    /// Unscaled profile value at `(s, r)`, `|r| < β`.
    fn base(&self, s: f64, r: f64) -> f64 {
        if !(r.abs() < self.beta) {
            return 0.0;
        }
        match &self.shape {
            ProfileShape::Constant { value } => *value,
            ProfileShape::Separable { along, across } => along.eval(s) * across.eval(r),
            ProfileShape::Uniform { strength } => strength.eval(s) / (2.0 * self.beta),
            ProfileShape::Tabulated { s: sg, t: tg, values } => {
                if r < tg[0] || r > tg[tg.len() - 1] {
                    return 0.0;
                }
                if sg.len() == 1 {
                    return interp1(tg, &values[0], r);
                }
                let i = if s <= sg[0] {
                    0
                } else {
                    (sg.partition_point(|&v| v <= s) - 1).min(sg.len() - 2)
                };
                let f = ((s - sg[i]) / (sg[i + 1] - sg[i])).clamp(0.0, 1.0);
                (1.0 - f) * interp1(tg, &values[i], r) + f * interp1(tg, &values[i + 1], r)
            }
        }
    }

    /// `V(s, t) = squeeze · V_base(s, squeeze · t)`; zero for `|t| ≥ support`.
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        if !(t.abs() < self.support()) {
            return 0.0;
        }
        self.squeeze * self.base(s, self.squeeze * t)
    }

    /// Breakpoints in `t` (support ends, 0, tabulated nodes) of the current frame.
    pub fn t_breaks(&self) -> Vec<f64> {
        let w = self.support();
        let mut b = vec![-w, 0.0, w];
        match &self.shape {
            ProfileShape::Tabulated { t, .. } => {
                b.extend(t.iter().map(|v| v / self.squeeze).filter(|v| v.abs() < w));
            }
            ProfileShape::Separable { across, .. } => {
                b.extend(
                    across
                        .breakpoints(-self.beta, self.beta)
                        .into_iter()
                        .map(|r| r / self.squeeze),
                );
            }
            _ => {}
        }
        b.sort_by(|a, c| a.partial_cmp(c).unwrap());
        b.dedup_by(|a, c| (*a - *c).abs() <= 1e-15 * w);
        b
    }

    /// `∫ V(s, t) dt` over the support by composite Gauss–Legendre.
    pub fn transverse_integral(&self, s: f64, gl: &GaussLegendre) -> f64 {
        gl.integrate_composite(&self.t_breaks(), |t| self.eval(s, t))
    }

    /// Sampled `sup |V|` on a fixed relative grid; the grid scales with the
    /// support so squeezing multiplies the result by exactly `β/ε`.
    pub fn sup_abs(&self, length: f64, n: usize) -> f64 {
        let w = self.support();
        let mut m: f64 = 0.0;
        for i in 0..=n {
            let s = length * i as f64 / n as f64;
            for j in 0..n {
                let rel = -1.0 + (2.0 * j as f64 + 1.0) / n as f64;
                m = m.max(self.squeeze * self.base(s, rel * w * self.squeeze).abs());
            }
        }
        m
    }

    /// Rejects profiles whose transverse integral is not finite at a sample of `s`.
    pub fn check_integrable(&self, length: f64) -> Result<()> {
        let gl = GaussLegendre::new(DEFAULT_ORDER);
        for i in 0..=16 {
            let s = length * i as f64 / 16.0;
            let v: f64 = gl.integrate_composite(&self.t_breaks(), |t| self.eval(s, t).abs());
            if !v.is_finite() {
                return Err(Error::Numeric(format!(
                    "transverse integral of |V| is not finite at s = {s}"
                )));
            }
        }
        Ok(())
    }
}

/// `(s, t) ↦ (β/ε) V(s, (β/ε) t)`, supported in `|t| < ε`.
pub fn scale_profile(v: &TubeProfile, eps: f64, beta: f64) -> Result<TubeProfile> {
    if !(eps > 0.0) || eps > beta * (1.0 + 1e-12) {
        return Err(Error::Parameter(format!(
            "squeezing width must satisfy 0 < eps <= beta = {beta}, got {eps}"
        )));
    }
    if (beta - v.beta).abs() > 1e-12 * beta || v.squeeze != 1.0 {
        return Err(Error::Parameter(format!(
            "profile was built for beta = {} (squeeze {}), not beta = {beta}",
            v.beta, v.squeeze
        )));
    }
    let mut out = v.clone();
    out.squeeze = if eps >= beta { 1.0 } else { beta / eps };
    Ok(out)
}

/// Strength law `α(s)` of one segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum StrengthLaw {
    Function { f: ScalarFn },
    /// Transverse integral of a profile, evaluated on demand.
    Transverse { profile: TubeProfile, order: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthFunction {
    pub segment: usize,
    #[serde(flatten)]
    pub law: StrengthLaw,
}

impl StrengthFunction {
    pub fn constant(segment: usize, alpha: f64) -> Self {
        Self::function(segment, ScalarFn::constant(alpha))
    }

    pub fn function(segment: usize, f: ScalarFn) -> Self {
        Self {
            segment,
            law: StrengthLaw::Function { f },
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match &self.law {
            StrengthLaw::Function { f } => f.eval(s),
            StrengthLaw::Transverse { profile, order } => {
                profile.transverse_integral(s, &GaussLegendre::new(*order))
            }
        }
    }

    /// Evaluates at many points, building the quadrature rule once.
    pub fn eval_many(&self, s: &[f64]) -> Result<Vec<f64>> {
        let vals: Vec<f64> = match &self.law {
            StrengthLaw::Function { f } => s.iter().map(|&x| f.eval(x)).collect(),
            StrengthLaw::Transverse { profile, order } => {
                let gl = GaussLegendre::new(*order);
                s.iter().map(|&x| profile.transverse_integral(x, &gl)).collect()
            }
        };
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "strength on segment {} is not finite at s = {}",
                self.segment, s[i]
            )));
        }
        Ok(vals)
    }
}

/// `α(s) = ∫_{-β}^{β} V(s, t) dt` with Gauss–Legendre of the given order.
pub fn effective_alpha(v: &TubeProfile, order: usize) -> Result<StrengthFunction> {
    if order == 0 {
        return Err(Error::Parameter("quadrature order must be positive".into()));
    }
    let gl = GaussLegendre::new(order);
    let probe = v.transverse_integral(0.0, &gl);
    if !probe.is_finite() {
        return Err(Error::Numeric("transverse integral is not finite".into()));
    }
    Ok(StrengthFunction {
        segment: v.segment,
        law: StrengthLaw::Transverse {
            profile: v.clone(),
            order,
        },
    })
}

/// `V(s, t) = α(s)/(2β)` on `|t| < β`.
pub fn potential_from_alpha(alpha: &StrengthFunction, beta: f64) -> Result<TubeProfile> {
    let strength = match &alpha.law {
        StrengthLaw::Function { f } => f.clone(),
        StrengthLaw::Transverse { .. } => {
            return Err(Error::Parameter(
                "inverse construction needs an explicit strength law".into(),
            ))
        }
    };
    TubeProfile::new(alpha.segment, beta, ProfileShape::Uniform { strength })
}

/// `V_ε(x) = Σ_k V_ε^(k)(x)`; at overlap points only the lowest-index
/// segment whose ε-tube contains `x` contributes.
pub fn evaluate_scaled(net: &Network, profiles: &[TubeProfile], eps: f64, x: Vec2) -> f64 {
    let Some(c) = net.locate(x, eps) else {
        return 0.0;
    };
    profiles
        .iter()
        .filter(|p| p.segment == c.segment)
        .map(|p| {
            let q = p.beta / eps;
            if !(c.t.abs() < eps) {
                return 0.0;
            }
            q * p.base(c.s, q * c.t)
        })
        .sum()
}

/// Writes `segment,s,alpha` rows on a uniform grid of `n + 1` points per segment.
pub fn write_strengths_csv(
    path: &Path,
    net: &Network,
    strengths: &[StrengthFunction],
    n: usize,
) -> Result<()> {
    let mut out = String::from("segment,s,alpha\n");
    for a in strengths {
        let l = net.segment(a.segment)?.length();
        let s: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
        for (si, v) in s.iter().zip(a.eval_many(&s)?) {
            out.push_str(&format!("{},{:.17e},{:.17e}\n", a.segment, si, v));
        }
    }
    std::fs::File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BetaOptions, CurveSegment, SegmentKind, Orientation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
    }

    fn random_profile(rng: &mut ChaCha8Rng, beta: f64) -> TubeProfile {
        let shape = match rng.random_range(0..4) {
            0 => ProfileShape::Constant {
                value: rng.random_range(-5.0..5.0),
            },
            1 => ProfileShape::Separable {
                along: ScalarFn::Polynomial {
                    coeffs: vec![rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0)],
                },
                across: ScalarFn::Gaussian {
                    amplitude: rng.random_range(-3.0..3.0),
                    center: 0.0,
                    width: rng.random_range(0.2..1.0) * beta,
                },
            },
            2 => ProfileShape::Separable {
                along: ScalarFn::constant(1.0),
                across: ScalarFn::Polynomial {
                    coeffs: vec![rng.random_range(-2.0..2.0), 0.0, rng.random_range(-2.0..2.0) / (beta * beta)],
                },
            },
            _ => ProfileShape::Tabulated {
                s: vec![0.0, 1.0],
                t: vec![-beta, -0.3 * beta, 0.4 * beta, beta],
                values: (0..2)
                    .map(|_| (0..4).map(|_| rng.random_range(-4.0..1.0)).collect())
                    .collect(),
            },
        };
        TubeProfile::new(0, beta, shape).unwrap()
    }

    #[test]
    fn scale_identity_and_constant_example() {
        let v = TubeProfile::constant(0, 0.2, 3.0).unwrap();
        let same = scale_profile(&v, 0.2, 0.2).unwrap();
        for t in [-0.19, 0.0, 0.1] {
            assert_eq!(same.eval(0.3, t), v.eval(0.3, t));
        }
        let half = scale_profile(&v, 0.1, 0.2).unwrap();
        assert_eq!(half.eval(0.0, 0.05), 6.0);
        assert_eq!(half.eval(0.0, -0.099), 6.0);
        assert_eq!(half.eval(0.0, 0.1), 0.0);
        assert_eq!(half.eval(0.0, 0.15), 0.0);
        assert!(matches!(scale_profile(&v, 0.0, 0.2), Err(Error::Parameter(_))));
        assert!(matches!(scale_profile(&v, 0.3, 0.2), Err(Error::Parameter(_))));
    }

    #[test]
    fn transverse_integral_is_invariant_under_squeezing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let beta = 0.3;
        let gl = GaussLegendre::new(DEFAULT_ORDER);
        for _ in 0..10 {
            let v = random_profile(&mut rng, beta);
            let eps = beta * rng.random_range(0.01..1.0);
            let s = rng.random::<f64>();
            let ve = scale_profile(&v, eps, beta).unwrap();
            let base = adaptive_simpson(&|r| v.eval(s, r), -beta, beta, 1e-14);
            // split at the breakpoints so the oracle sees smooth pieces
            let br = ve.t_breaks();
            let squeezed: f64 = br
                .windows(2)
                .map(|w| adaptive_simpson(&|t| ve.eval(s, t), w[0], w[1], 1e-14))
                .sum();
            assert!((squeezed - base).abs() < 1e-10, "{squeezed} vs {base}");
            let a = effective_alpha(&v, DEFAULT_ORDER).unwrap().eval(s);
            let ae = ve.transverse_integral(s, &gl);
            assert!((a - ae).abs() < 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn sup_norm_scales_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let v = random_profile(&mut rng, 0.25);
            if matches!(v.shape, ProfileShape::Tabulated { .. }) {
                continue;
            }
            let eps = 0.25 / 8.0;
            let ve = scale_profile(&v, eps, 0.25).unwrap();
            let a = v.sup_abs(1.0, 32);
            let b = ve.sup_abs(1.0, 32);
            assert!((b - 8.0 * a).abs() <= 1e-14 * b.max(1.0), "{b} vs {}", 8.0 * a);
        }
    }

    #[test]
    fn effective_alpha_examples() {
        let v = TubeProfile::constant(0, 0.3, -2.0).unwrap();
        let a = effective_alpha(&v, DEFAULT_ORDER).unwrap();
        assert!((a.eval(0.7) + 1.2).abs() < 1e-14);

        let sep = TubeProfile::new(
            0,
            1.0,
            ProfileShape::Separable {
                along: ScalarFn::Polynomial { coeffs: vec![0.0, 1.0] },
                across: ScalarFn::Gaussian {
                    amplitude: 1.0,
                    center: 0.0,
                    width: 1.0,
                },
            },
        )
        .unwrap();
        let a = effective_alpha(&sep, DEFAULT_ORDER).unwrap();
        let oracle = adaptive_simpson(&|t| (-t * t).exp(), -1.0, 1.0, 1e-15);
        assert!((oracle - PI.sqrt() * libm::erf(1.0)).abs() < 1e-13);
        assert!((oracle - 1.493648265624854).abs() < 1e-13);
        for s in [0.0, 0.5, 2.0] {
            assert!((a.eval(s) - s * oracle).abs() < 1e-13);
        }
        assert!(effective_alpha(&sep, 0).is_err());
    }

    #[test]
    fn potential_from_alpha_examples() {
        let v = potential_from_alpha(&StrengthFunction::constant(0, -5.0), 0.2).unwrap();
        assert!((v.eval(0.4, 0.1) + 12.5).abs() < 1e-14);
        assert!((v.eval(0.4, -0.199) + 12.5).abs() < 1e-14);
        assert_eq!(v.eval(0.4, 0.2), 0.0);
        let z = potential_from_alpha(&StrengthFunction::constant(0, 0.0), 0.2).unwrap();
        assert_eq!(z.eval(0.1, 0.0), 0.0);
    }

    #[test]
    fn inverse_construction_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let f = match rng.random_range(0..3) {
                0 => ScalarFn::constant(rng.random_range(-10.0..0.0)),
                1 => ScalarFn::Cosine {
                    offset: rng.random_range(-5.0..-1.0),
                    amplitude: rng.random_range(0.0..1.0),
                    frequency: rng.random_range(0.5..4.0),
                    phase: rng.random_range(0.0..PI),
                },
                _ => ScalarFn::Polynomial {
                    coeffs: (0..4).map(|_| rng.random_range(-3.0..3.0)).collect(),
                },
            };
            let alpha = StrengthFunction::function(0, f);
            let beta = rng.random_range(0.01..1.0);
            let back = effective_alpha(&potential_from_alpha(&alpha, beta).unwrap(), DEFAULT_ORDER).unwrap();
            for i in 0..20 {
                let s = i as f64 * 0.2;
                let (a, b) = (alpha.eval(s), back.eval(s));
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    fn flat_net(beta: f64) -> Network {
        Network::new(
            vec![CurveSegment::line([0.0, 0.0], [1.0, 0.0]).unwrap()],
            BetaOptions::with_cap(beta),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_scaled_examples() {
        let net = flat_net(0.2);
        let p = vec![TubeProfile::constant(0, 0.2, 1.5).unwrap()];
        assert_eq!(evaluate_scaled(&net, &p, 0.05, Vec2::new(0.5, 0.025)), 6.0);
        assert_eq!(evaluate_scaled(&net, &p, 0.05, Vec2::new(0.5, 0.06)), 0.0);
        assert_eq!(evaluate_scaled(&net, &p, 0.05, Vec2::new(2.0, 0.0)), 0.0);
    }

    #[test]
    fn evaluate_scaled_vanishes_outside_eps_tubes() {
        let net = flat_net(0.2);
        let p = vec![TubeProfile::constant(0, 0.2, -3.0).unwrap()];
        let eps = 0.05;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut n = 0;
        while n < 10_000 {
            let x = Vec2::new(rng.random_range(-1.0..2.0), rng.random_range(-1.0..1.0));
            let inside = x.x >= 0.0 && x.x <= 1.0 && x.y.abs() < eps;
            if inside {
                continue;
            }
            assert_eq!(evaluate_scaled(&net, &p, eps, x), 0.0);
            n += 1;
        }
    }

    #[test]
    fn circle_volume_integral_defect_is_linear_in_eps() {
        // ∫ V_ε dx = ∫∫ V_ε (1 - tκ) ds dt; with constant V the κ-term is odd
        // in t and vanishes, so use a one-sided profile to expose it.
        let circ = CurveSegment::new(
            SegmentKind::Arc {
                center: [0.0, 0.0],
                radius: 1.0,
                start_angle: 0.0,
                sweep: 2.0 * PI,
            },
            Orientation::Forward,
        )
        .unwrap();
        let net = Network::new(vec![circ], BetaOptions::with_cap(0.4)).unwrap();
        let beta = net.beta();
        let p = vec![TubeProfile::new(
            0,
            beta,
            ProfileShape::Tabulated {
                s: vec![0.0],
                t: vec![-beta, -1e-12, 0.0, beta],
                values: vec![vec![0.0, 0.0, -2.0, -2.0]],
            },
        )
        .unwrap()];
        let alpha_len = 2.0 * PI * effective_alpha(&p[0], DEFAULT_ORDER).unwrap().eval(0.0);
        // 2D quadrature in polar coordinates over the annulus 1 - ε < r < 1 + ε.
        let gl = GaussLegendre::new(8);
        let defects: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&eps| {
                let mut total = 0.0;
                for k in 0..64 {
                    let (r0, r1) = (1.0 - eps + 2.0 * eps * k as f64 / 64.0, 1.0 - eps + 2.0 * eps * (k + 1) as f64 / 64.0);
                    for (r, wr) in gl.on(r0, r1) {
                        for (th, wt) in gl.on(0.0, 2.0 * PI) {
                            let x = Vec2::new(r * th.cos(), r * th.sin());
                            total += wr * wt * r * evaluate_scaled(&net, &p, eps, x);
                        }
                    }
                }
                (total - alpha_len).abs()
            })
            .collect();
        for w in defects.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 2.0).abs() < 0.4, "defects {defects:?}");
        }
    }

    #[test]
    fn strengths_csv_layout() {
        let net = flat_net(0.2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("alpha.csv");
        write_strengths_csv(&path, &net, &[StrengthFunction::constant(0, -5.0)], 4).unwrap();
        let s = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "segment,s,alpha");
        assert_eq!(lines.len(), 6);
        assert!(lines[3].starts_with("0,5.0"));
    }
}
