//! Planar curve networks, their normal bundles and tubular neighbourhoods.
//!
//! Every segment is parametrized by arc length `s ∈ [0, L]` in its direction
//! of travel. The normal is the left normal of the unit tangent and the
//! signed curvature satisfies `T'(s) = κ(s) ν(s)`, so the tube map
//! `(s, t) ↦ γ(s) + t ν(s)` has Jacobian `1 - t κ(s)`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    /// Counter-clockwise rotation by 90°.
    pub fn rot90(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(p: [f64; 2]) -> Self {
        Vec2::new(p[0], p[1])
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}
impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}
impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}
impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Geometric description of one curve, as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentKind {
    /// Straight segment travelled from `start` to `end`.
    Line { start: [f64; 2], end: [f64; 2] },
    /// Circular arc `center + radius (cos θ, sin θ)`, θ from `start_angle`
    /// over the signed `sweep` (radians, positive = counter-clockwise).
    Arc {
        center: [f64; 2],
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    /// Power branch `y = sign · x^exponent` for `x ∈ [x_start, x_end]`,
    /// travelled with increasing x.
    Cusp {
        exponent: f64,
        sign: f64,
        #[serde(default)]
        x_start: f64,
        x_end: f64,
    },
    /// Natural cubic spline through the control points in chord-length
    /// parametrization, reparametrized by arc length.
    Spline { points: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Forward,
    Reverse,
}

/// Config form of a segment: its kind plus the direction of travel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    #[serde(flatten)]
    pub kind: SegmentKind,
    #[serde(default)]
    pub orientation: Orientation,
}

#[derive(Debug, Clone)]
enum Shape {
    Line {
        start: Vec2,
        dir: Vec2,
    },
    Arc {
        center: Vec2,
        radius: f64,
        start_angle: f64,
        sense: f64,
    },
    Power(PowerBranch),
    Spline(CubicSpline),
}

/// Arc-length parametrized planar C² curve.
#[derive(Debug, Clone)]
pub struct CurveSegment {
    spec: SegmentSpec,
    shape: Shape,
    length: f64,
    reversed: bool,
}

const S_SLACK: f64 = 1e-12;

impl CurveSegment {
    pub fn new(kind: SegmentKind, orientation: Orientation) -> Result<Self> {
        let spec = SegmentSpec {
            kind: kind.clone(),
            orientation,
        };
        let (shape, length) = match kind {
            SegmentKind::Line { start, end } => {
                let (a, b) = (Vec2::from(start), Vec2::from(end));
                let l = a.dist(b);
                if !(l > 0.0) || !l.is_finite() {
                    return Err(Error::Construction("line segment has zero length".into()));
                }
                (
                    Shape::Line {
                        start: a,
                        dir: (1.0 / l) * (b - a),
                    },
                    l,
                )
            }
            SegmentKind::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                if !(radius > 0.0) || sweep == 0.0 || sweep.abs() > 2.0 * PI + 1e-12 {
                    return Err(Error::Construction(format!(
                        "arc needs radius > 0 and 0 < |sweep| <= 2π, got radius {radius}, sweep {sweep}"
                    )));
                }
                (
                    Shape::Arc {
                        center: center.into(),
                        radius,
                        start_angle,
                        sense: sweep.signum(),
                    },
                    radius * sweep.abs(),
                )
            }
            SegmentKind::Cusp {
                exponent,
                sign,
                x_start,
                x_end,
            } => {
                if !(exponent > 1.0) || !(x_start >= 0.0) || !(x_end > x_start) || sign == 0.0 {
                    return Err(Error::Construction(format!(
                        "cusp branch needs exponent > 1 and 0 <= x_start < x_end, got d = {exponent}, [{x_start}, {x_end}]"
                    )));
                }
                let b = PowerBranch::new(exponent, sign.signum(), x_start, x_end);
                let l = b.total_length();
                (Shape::Power(b), l)
            }
            SegmentKind::Spline { points } => {
                let pts: Vec<Vec2> = points.iter().map(|&p| p.into()).collect();
                let sp = CubicSpline::new(&pts)?;
                let l = sp.total_length();
                (Shape::Spline(sp), l)
            }
        };
        Ok(Self {
            spec,
            shape,
            length,
            reversed: orientation == Orientation::Reverse,
        })
    }

    pub fn line(start: [f64; 2], end: [f64; 2]) -> Result<Self> {
        Self::new(SegmentKind::Line { start, end }, Orientation::Forward)
    }

    pub fn from_spec(spec: &SegmentSpec) -> Result<Self> {
        Self::new(spec.kind.clone(), spec.orientation)
    }

    pub fn spec(&self) -> &SegmentSpec {
        &self.spec
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    fn check_s(&self, s: f64) -> Result<f64> {
        let tol = S_SLACK * self.length.max(1.0);
        if !(s >= -tol && s <= self.length + tol) {
            return Err(Error::Domain(format!(
                "arc length {s} outside [0, {}]",
                self.length
            )));
        }
        Ok(s.clamp(0.0, self.length))
    }

    fn forward_s(&self, s: f64) -> f64 {
        if self.reversed {
            self.length - s
        } else {
            s
        }
    }

    /// Position `γ(s)`; `s` is clamped to `[0, L]`.
    pub fn point(&self, s: f64) -> Vec2 {
        let u = self.forward_s(s.clamp(0.0, self.length));
        match &self.shape {
            Shape::Line { start, dir } => *start + u * *dir,
            Shape::Arc {
                center,
                radius,
                start_angle,
                sense,
            } => {
                let th = start_angle + sense * u / radius;
                *center + *radius * Vec2::new(th.cos(), th.sin())
            }
            Shape::Power(b) => b.point(b.x_of_s(u)),
            Shape::Spline(sp) => sp.point(sp.param_of_s(u)),
        }
    }

    /// Unit tangent `γ'(s)` in the direction of travel.
    pub fn tangent(&self, s: f64) -> Vec2 {
        let u = self.forward_s(s.clamp(0.0, self.length));
        let t = match &self.shape {
            Shape::Line { dir, .. } => *dir,
            Shape::Arc {
                radius,
                start_angle,
                sense,
                ..
            } => {
                let th = start_angle + sense * u / radius;
                *sense * Vec2::new(-th.sin(), th.cos())
            }
            Shape::Power(b) => b.tangent(b.x_of_s(u)),
            Shape::Spline(sp) => sp.tangent(sp.param_of_s(u)),
        };
        if self.reversed {
            -t
        } else {
            t
        }
    }

    /// Left unit normal `ν(s) = rot90(γ'(s))`.
    pub fn normal(&self, s: f64) -> Vec2 {
        self.tangent(s).rot90()
    }

    /// Signed curvature with respect to the left normal.
    pub fn curvature(&self, s: f64) -> Result<f64> {
        let s = self.check_s(s)?;
        Ok(self.curvature_unchecked(s))
    }

    fn curvature_unchecked(&self, s: f64) -> f64 {
        let u = self.forward_s(s);
        let k = match &self.shape {
            Shape::Line { .. } => 0.0,
            Shape::Arc { radius, sense, .. } => sense / radius,
            Shape::Power(b) => b.curvature(b.x_of_s(u)),
            Shape::Spline(_) => return self.fd_curvature(s),
        };
        if self.reversed {
            -k
        } else {
            k
        }
    }

    /// Curvature from centred differences of the normal, `κ = -ν'·T`.
    fn fd_curvature(&self, s: f64) -> f64 {
        let d = 1e-4 * self.length;
        let (a, b) = if s - d < 0.0 {
            (0.0, 2.0 * d)
        } else if s + d > self.length {
            (self.length - 2.0 * d, self.length)
        } else {
            (s - d, s + d)
        };
        let dn = (1.0 / (b - a)) * (self.normal(b) - self.normal(a));
        -dn.dot(self.tangent(0.5 * (a + b)))
    }

    /// Offset point `γ(s) + t ν(s)` without any tube check.
    pub fn offset(&self, s: f64, t: f64) -> Vec2 {
        self.point(s) + t * self.normal(s)
    }

    pub fn start_point(&self) -> Vec2 {
        self.point(0.0)
    }

    pub fn end_point(&self) -> Vec2 {
        self.point(self.length)
    }

    /// Largest |κ| over `n` samples; power branches with exponent below two
    /// skip the collar `x < collar` where the curvature is unbounded.
    pub fn curvature_sup(&self, n: usize, collar: f64) -> f64 {
        match &self.shape {
            Shape::Line { .. } => 0.0,
            Shape::Arc { radius, .. } => 1.0 / radius,
            Shape::Power(b) => {
                let x0 = if b.exponent < 2.0 {
                    b.x_start.max(collar)
                } else {
                    b.x_start
                };
                if x0 >= b.x_end {
                    return 0.0;
                }
                (0..=n)
                    .map(|i| b.curvature(x0 + (b.x_end - x0) * i as f64 / n as f64).abs())
                    .fold(0.0, f64::max)
            }
            Shape::Spline(_) => (0..=n)
                .map(|i| self.curvature_unchecked(self.length * i as f64 / n as f64).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Equispaced (in arc length) sample points, endpoints included.
    pub fn samples(&self, n: usize) -> Vec<Vec2> {
        (0..=n)
            .map(|i| self.point(self.length * i as f64 / n as f64))
            .collect()
    }

    /// Closest-point projection onto the segment. Returns `(s, t)` with
    /// `x = γ(s) + t ν(s)` when the foot point is interior (or an endpoint
    /// with normal offset), i.e. when `x` lies in the segment's infinite
    /// normal strip; `None` otherwise.
    pub fn project(&self, x: Vec2) -> Option<(f64, f64)> {
        let (u, t) = match &self.shape {
            Shape::Line { start, dir } => {
                let d = x - *start;
                let u = d.dot(*dir);
                (u, d.dot(dir.rot90()))
            }
            Shape::Arc {
                center,
                radius,
                start_angle,
                sense,
            } => {
                let d = x - *center;
                let r = d.norm();
                if r == 0.0 {
                    return None;
                }
                let ang = d.y.atan2(d.x);
                let mut delta = sense * (ang - start_angle);
                delta = delta.rem_euclid(2.0 * PI);
                let mut u = radius * delta;
                // Points just before the start angle wrap to ~2πR.
                if u > self.length && (2.0 * PI * radius - u) < 1e-12 * radius.max(1.0) {
                    u = 0.0;
                }
                // Left normal is inward for CCW travel.
                (u, sense * (radius - r))
            }
            Shape::Power(_) | Shape::Spline(_) => return self.project_newton(x),
        };
        let tol = 1e-12 * self.length.max(1.0);
        if u < -tol || u > self.length + tol {
            return None;
        }
        let u = u.clamp(0.0, self.length);
        Some(if self.reversed {
            (self.length - u, -t)
        } else {
            (u, t)
        })
    }

    fn project_newton(&self, x: Vec2) -> Option<(f64, f64)> {
        const COARSE: usize = 128;
        let l = self.length;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=COARSE {
            let s = l * i as f64 / COARSE as f64;
            let d = x.dist(self.point(s));
            if d < best.0 {
                best = (d, s);
            }
        }
        let mut s = best.1;
        for _ in 0..60 {
            let p = self.point(s);
            let tan = self.tangent(s);
            let nrm = tan.rot90();
            let g = (x - p).dot(tan);
            let t = (x - p).dot(nrm);
            let dg = -(1.0 - t * self.curvature_unchecked(s));
            if dg.abs() < 1e-14 {
                break;
            }
            let mut s_new = s - g / dg;
            s_new = s_new.clamp(0.0, l);
            let step = (s_new - s).abs();
            s = s_new;
            if step < 1e-15 * l.max(1.0) {
                break;
            }
        }
        let p = self.point(s);
        let tan = self.tangent(s);
        let g = (x - p).dot(tan);
        if g.abs() > 1e-10 * l.max(1.0) {
            return None;
        }
        Some((s, (x - p).dot(tan.rot90())))
    }

    /// Axis-aligned bounding box `(min, max)` of the curve.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let pts = self.samples(256);
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        // Chords between samples sag by at most L²κ/(8·256²); pad generously.
        let pad = 1e-3 * self.length;
        (lo - Vec2::new(pad, pad), hi + Vec2::new(pad, pad))
    }
}

/// `y = sign · x^d`, arc length tabulated with graded Gauss–Legendre panels.
#[derive(Debug, Clone)]
struct PowerBranch {
    exponent: f64,
    sign: f64,
    x_start: f64,
    x_end: f64,
    /// u-grid with x = x_start + (x_end - x_start) u²; cumulative arc length.
    cum: Vec<f64>,
}

const POWER_PANELS: usize = 512;

impl PowerBranch {
    fn new(exponent: f64, sign: f64, x_start: f64, x_end: f64) -> Self {
        let mut b = Self {
            exponent,
            sign,
            x_start,
            x_end,
            cum: Vec::new(),
        };
        let gl = GaussLegendre::new(10);
        let mut cum = vec![0.0; POWER_PANELS + 1];
        for i in 0..POWER_PANELS {
            let u0 = i as f64 / POWER_PANELS as f64;
            let u1 = (i + 1) as f64 / POWER_PANELS as f64;
            cum[i + 1] = cum[i] + b.length_u(&gl, u0, u1);
        }
        b.cum = cum;
        b
    }

    fn x_of_u(&self, u: f64) -> f64 {
        self.x_start + (self.x_end - self.x_start) * u * u
    }

    fn u_of_x(&self, x: f64) -> f64 {
        ((x - self.x_start) / (self.x_end - self.x_start)).max(0.0).sqrt()
    }

    fn speed_x(&self, x: f64) -> f64 {
        let d1 = self.exponent * x.powf(self.exponent - 1.0);
        (1.0 + d1 * d1).sqrt()
    }

    fn length_u(&self, gl: &GaussLegendre, u0: f64, u1: f64) -> f64 {
        let w = self.x_end - self.x_start;
        gl.integrate(u0, u1, |u| self.speed_x(self.x_of_u(u)) * 2.0 * w * u)
    }

    fn total_length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn s_of_x(&self, x: f64) -> f64 {
        let u = self.u_of_x(x).min(1.0);
        let i = ((u * POWER_PANELS as f64) as usize).min(POWER_PANELS - 1);
        let u0 = i as f64 / POWER_PANELS as f64;
        let gl = GaussLegendre::new(10);
        self.cum[i] + self.length_u(&gl, u0, u)
    }

    fn x_of_s(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.total_length());
        let i = self.cum.partition_point(|&c| c <= s).clamp(1, POWER_PANELS) - 1;
        let (c0, c1) = (self.cum[i], self.cum[i + 1]);
        let frac = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        let u = (i as f64 + frac) / POWER_PANELS as f64;
        let (xa, xb) = (self.x_of_u(i as f64 / POWER_PANELS as f64), self.x_of_u((i + 1) as f64 / POWER_PANELS as f64));
        let mut x = self.x_of_u(u);
        for _ in 0..50 {
            let f = self.s_of_x(x) - s;
            let dx = f / self.speed_x(x);
            x = (x - dx).clamp(xa, xb);
            if dx.abs() < 1e-16 * self.x_end.max(1.0) {
                break;
            }
        }
        x
    }

    fn point(&self, x: f64) -> Vec2 {
        Vec2::new(x, self.sign * x.powf(self.exponent))
    }

    fn tangent(&self, x: f64) -> Vec2 {
        let d1 = self.sign * self.exponent * x.powf(self.exponent - 1.0);
        let n = (1.0 + d1 * d1).sqrt();
        Vec2::new(1.0 / n, d1 / n)
    }

    fn curvature(&self, x: f64) -> f64 {
        let d = self.exponent;
        let d1 = d * x.powf(d - 1.0);
        let d2 = d * (d - 1.0) * x.powf(d - 2.0);
        self.sign * d2 / (1.0 + d1 * d1).powf(1.5)
    }
}

/// Natural cubic spline per coordinate in chord-length parameter.
#[derive(Debug, Clone)]
struct CubicSpline {
    knots: Vec<f64>,
    pts: Vec<Vec2>,
    m: Vec<Vec2>,
    /// Arc length at each knot.
    cum: Vec<f64>,
}

const SPLINE_SUBPANELS: usize = 4;

impl CubicSpline {
    fn new(pts: &[Vec2]) -> Result<Self> {
        if pts.len() < 3 {
            return Err(Error::Construction(
                "spline needs at least three control points".into(),
            ));
        }
        let mut knots = vec![0.0];
        for w in pts.windows(2) {
            let d = w[0].dist(w[1]);
            if !(d > 0.0) {
                return Err(Error::Construction("repeated spline control point".into()));
            }
            knots.push(knots.last().unwrap() + d);
        }
        let n = pts.len();
        // Natural end conditions: second derivatives vanish at both ends.
        let mut m = vec![Vec2::default(); n];
        if n > 2 {
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![Vec2::default(); k];
            let mut sub = vec![0.0; k];
            for i in 1..n - 1 {
                let h0 = knots[i] - knots[i - 1];
                let h1 = knots[i + 1] - knots[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                sub[i - 1] = h0;
                rhs[i - 1] = 6.0 * ((1.0 / h1) * (pts[i + 1] - pts[i]) - (1.0 / h0) * (pts[i] - pts[i - 1]));
            }
            // Thomas algorithm; super-diagonal entry of row r is h1 of row r = sub of row r+1.
            let mut c = vec![0.0; k];
            let mut d = rhs.clone();
            for r in 0..k {
                let sup = if r + 1 < k { sub[r + 1] } else { 0.0 };
                let (a, denom) = if r == 0 {
                    (0.0, diag[0])
                } else {
                    (sub[r], diag[r] - sub[r] * c[r - 1])
                };
                c[r] = sup / denom;
                d[r] = if r == 0 {
                    (1.0 / denom) * d[0]
                } else {
                    (1.0 / denom) * (d[r] - a * d[r - 1])
                };
            }
            for r in (0..k).rev() {
                let next = if r + 1 < k { m[r + 2] } else { Vec2::default() };
                m[r + 1] = d[r] - c[r] * next;
            }
        }
        let mut sp = Self {
            knots,
            pts: pts.to_vec(),
            m,
            cum: Vec::new(),
        };
        let gl = GaussLegendre::new(10);
        let mut cum = vec![0.0];
        for i in 0..n - 1 {
            let (a, b) = (sp.knots[i], sp.knots[i + 1]);
            let mut acc = 0.0;
            for j in 0..SPLINE_SUBPANELS {
                let u0 = a + (b - a) * j as f64 / SPLINE_SUBPANELS as f64;
                let u1 = a + (b - a) * (j + 1) as f64 / SPLINE_SUBPANELS as f64;
                acc += gl.integrate(u0, u1, |u| sp.deriv(u).norm());
            }
            cum.push(cum[i] + acc);
        }
        sp.cum = cum;
        Ok(sp)
    }

    fn interval(&self, u: f64) -> usize {
        let n = self.knots.len();
        self.knots.partition_point(|&k| k <= u).clamp(1, n - 1) - 1
    }

    fn point(&self, u: f64) -> Vec2 {
        let i = self.interval(u);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - u) / h;
        let b = (u - self.knots[i]) / h;
        a * self.pts[i]
            + b * self.pts[i + 1]
            + (h * h / 6.0) * ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1])
    }

    fn deriv(&self, u: f64) -> Vec2 {
        let i = self.interval(u);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - u) / h;
        let b = (u - self.knots[i]) / h;
        (1.0 / h) * (self.pts[i + 1] - self.pts[i])
            + (h / 6.0) * ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1])
    }

    fn tangent(&self, u: f64) -> Vec2 {
        let d = self.deriv(u);
        (1.0 / d.norm()) * d
    }

    fn total_length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn s_of_param(&self, u: f64) -> f64 {
        let i = self.interval(u);
        let gl = GaussLegendre::new(10);
        let a = self.knots[i];
        let pieces = SPLINE_SUBPANELS;
        let mut acc = self.cum[i];
        for j in 0..pieces {
            let u0 = a + (u - a) * j as f64 / pieces as f64;
            let u1 = a + (u - a) * (j + 1) as f64 / pieces as f64;
            acc += gl.integrate(u0, u1, |v| self.deriv(v).norm());
        }
        acc
    }

    fn param_of_s(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.total_length());
        let n = self.knots.len();
        let i = self.cum.partition_point(|&c| c <= s).clamp(1, n - 1) - 1;
        let (c0, c1) = (self.cum[i], self.cum[i + 1]);
        let (ka, kb) = (self.knots[i], self.knots[i + 1]);
        let mut u = ka + (kb - ka) * if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        for _ in 0..50 {
            let f = self.s_of_param(u) - s;
            let du = f / self.deriv(u).norm();
            u = (u - du).clamp(ka, kb);
            if du.abs() < 1e-15 * self.knots[n - 1] {
                break;
            }
        }
        u
    }
}

/// Knobs of the tube half-width rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaOptions {
    pub beta_cap: f64,
    #[serde(default = "default_collar")]
    pub cusp_collar: f64,
    #[serde(default = "default_beta_samples")]
    pub samples_per_segment: usize,
}

fn default_collar() -> f64 {
    1e-3
}

fn default_beta_samples() -> usize {
    2048
}

impl BetaOptions {
    pub fn with_cap(beta_cap: f64) -> Self {
        Self {
            beta_cap,
            cusp_collar: default_collar(),
            samples_per_segment: default_beta_samples(),
        }
    }
}

const ENDPOINT_TOUCH: f64 = 1e-9;

fn share_endpoint(a: &CurveSegment, b: &CurveSegment) -> bool {
    let ea = [a.start_point(), a.end_point()];
    let eb = [b.start_point(), b.end_point()];
    ea.iter()
        .any(|p| eb.iter().any(|q| p.dist(*q) < ENDPOINT_TOUCH * (1.0 + p.norm())))
}

/// Tube half-width `β = min(cap, 1/(2 sup|κ|), d_min/2)` where `d_min` is the
/// smallest sampled distance between segments that do not share an endpoint.
pub fn compute_beta(segments: &[CurveSegment], opts: &BetaOptions) -> Result<f64> {
    if segments.is_empty() {
        return Err(Error::Construction("network has no segments".into()));
    }
    if !(opts.beta_cap > 0.0) {
        return Err(Error::Parameter(format!("beta_cap must be positive, got {}", opts.beta_cap)));
    }
    let n = opts.samples_per_segment.max(8);
    let kappa = segments
        .iter()
        .map(|s| s.curvature_sup(n, opts.cusp_collar))
        .fold(0.0, f64::max);
    let mut beta = opts.beta_cap;
    if kappa > 0.0 {
        beta = beta.min(0.5 / kappa);
    }
    let samples: Vec<Vec<Vec2>> = segments.iter().map(|s| s.samples(n)).collect();
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            if share_endpoint(&segments[i], &segments[j]) {
                continue;
            }
            let d = samples[i]
                .iter()
                .flat_map(|p| samples[j].iter().map(move |q| p.dist(*q)))
                .fold(f64::INFINITY, f64::min);
            if d < 1e-12 {
                return Err(Error::Construction(format!(
                    "segments {i} and {j} overlap or cross (sampled distance {d:e})"
                )));
            }
            beta = beta.min(0.5 * d);
        }
    }
    Ok(beta)
}

/// Ordered list of curve segments with a certified tube half-width.
#[derive(Debug, Clone)]
pub struct Network {
    segments: Vec<CurveSegment>,
    beta: f64,
    options: BetaOptions,
    boxes: Vec<(Vec2, Vec2)>,
}

/// Location of a point in tube coordinates of segment `segment`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeCoords {
    pub segment: usize,
    pub s: f64,
    pub t: f64,
}

impl Network {
    pub fn new(segments: Vec<CurveSegment>, options: BetaOptions) -> Result<Self> {
        let beta = compute_beta(&segments, &options)?;
        let boxes = segments.iter().map(|s| s.bounding_box()).collect();
        Ok(Self {
            segments,
            beta,
            options,
            boxes,
        })
    }

    pub fn from_specs(specs: &[SegmentSpec], options: BetaOptions) -> Result<Self> {
        let segs = specs
            .iter()
            .map(CurveSegment::from_spec)
            .collect::<Result<Vec<_>>>()?;
        Self::new(segs, options)
    }

    pub fn segments(&self) -> &[CurveSegment] {
        &self.segments
    }

    pub fn segment(&self, k: usize) -> Result<&CurveSegment> {
        self.segments
            .get(k)
            .ok_or_else(|| Error::Parameter(format!("segment index {k} out of range")))
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta_cap(&self) -> f64 {
        self.options.beta_cap
    }

    pub fn options(&self) -> &BetaOptions {
        &self.options
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length()).sum()
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(t.abs() < self.beta) {
            return Err(Error::TubeViolation { t: t.abs(), beta: self.beta });
        }
        Ok(())
    }

    /// `ι_k(s, t) = γ_k(s) + t ν_k(s)` for `|t| < β`.
    pub fn tube_map(&self, k: usize, s: f64, t: f64) -> Result<Vec2> {
        self.check_t(t)?;
        let seg = self.segment(k)?;
        let s = seg.check_s(s)?;
        Ok(seg.offset(s, t))
    }

    /// `det(I - tW) = 1 - t κ_k(s)`.
    pub fn tube_jacobian(&self, k: usize, s: f64, t: f64) -> Result<f64> {
        self.check_t(t)?;
        let seg = self.segment(k)?;
        Ok(1.0 - t * seg.curvature(s)?)
    }

    /// First segment (lowest index) whose open tube of half-width `width`
    /// contains `x`.
    pub fn locate(&self, x: Vec2, width: f64) -> Option<TubeCoords> {
        for (k, seg) in self.segments.iter().enumerate() {
            let (lo, hi) = self.boxes[k];
            if x.x < lo.x - width || x.y < lo.y - width || x.x > hi.x + width || x.y > hi.y + width {
                continue;
            }
            if let Some((s, t)) = seg.project(x) {
                if t.abs() < width {
                    return Some(TubeCoords { segment: k, s, t });
                }
            }
        }
        None
    }

    /// Inverse of the tube map on `⋃_k Ω_β^(k)`.
    pub fn inverse_tube_map(&self, x: Vec2) -> Option<TubeCoords> {
        self.locate(x, self.beta)
    }

    /// `(min, max)` corners of the union of the segments' bounding boxes.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        self.boxes.iter().fold(
            (
                Vec2::new(f64::INFINITY, f64::INFINITY),
                Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            ),
            |(lo, hi), (a, b)| {
                (
                    Vec2::new(lo.x.min(a.x), lo.y.min(a.y)),
                    Vec2::new(hi.x.max(b.x), hi.y.max(b.y)),
                )
            },
        )
    }
}

/// Star graph with `angles.len()` rays from the origin; ray `j` points at
/// angle `rotation + Σ_{i<j} angles[i]`.
pub fn star_graph(edge_length: f64, angles: &[f64], rotation: f64) -> Result<Vec<CurveSegment>> {
    let mut theta = rotation;
    angles
        .iter()
        .map(|a| {
            let end = Vec2::new(theta.cos(), theta.sin());
            theta += a;
            CurveSegment::line([0.0, 0.0], [edge_length * end.x, edge_length * end.y])
        })
        .collect()
}

/// Closed curve with a cusp at the origin: the branches `y = ±x^d` on
/// `[0, x_join]` joined by a circular arc tangent to both branches.
///
/// Travel: upper branch outward, arc clockwise around the right, lower
/// branch back to the origin.
pub fn cusp_curve(exponent: f64, x_join: f64) -> Result<Vec<CurveSegment>> {
    if !(exponent > 1.0) || !(x_join > 0.0) {
        return Err(Error::Construction(format!(
            "cusp curve needs d > 1 and x_join > 0, got d = {exponent}, x_join = {x_join}"
        )));
    }
    let y = x_join.powf(exponent);
    let slope = exponent * x_join.powf(exponent - 1.0);
    // Normal through (X, X^d) pointing right/down hits the x-axis at the centre.
    let center_x = x_join + slope * y;
    let radius = y * (1.0 + slope * slope).sqrt();
    let start_angle = y.atan2(x_join - center_x);
    let upper = CurveSegment::new(
        SegmentKind::Cusp {
            exponent,
            sign: 1.0,
            x_start: 0.0,
            x_end: x_join,
        },
        Orientation::Forward,
    )?;
    let arc = CurveSegment::new(
        SegmentKind::Arc {
            center: [center_x, 0.0],
            radius,
            start_angle,
            sweep: -2.0 * start_angle,
        },
        Orientation::Forward,
    )?;
    let lower = CurveSegment::new(
        SegmentKind::Cusp {
            exponent,
            sign: -1.0,
            x_start: 0.0,
            x_end: x_join,
        },
        Orientation::Reverse,
    )?;
    Ok(vec![upper, arc, lower])
}
