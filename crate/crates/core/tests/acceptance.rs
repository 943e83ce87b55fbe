//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use delta_squeeze::fem::{
    assemble_delta_term, assemble_magnetic_stiffness, assemble_mass, build_mesh, check_mass_spd,
    BoxDomain, VectorPotential,
};
use delta_squeeze::geometry::{cusp_curve, star_graph, BetaOptions, CurveSegment, Network};
use delta_squeeze::lab::{
    run_convergence, run_cusp, run_cusp_b, run_oracle1d, run_spectrum, run_stargraph, run_wedge,
    run_wedge_f, straight_segment, ConvergenceConfig, Coupling, CuspBConfig, CuspConfig,
    CuspOracleConfig, EpsGrid, MeshConfig, Oracle1dConfig, ProfileSpec, Report, RunOptions,
    SolverConfig, SpectrumConfig, StarGraphConfig, WedgeConfig, WedgeFConfig,
};
use delta_squeeze::oracles::Oracle1dOptions;
use delta_squeeze::potentials::{
    effective_alpha, potential_from_alpha, scale_profile, ProfileShape, ScalarFn, StrengthFunction,
    TubeProfile,
};
use delta_squeeze::quadrature::GaussLegendre;
use delta_squeeze::spectral::fit_rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn field(r: &Report, path: &[&str]) -> Value {
    let mut v = &r.results;
    for p in path {
        v = &v[*p];
    }
    v.clone()
}

fn f(v: Value) -> f64 {
    v.as_f64().expect("number in report")
}

fn square(x0: f64, x1: f64, h: f64) -> MeshConfig {
    MeshConfig {
        domain: BoxDomain::new(x0, x1, x0, x1),
        h,
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let cfg = SpectrumConfig {
        network: None,
        coupling: None,
        field: None,
        background: None,
        eps: None,
        mesh: square(0.0, 1.0, 1.0 / 64.0),
        k: 1,
        solver: SolverConfig::default(),
        seed: 1,
    };
    let r = run_spectrum(&cfg, &RunOptions::default()).unwrap();
    let l = f(field(&r, &["eigenvalues"])[0].clone());
    let exact = 2.0 * PI * PI;
    let rel = (l - exact).abs() / exact;
    let el = t.elapsed();
    outcome(
        rel < 0.01 && within(el, 30.0),
        format!("λ₁ = {l:.6}, 2π² = {exact:.6}, rel err {rel:.2e} (< 1e-2), {:.1} s (< 30 s)", el.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let beta = 1.0 / 64.0;
    let cfg = Oracle1dConfig {
        shape: ProfileShape::Constant {
            value: -5.0 / (2.0 * beta),
        },
        beta,
        // β/2, β/4, …, β/64
        eps: EpsGrid::Geometric {
            max: beta / 2.0,
            count: 6,
            ratio: 0.5,
        },
        options: Oracle1dOptions::default(),
    };
    let r = run_oracle1d(&cfg, &RunOptions::default()).unwrap();
    let slope = f(field(&r, &["fit", "slope"]));
    let lam = field(&r, &["lambda"]);
    let last = f(lam.as_array().unwrap().last().unwrap().clone());
    let gap = (last + 6.25).abs();
    let el = t.elapsed();
    outcome(
        slope >= 0.9 && gap < 1e-2 && within(el, 5.0),
        format!(
            "slope {slope:.3} (>= 0.9), |λ(β/64) + 6.25| = {gap:.2e} (< 1e-2), {:.2} s (< 5 s)",
            el.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let cfg = ConvergenceConfig {
        network: straight_segment(2.0, 0.5),
        coupling: Coupling::Profiles {
            profiles: vec![ProfileSpec {
                segment: 0,
                // α = 2β·(-5) = -5
                shape: ProfileShape::Constant { value: -5.0 },
            }],
        },
        field: None,
        background: None,
        eps: EpsGrid::List(vec![0.4, 0.28, 0.2, 0.14, 0.1]),
        mesh: square(-3.0, 3.0, 1.0 / 64.0),
        solver: SolverConfig::default(),
        shift: None,
        refinement_check: true,
        seed: 1,
    };
    let r = run_convergence(&cfg, &RunOptions::default()).unwrap();
    let norms: Vec<f64> = field(&r, &["report", "res_norm"])
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let decreasing = norms.windows(2).all(|w| w[1] < w[0]);
    let slope = f(field(&r, &["report", "res_fit", "slope"]));
    let gap_slope = f(field(&r, &["report", "gap_fit", "slope"]));
    let refine = f(field(&r, &["refinement", "relative_change"]));
    let el = t.elapsed();
    outcome(
        decreasing && (0.35..=0.8).contains(&slope) && gap_slope >= 0.45 && refine < 0.25 && within(el, 600.0),
        format!(
            "norms strictly decreasing: {decreasing}, res slope {slope:.3} (in [0.35, 0.8]), gap slope {gap_slope:.3} (>= 0.45), h/2 change {refine:.1e} (< 0.25), {:.0} s (< 600 s)",
            el.as_secs_f64()
        ),
    )
}

fn random_strength(rng: &mut ChaCha8Rng, segment: usize) -> StrengthFunction {
    let f = if rng.random_bool(0.5) {
        ScalarFn::Polynomial {
            coeffs: (0..rng.random_range(1..5)).map(|_| rng.random_range(-8.0..8.0)).collect(),
        }
    } else {
        ScalarFn::Cosine {
            offset: rng.random_range(-8.0..-1.0),
            amplitude: rng.random_range(-1.0..1.0),
            frequency: rng.random_range(0.1..6.0),
            phase: rng.random_range(0.0..2.0 * PI),
        }
    };
    StrengthFunction::function(segment, f)
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let a = random_strength(&mut rng, 0);
        let beta = rng.random_range(0.01..0.5);
        let v = potential_from_alpha(&a, beta).unwrap();
        let back = effective_alpha(&v, 16).unwrap();
        let s: Vec<f64> = (0..=200).map(|j| 3.0 * j as f64 / 200.0).collect();
        for (x, y) in a.eval_many(&s).unwrap().iter().zip(back.eval_many(&s).unwrap()) {
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
        assert!(worst.is_finite(), "strength {i}");
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-12 && within(el, 1.0),
        format!("10 random strengths, max relative error {worst:.1e} (<= 1e-12), {:.3} s (< 1 s)", el.as_secs_f64()),
    )
}

fn criterion_5() -> (Outcome, Option<(f64, f64)>) {
    let t = Instant::now();
    let cfg = StarGraphConfig {
        edges: 3,
        edge_length: 1.0,
        angles: vec![150f64.to_radians(), 150f64.to_radians(), 60f64.to_radians()],
        alpha: -5.0,
        eps: None,
        mesh: square(-2.5, 2.5, 1.0 / 64.0),
        symmetric_comparison: true,
        rotation: 17f64.to_radians(),
        refine: true,
        beta_cap: 0.25,
        solver: SolverConfig::default(),
        seed: 1,
    };
    let r = run_stargraph(&cfg, &RunOptions::default()).unwrap();
    let sigma = f(field(&r, &["graphs"])[0]["lambda_h2"].clone());
    let gamma = f(field(&r, &["graphs"])[1]["lambda_h2"].clone());
    let gap = f(field(&r, &["gap"]));
    let rot = f(field(&r, &["rotation_gap"]));
    let err = f(field(&r, &["error_estimate"]));
    let el = t.elapsed();
    (
        outcome(
            sigma < gamma && gap > 5.0 * err && rot.abs() <= err && within(el, 900.0),
            format!(
                "λ(Σ) = {sigma:.4} < λ(Γ) = {gamma:.4}, gap {gap:.4} > 5×err = {:.4}, |rotated gap| {:.4} <= err, {:.0} s (< 900 s)",
                5.0 * err,
                rot.abs(),
                el.as_secs_f64()
            ),
        ),
        Some((rot, err)),
    )
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let r = run_cusp_b(
        &CuspBConfig {
            d: 2.0,
            k: 3,
            length: 8.0,
            cells: 2000,
        },
        &RunOptions::default(),
    )
    .unwrap();
    let e: Vec<f64> = field(&r, &["spectrum", "eigenvalues"])
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    // odd levels of the harmonic oscillator -f'' + x² f
    let err = e
        .iter()
        .zip([3.0, 7.0, 11.0])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let el = t.elapsed();
    outcome(
        err < 1e-3 && within(el, 5.0),
        format!("E = {e:.8?}, max |E - {{3, 7, 11}}| = {err:.1e} (< 1e-3), {:.2} s (< 5 s)", el.as_secs_f64()),
    )
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let cfg = CuspConfig {
        d: 2.0,
        alphas: vec![-6.0, -10.0, -14.0],
        x_join: 0.5,
        eps: None,
        mesh: MeshConfig {
            domain: BoxDomain::new(-2.0, 3.0, -2.5, 2.5),
            h: 1.0 / 128.0,
        },
        beta_cap: 0.25,
        oracle: CuspOracleConfig::default(),
        solver: SolverConfig::default(),
        seed: 1,
    };
    let r = run_cusp(&cfg, &RunOptions::default()).unwrap();
    let target = f(field(&r, &["target"]));
    let dev: Vec<f64> = field(&r, &["points"])
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["deviation"].as_f64().unwrap())
        .collect();
    let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
    let el = t.elapsed();
    outcome(
        decreasing && (target - 3.0 * 2f64.sqrt()).abs() < 1e-6 && within(el, 1800.0),
        format!(
            "target {target:.4}, |r(α) - target| = {dev:.4?} strictly decreasing: {decreasing}, {:.0} s (< 1800 s)",
            el.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let opts = RunOptions::default();
    let neg = run_wedge_f(
        &WedgeFConfig {
            phi: PI / 3.0,
            alpha: -1e-6,
            theta: 1.5,
        },
        &opts,
    )
    .unwrap();
    let pos = run_wedge_f(
        &WedgeFConfig {
            phi: PI / 3.0,
            alpha: -1e-6,
            theta: 0.5,
        },
        &opts,
    )
    .unwrap();
    let vn = f(field(&neg, &["infimum", "value"]));
    let vp = f(field(&pos, &["infimum", "value"]));
    let fp = field(&pos, &["infimum", "negative"]).as_bool().unwrap();
    let fneg = field(&neg, &["infimum", "negative"]).as_bool().unwrap();
    let wedge = run_wedge(
        &WedgeConfig {
            phi: PI / 3.0,
            alpha: -1.0,
            theta: Some(1.5),
            b: 1.0,
            ray_length: 1.8,
            mesh: square(-2.0, 2.0, 1.0 / 32.0),
            eps: None,
            k: 1,
            beta_cap: 0.25,
            solver: SolverConfig::default(),
            seed: 1,
        },
        &opts,
    )
    .unwrap();
    let herm = f(field(&wedge, &["hermitian_residual"]));
    let el = t.elapsed();
    // calculus oracle: min_x 1 + x⁴/4 - Θx² = 1 - Θ²
    outcome(
        (vn + 1.25).abs() <= 1e-4 && fneg && (vp - 0.75).abs() <= 1e-4 && !fp && herm <= 1e-12 && within(el, 60.0),
        format!(
            "inf F(Θ=1.5) = {vn:.6} (flag {fneg}), inf F(Θ=0.5) = {vp:.6} (flag {fp}), wedge Hermitian residual {herm:.1e} (<= 1e-12), {:.1} s (< 60 s)",
            el.as_secs_f64()
        ),
    )
}

fn hermiticity_and_mass() -> (bool, String) {
    let mesh = build_mesh(BoxDomain::square(1.5), 1.0 / 16.0).unwrap();
    let net = Network::new(
        star_graph(1.0, &[2.0, 2.5, 2.0 * PI - 4.5], 0.3).unwrap(),
        BetaOptions::with_cap(0.2),
    )
    .unwrap();
    let d = assemble_delta_term(
        &mesh,
        &net,
        &(0..3).map(|k| StrengthFunction::constant(k, -2.0 - k as f64)).collect::<Vec<_>>(),
    )
    .unwrap();
    let a = VectorPotential {
        b: 1.3,
        gauge_xy: 0.7,
    };
    let s = assemble_magnetic_stiffness(&mesh, |p| a.eval(p))
        .add_scaled(&d, num_complex::Complex64::new(1.0, 0.0))
        .unwrap();
    let herm = s.hermitian_residual();
    let mass = check_mass_spd(&assemble_mass(&mesh)).is_ok();
    (herm <= 1e-12 && mass, format!("hermitian residual {herm:.1e}, mass SPD {mass}"))
}

fn scaling_invariance() -> (bool, String) {
    let beta = 0.3;
    let v = TubeProfile::new(
        0,
        beta,
        ProfileShape::Separable {
            along: ScalarFn::Constant { value: -2.0 },
            across: ScalarFn::Gaussian {
                amplitude: 1.0,
                center: 0.05,
                width: 0.1,
            },
        },
    )
    .unwrap();
    let gl = GaussLegendre::new(16);
    let base = v.transverse_integral(0.4, &gl);
    let worst = [0.3, 0.1, 0.03, 1e-3]
        .iter()
        .map(|&e| (scale_profile(&v, e, beta).unwrap().transverse_integral(0.4, &gl) - base).abs())
        .fold(0.0, f64::max);
    (worst < 1e-12, format!("transverse integral drift {worst:.1e}"))
}

fn jacobian_bounds() -> (bool, String) {
    let mut worst_lo: f64 = f64::INFINITY;
    let mut worst_hi: f64 = 0.0;
    let nets = [
        Network::new(cusp_curve(2.0, 0.5).unwrap(), BetaOptions::with_cap(0.25)).unwrap(),
        Network::new(
            vec![CurveSegment::new(
                delta_squeeze::geometry::SegmentKind::Arc {
                    center: [0.0, 0.0],
                    radius: 0.7,
                    start_angle: 0.0,
                    sweep: 4.0,
                },
                Default::default(),
            )
            .unwrap()],
            BetaOptions::with_cap(1.0),
        )
        .unwrap(),
    ];
    for net in &nets {
        let b = net.beta();
        for (k, seg) in net.segments().iter().enumerate() {
            let l = seg.length();
            for i in 1..200 {
                let s = l * i as f64 / 200.0;
                // stay off the cusp collar where β was certified
                if seg.curvature(s).unwrap().abs() > 0.5 / b + 1e-9 {
                    continue;
                }
                for t in [-0.999 * b, -0.5 * b, 0.0, 0.5 * b, 0.999 * b] {
                    let j = net.tube_jacobian(k, s, t).unwrap();
                    worst_lo = worst_lo.min(j);
                    worst_hi = worst_hi.max(j);
                }
            }
        }
    }
    (
        worst_lo >= 0.5 && worst_hi <= 1.5,
        format!("1 - tκ in [{worst_lo:.3}, {worst_hi:.3}] ⊂ [1/2, 3/2]"),
    )
}

fn gauge_slope() -> (bool, String) {
    let hs = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0];
    let lowest = |h: f64, c: f64| -> f64 {
        let cfg = SpectrumConfig {
            network: None,
            coupling: None,
            field: Some(VectorPotential { b: 1.0, gauge_xy: c }),
            background: None,
            eps: None,
            mesh: square(-1.0, 1.0, h),
            k: 1,
            solver: SolverConfig::default(),
            seed: 1,
        };
        f(field(&run_spectrum(&cfg, &RunOptions::default()).unwrap(), &["eigenvalues"])[0].clone())
    };
    let diffs: Vec<f64> = hs.iter().map(|&h| (lowest(h, 1.0) - lowest(h, 0.0)).abs()).collect();
    let slope = fit_rate(&hs, &diffs).unwrap().slope;
    (slope >= 1.0, format!("gauge defect {diffs:.5?}, slope {slope:.2} (>= 1)"))
}

fn determinism() -> (bool, String) {
    let cfg = ConvergenceConfig {
        network: straight_segment(0.75, 0.25),
        coupling: Coupling::Alpha {
            alpha: vec![StrengthFunction::constant(0, -4.0)],
        },
        field: None,
        background: None,
        eps: EpsGrid::List(vec![0.25, 0.18, 0.125]),
        mesh: square(-1.5, 1.5, 1.0 / 32.0),
        solver: SolverConfig::default(),
        shift: None,
        refinement_check: false,
        seed: 99,
    };
    let a = run_convergence(&cfg, &RunOptions::default()).unwrap();
    let b = run_convergence(&cfg, &RunOptions::default()).unwrap();
    let same = a.csv_sha256 == b.csv_sha256 && a.to_json().unwrap() == b.to_json().unwrap();
    (same, format!("csv sha256 {}…, identical reports {same}", &a.csv_sha256[..12]))
}

fn criterion_9(rotation: Option<(f64, f64)>) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let checks: [(&str, fn() -> (bool, String)); 5] = [
        ("hermiticity/mass", hermiticity_and_mass),
        ("scaling", scaling_invariance),
        ("jacobian", jacobian_bounds),
        ("gauge", gauge_slope),
        ("determinism", determinism),
    ];
    for (name, c) in checks {
        let (ok, msg) = c();
        pass &= ok;
        parts.push(format!("{name}: {msg}"));
    }
    match rotation {
        Some((rot, err)) => {
            let ok = rot.abs() <= err;
            pass &= ok;
            parts.push(format!("rotation: |gap| {:.4} <= err {err:.4}", rot.abs()));
        }
        None => {
            pass = false;
            parts.push("rotation: star-graph run unavailable".into());
        }
    }
    outcome(pass, parts.join("; "))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(o) => o,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        }
    }
}

fn main() {
    faer::set_global_parallelism(faer::Par::Seq);
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    results.push((1, guarded(criterion_1)));
    results.push((2, guarded(criterion_2)));
    results.push((3, guarded(criterion_3)));
    results.push((4, guarded(criterion_4)));
    let mut rotation = None;
    results.push((
        5,
        guarded(|| {
            let (o, r) = criterion_5();
            rotation = r;
            o
        }),
    ));
    results.push((6, guarded(criterion_6)));
    results.push((7, guarded(criterion_7)));
    results.push((8, guarded(criterion_8)));
    results.push((9, guarded(|| criterion_9(rotation))));
    let mut failed = 0;
    for (i, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {i}: {tag} | {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
