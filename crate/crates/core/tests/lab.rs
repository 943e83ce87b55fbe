use std::f64::consts::PI;

use delta_squeeze::fem::{BoxDomain, VectorPotential};
use delta_squeeze::lab::{
    run_convergence, run_cusp, run_scenario, run_stargraph, run_wedge, straight_segment,
    ConvergenceConfig, Coupling, CuspConfig, CuspOracleConfig, EpsGrid, MeshConfig, RunOptions,
    Scenario, SolverConfig, StarGraphConfig, WedgeConfig,
};
use delta_squeeze::potentials::{ScalarFn, StrengthFunction};
use delta_squeeze::Error;
use serde_json::json;

fn mesh(half: f64, h: f64) -> MeshConfig {
    MeshConfig {
        domain: BoxDomain::square(half),
        h,
    }
}

fn small_convergence(eps: Vec<f64>) -> ConvergenceConfig {
    ConvergenceConfig {
        network: straight_segment(0.75, 0.25),
        coupling: Coupling::Alpha {
            alpha: vec![StrengthFunction::function(
                0,
                ScalarFn::Polynomial {
                    coeffs: vec![-4.0, 0.5],
                },
            )],
        },
        field: None,
        background: None,
        eps: EpsGrid::List(eps),
        mesh: mesh(1.5, 1.0 / 32.0),
        solver: SolverConfig::default(),
        shift: None,
        refinement_check: false,
        seed: 3,
    }
}

#[test]
fn single_eps_is_flagged_without_fit() {
    let r = run_convergence(&small_convergence(vec![0.2]), &RunOptions::default()).unwrap();
    assert!(r.results["report"]["res_fit"].is_null());
    assert!(r.flags.iter().any(|f| f.starts_with("insufficient_points")));
    assert_eq!(r.exit_code(), 2);
    assert_eq!(r.csv.lines().count(), 2);
}

#[test]
fn alpha_coupling_reports_roundtrip() {
    let r = run_convergence(&small_convergence(vec![0.25, 0.18, 0.125]), &RunOptions::default()).unwrap();
    let sc = &r.results["self_check"];
    assert!(sc["passed"].as_bool().unwrap());
    assert!(sc["max_abs_error"].as_f64().unwrap() <= 1e-12);
    // every report echoes β, the mesh and the resolvent point
    assert_eq!(r.beta, Some(0.25));
    assert!(r.mesh.is_some());
    let shift = r.shift.unwrap();
    let l = r.results["report"]["lambda_delta"].as_f64().unwrap();
    assert!((shift - (l - l.abs().max(1.0))).abs() < 1e-12);
    assert!(r.config["seed"] == json!(3));
    assert_eq!(r.csv.lines().next(), Some("eps,res_norm,eig_gap,converged"));
}

#[test]
fn convergence_rejects_bad_grids() {
    let opts = RunOptions::default();
    let increasing = run_convergence(&small_convergence(vec![0.1, 0.2]), &opts);
    assert!(matches!(increasing, Err(Error::Config(_))));
    let wide = run_convergence(&small_convergence(vec![0.3, 0.2]), &opts);
    assert!(matches!(wide, Err(Error::Config(_))));
    // h = 1/32 > 0.1/4
    let coarse = run_convergence(&small_convergence(vec![0.2, 0.1]), &opts);
    assert!(matches!(coarse, Err(Error::Config(_))));
}

#[test]
fn failures_carry_the_eps_at_fault() {
    let mut cfg = small_convergence(vec![0.25, 0.18]);
    // λ far above the spectrum of every squeezed form
    cfg.shift = Some(50.0);
    match run_convergence(&cfg, &RunOptions::default()) {
        Err(Error::Shift(_)) => {}
        Err(Error::AtEps { eps, .. }) => assert!(eps == 0.25 || eps == 0.18),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reports_are_reproducible() {
    let cfg = small_convergence(vec![0.25, 0.18, 0.125]);
    let a = run_convergence(&cfg, &RunOptions::default()).unwrap();
    let b = run_convergence(&cfg, &RunOptions::default()).unwrap();
    assert_eq!(a.csv_sha256, b.csv_sha256);
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.csv_sha256, delta_squeeze::lab::sha256_hex(&a.csv));
}

#[test]
fn writes_report_csv_and_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        dump_mm: Some(dir.path().join("mm")),
    };
    let r = run_convergence(&small_convergence(vec![0.25, 0.125]), &opts).unwrap();
    r.write(dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back["csv_sha256"], json!(r.csv_sha256));
    assert!(back.get("csv").is_none());
    let csv = std::fs::read_to_string(dir.path().join("data.csv")).unwrap();
    assert_eq!(csv, r.csv);
    for name in ["M", "S_delta", "S_eps_0", "S_eps_1"] {
        let mm = std::fs::read_to_string(dir.path().join("mm").join(format!("{name}.mtx"))).unwrap();
        assert!(mm.starts_with("%%MatrixMarket matrix coordinate real"));
    }
}

#[test]
fn magnetic_convergence_runs_complex() {
    let mut cfg = small_convergence(vec![0.25, 0.18, 0.125]);
    cfg.field = Some(VectorPotential::homogeneous(1.0));
    let r = run_convergence(&cfg, &RunOptions::default()).unwrap();
    assert!(r.results["hermitian_residual"].as_f64().unwrap() <= 1e-12);
    let n: Vec<f64> = r.results["report"]["res_norm"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(n.iter().all(|x| x.is_finite() && *x > 0.0));
}

fn star(angles: Vec<f64>) -> StarGraphConfig {
    StarGraphConfig {
        edges: angles.len(),
        edge_length: 0.5,
        angles,
        alpha: -5.0,
        eps: None,
        mesh: mesh(1.25, 1.0 / 16.0),
        symmetric_comparison: true,
        rotation: 0.3,
        refine: false,
        beta_cap: 0.2,
        solver: SolverConfig::default(),
        seed: 1,
    }
}

#[test]
fn stargraph_validates_angles() {
    let opts = RunOptions::default();
    assert!(matches!(run_stargraph(&star(vec![2.0, 2.0, 2.0]), &opts), Err(Error::Config(_))));
    assert!(matches!(run_stargraph(&star(vec![PI, PI]), &opts), Err(Error::Config(_))));
    let mut c = star(vec![2.0 * PI / 3.0; 3]);
    c.edges = 4;
    assert!(matches!(run_stargraph(&c, &opts), Err(Error::Config(_))));
}

#[test]
fn symmetric_star_has_zero_gap() {
    let r = run_stargraph(&star(vec![2.0 * PI / 3.0; 3]), &RunOptions::default()).unwrap();
    assert_eq!(r.results["gap"].as_f64().unwrap(), 0.0);
    assert!(r.results["congruent"].as_bool().unwrap());
}

#[test]
fn squeezed_star_graph_runs() {
    let mut c = star(vec![5.0 * PI / 6.0, 5.0 * PI / 6.0, PI / 3.0]);
    c.eps = Some(0.2);
    c.mesh = mesh(1.25, 0.05);
    c.symmetric_comparison = false;
    let r = run_stargraph(&c, &RunOptions::default()).unwrap();
    assert!(r.results["graphs"][0]["lambda_h"].as_f64().unwrap() < 0.0);
}

#[test]
fn cusp_checks_resolution_and_regime() {
    let cfg = CuspConfig {
        d: 2.0,
        alphas: vec![-40.0],
        x_join: 0.5,
        eps: None,
        mesh: MeshConfig {
            domain: BoxDomain::new(-1.0, 2.0, -1.0, 1.0),
            h: 1.0 / 32.0,
        },
        beta_cap: 0.25,
        oracle: CuspOracleConfig::default(),
        solver: SolverConfig::default(),
        seed: 1,
    };
    assert!(matches!(run_cusp(&cfg, &RunOptions::default()), Err(Error::Resolution { .. })));
    let mut weak = cfg.clone();
    weak.alphas = vec![-1e-3];
    let r = run_cusp(&weak, &RunOptions::default()).unwrap();
    assert!(r.results["points"][0]["outside_asymptotic_regime"].as_bool().unwrap());
    assert_eq!(r.exit_code(), 2);
    let mut unordered = cfg;
    unordered.alphas = vec![-3.0, -2.0];
    assert!(matches!(run_cusp(&unordered, &RunOptions::default()), Err(Error::Config(_))));
}

fn wedge() -> WedgeConfig {
    WedgeConfig {
        phi: PI / 3.0,
        alpha: -1e-6,
        theta: Some(1.5),
        b: 1.0,
        ray_length: 0.9,
        mesh: mesh(1.0, 1.0 / 16.0),
        eps: None,
        k: 1,
        beta_cap: 0.2,
        solver: SolverConfig::default(),
        seed: 1,
    }
}

#[test]
fn wedge_needs_a_field() {
    let mut c = wedge();
    c.b = 0.0;
    assert!(matches!(run_wedge(&c, &RunOptions::default()), Err(Error::Config(_))));
}

#[test]
fn wedge_reports_criterion_and_hermiticity() {
    let r = run_wedge(&wedge(), &RunOptions::default()).unwrap();
    let v = r.results["criterion"]["value"].as_f64().unwrap();
    assert!((v + 1.25).abs() < 1e-4);
    assert!(r.results["criterion"]["negative"].as_bool().unwrap());
    assert!(r.results["hermitian_residual"].as_f64().unwrap() <= 1e-12);
    let mut no_theta = wedge();
    no_theta.theta = None;
    let r = run_wedge(&no_theta, &RunOptions::default()).unwrap();
    assert!(r.results["criterion"].is_null());
    assert!(r.results["eigenvalues"][0].as_f64().unwrap().is_finite());
}

#[test]
fn scenarios_parse_json_and_override_seed() {
    let cfg = json!({
        "network": {
            "segments": [{"kind": "line", "start": [-0.75, 0.0], "end": [0.75, 0.0]}],
            "beta_cap": 0.25
        },
        "coupling": {"kind": "profiles", "profiles": [{"segment": 0, "shape": {"kind": "constant", "value": -8.0}}]},
        "eps": {"max": 0.25, "count": 2},
        "mesh": {"domain": {"x0": -1.5, "x1": 1.5, "y0": -1.5, "y1": 1.5}, "h": 0.03125},
        "refinement_check": false
    });
    let r = run_scenario(Scenario::Converge, cfg.clone(), Some(11), &RunOptions::default()).unwrap();
    assert_eq!(r.config["seed"], json!(11));
    let eps = r.results["report"]["eps"].as_array().unwrap();
    assert!((eps[1].as_f64().unwrap() - 0.175).abs() < 1e-15);
    let mut bad = cfg;
    bad["unexpected"] = json!(1);
    assert!(matches!(
        run_scenario(Scenario::Converge, bad, None, &RunOptions::default()),
        Err(Error::Json(_))
    ));
    let wf = run_scenario(
        Scenario::WedgeF,
        json!({"phi": 1.0, "alpha": -0.5, "theta": 0.5}),
        Some(1),
        &RunOptions::default(),
    )
    .unwrap();
    assert!(wf.results["infimum"]["value"].as_f64().unwrap() < 0.75);
}
