//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; any failure fails the run.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavebie::bie::{solve, solve_dirichlet, solve_neumann, BvpKind, Scenario};
use wavebie::cli::{run_scenario, Command};
use wavebie::config::{sample_points, ScenarioConfig};
use wavebie::field::{CauchyData, Constant, Field, TraceSeries};
use wavebie::geometry::{BoundaryGeometry, Curve, Interval, Point, Surface, TimeGrid};
use wavebie::kernels::{eval_h, eval_u, eval_w, KernelQuery};
use wavebie::oracle::{analytic_reference, AnalyticKind, AnalyticSolution, Profile};
use wavebie::quadrature::QuadratureRule;
use wavebie::representation::{normalization, represent, BoundaryData, RepresentationRule};
use wavebie::verify::{gauss_dynamic, gauss_expected, gauss_static_3d, shock_jump_report, FieldProbe, FrontSet};
use wavebie::{Result, WaveError};

type Verdict = (bool, String);

fn config(name: &str) -> Result<ScenarioConfig> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "configs", name].iter().collect();
    ScenarioConfig::load(&path)
}

fn summary(name: &str, command: Command, refine: usize, key: &str) -> Result<f64> {
    let out = run_scenario(&config(name)?, command, refine)?;
    out.value(key).ok_or_else(|| WaveError::Verification(format!("{name}: no summary value {key}")))
}

fn solution(kind: AnalyticKind) -> Arc<AnalyticSolution> {
    Arc::new(analytic_reference(kind, 1.0).expect("valid reference"))
}

fn circle(n: usize) -> BoundaryGeometry {
    BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, n).expect("circle"))
}

fn ball(level: usize) -> BoundaryGeometry {
    BoundaryGeometry::Surface(Surface::icosphere(Point::zeros(), 1.0, level).expect("icosphere"))
}

fn unit_interval() -> BoundaryGeometry {
    BoundaryGeometry::Interval(Interval::new(0.0, 1.0).expect("interval"))
}

fn rel_l2(a: &TraceSeries, b: &TraceSeries) -> f64 {
    let num: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.values().iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

/// Static Gauss formula on a 5120-triangle sphere.
fn static_gauss() -> Result<Verdict> {
    let g = ball(4);
    let BoundaryGeometry::Surface(s) = &g else { unreachable!() };
    let tol = 1e-3 * 4.0 * PI;
    let start = Instant::now();
    let rule = QuadratureRule::default();
    let mut worst = 0.0f64;
    for x in sample_points(&g, 50, 50, 20) {
        let v = gauss_static_3d(&g, &x, &rule)?;
        worst = worst.max((v - gauss_expected(&g, &x, 1.0)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = s.triangles().len() == 5120 && worst < tol && secs < 30.0;
    Ok((ok, format!("{} triangles, 120 points: max error {worst:.3e} < {tol:.3e}, {secs:.1} s < 30 s", s.triangles().len())))
}

/// At `t = dist(x, S)/c` and `t = t*(x)` the front is tangent to S and the
/// 2D integrands diverge; sample times are moved off those instants.
fn off_tangency(t: f64, t_near: f64, t_star: f64) -> f64 {
    if (t - t_near).abs() < 0.02 * t_star {
        t_near + 0.05 * t_star
    } else {
        t
    }
}

/// Dynamic Gauss formula: three point classes, times before and after t*.
fn dynamic_gauss() -> Result<Verdict> {
    let before = [0.2, 0.4, 0.6, 0.75, 0.85];
    let after = [1.15, 1.4, 1.8, 2.3, 3.0];
    let grid = TimeGrid::new(1.0, 0.1, 10)?;
    let rule = RepresentationRule::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, g) in [("circle", circle(64)), ("sphere", ball(2))] {
        let norm = normalization(g.dimension());
        let tol = 1e-2 * norm;
        let mut worst = 0.0f64;
        let mut spread = 0.0f64;
        let classes = [sample_points(&g, 10, 0, 0), sample_points(&g, 0, 10, 0), sample_points(&g, 0, 0, 10)];
        for points in classes {
            for x in points {
                let t_star = g.max_retarded_time(&x, grid.c);
                let t_near = g.distance_to_boundary(&x) / grid.c;
                for f in before {
                    let t = off_tangency(f * t_star, t_near, t_star);
                    worst = worst.max((gauss_dynamic(&g, &grid, &x, t, &rule)? - gauss_expected(&g, &x, t)).abs());
                }
                let late: Vec<f64> = after.iter().map(|f| gauss_dynamic(&g, &grid, &x, f * t_star, &rule)).collect::<Result<_>>()?;
                for v in &late {
                    worst = worst.max((v - gauss_expected(&g, &x, 2.0 * t_star)).abs());
                }
                let (lo, hi) = late.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
                spread = spread.max(hi - lo);
            }
        }
        ok &= worst < tol && spread < tol;
        parts.push(format!("{name}: max error {worst:.3e}, late spread {spread:.3e} < {tol:.3e}"));
    }
    Ok((ok, format!("30 points x 10 times each; {}", parts.join("; "))))
}

fn random_offset(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    let mut x = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    for k in dim..3 {
        x[k] = 0.0;
    }
    x
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    loop {
        let m = random_offset(rng, dim);
        if m.norm() > 0.1 {
            return m / m.norm();
        }
    }
}

/// Time antiderivative, reciprocity and causality of the kernels.
fn kernel_identities() -> Result<Verdict> {
    const SAMPLES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let c = 1.3;

    // ∂W/∂t = U inside the cone, away from the front
    let mut worst_rate = 0.0f64;
    for i in 0..SAMPLES {
        let dim = 1 + i % 2;
        let x = random_offset(&mut rng, dim);
        let r = if dim == 1 { x.x.abs() } else { x.xy().norm() };
        if r < 1e-3 {
            continue;
        }
        let t = r / (c * rng.gen_range(0.05..0.95));
        let h = 1e-5 * t;
        let w = |s: f64| eval_w(&KernelQuery::new(dim, x, s, c));
        let du = (w(t + h)? - w(t - h)?) / (2.0 * h);
        let u = eval_u(&KernelQuery::new(dim, x, t, c))?.regular;
        worst_rate = worst_rate.max((du - u).abs() / u.abs());
    }

    // U, W symmetric in (x, y); H odd in (x, y) and in m
    let mut worst_sym = 0.0f64;
    for i in 0..SAMPLES {
        let dim = 1 + i % 3;
        let x = random_offset(&mut rng, dim);
        if x.norm() < 1e-3 {
            continue;
        }
        let m = random_direction(&mut rng, dim);
        let t = rng.gen_range(0.05..3.0);
        let fwd = KernelQuery::new(dim, x, t, c).with_direction(m);
        let rev = KernelQuery::new(dim, -x, t, c).with_direction(m);
        let flip = KernelQuery::new(dim, x, t, c).with_direction(-m);
        let scale = |a: f64| a.abs().max(f64::MIN_POSITIVE);
        // the 2D front itself is refused by U and H, skip those samples
        if let (Ok(u1), Ok(u2)) = (eval_u(&fwd), eval_u(&rev)) {
            worst_sym = worst_sym.max((u1.regular - u2.regular).abs() / scale(u1.regular));
            if let (Some(a), Some(b)) = (u1.impulse, u2.impulse) {
                worst_sym = worst_sym.max((a.weight - b.weight).abs() / scale(a.weight));
            }
        }
        let (w1, w2) = (eval_w(&fwd)?, eval_w(&rev)?);
        worst_sym = worst_sym.max((w1 - w2).abs() / scale(w1));
        if let (Ok(h1), Ok(h2), Ok(h3)) = (eval_h(&fwd), eval_h(&rev), eval_h(&flip)) {
            worst_sym = worst_sym.max((h1.regular + h2.regular).abs() / scale(h1.regular));
            worst_sym = worst_sym.max((h1.regular + h3.regular).abs() / scale(h1.regular));
        }
    }

    // nothing reaches x before r/c
    let mut leaks = 0usize;
    for i in 0..SAMPLES {
        let dim = 1 + i % 3;
        let x = random_offset(&mut rng, dim);
        let r = match dim {
            1 => x.x.abs(),
            2 => x.xy().norm(),
            _ => x.norm(),
        };
        if r < 1e-3 {
            continue;
        }
        let m = random_direction(&mut rng, dim);
        let t = rng.gen_range(0.0..0.999) * r / c;
        let q = KernelQuery::new(dim, x, t, c).with_direction(m);
        let (u, w, h) = (eval_u(&q)?, eval_w(&q)?, eval_h(&q)?);
        let silent = |v: &wavebie::kernels::KernelValue| v.regular == 0.0 && v.impulse.map_or(true, |p| p.delay > t);
        if !(silent(&u) && silent(&h) && w == 0.0) {
            leaks += 1;
        }
    }

    let ok = worst_rate < 1e-6 && worst_sym <= 1e-12 && leaks == 0;
    Ok((
        ok,
        format!("dW/dt = U {worst_rate:.2e} < 1e-6, symmetry {worst_sym:.2e} <= 1e-12, {leaks} causality violations; 3 x {SAMPLES} samples"),
    ))
}

/// Representation against analytic references, with observed order.
fn representation() -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, file) in [("interval", "interval_plane_wave.toml"), ("disk", "disk_plane_wave.toml"), ("ball", "ball_plane_wave.toml")] {
        let start = Instant::now();
        let err = summary(file, Command::Represent, 1, "max_relative_error")?;
        let order = summary(file, Command::Convergence, 1, "observed_order")?;
        let secs = start.elapsed().as_secs_f64();
        ok &= err <= 0.02 && order >= 1.0 && secs < 120.0;
        parts.push(format!("{name} {err:.2e} order {order:.2} ({secs:.0} s)"));
    }
    Ok((ok, format!("relative error <= 2e-2 and order >= 1: {}", parts.join(", "))))
}

/// Before the boundary is felt only the Cauchy terms act, whatever the traces.
fn cauchy_reduction() -> Result<Verdict> {
    let rule = RepresentationRule::default();
    let mut worst = 0.0f64;
    let pulse = solution(AnalyticKind::DAlembert1d { a: 1.0, x0: 0.4, w: 0.1, b: 0.5, x1: 0.6, v: 0.08 });
    let wave = |d: Point| solution(AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 2.0, phase: 0.3 }, direction: d / d.norm() });
    let cases: Vec<(BoundaryGeometry, Arc<AnalyticSolution>, Vec<Point>)> = vec![
        (
            BoundaryGeometry::Interval(Interval::new(-1.0, 2.0)?),
            pulse,
            vec![Point::new(0.5, 0.0, 0.0), Point::new(0.1, 0.0, 0.0), Point::new(0.9, 0.0, 0.0)],
        ),
        (circle(64), wave(Point::new(0.6, 0.8, 0.0)), vec![Point::zeros(), Point::new(0.2, -0.3, 0.0), Point::new(-0.4, 0.1, 0.0)]),
        (ball(2), wave(Point::new(1.0, 2.0, 2.0)), vec![Point::zeros(), Point::new(0.2, 0.1, -0.2), Point::new(-0.3, 0.0, 0.2)]),
    ];
    for (g, u, points) in cases {
        let grid = TimeGrid::new(1.0, 0.05, 40)?;
        // deliberately wrong traces: they must not contribute
        let garbage = BoundaryData::sample(&g, &grid, &Constant(5.0));
        let cauchy: CauchyData = u.cauchy();
        for x in points {
            let t_max = g.distance_to_boundary(&x) / grid.c;
            for f in [0.25, 0.5, 0.9] {
                let t = f * t_max;
                let v = represent(&g, &grid, &garbage, &cauchy, &x, t, &rule)?;
                let exact = u.value(&x, t);
                worst = worst.max((v - exact).abs() / exact.abs().max(1e-2));
            }
        }
    }
    Ok((worst <= 0.01, format!("d'Alembert, Poisson and Kirchhoff references: max relative error {worst:.2e} <= 1e-2")))
}

fn disk_errors(n: usize, dt: f64, steps: usize) -> Result<[f64; 2]> {
    let u = solution(AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 2.0, phase: 0.3 }, direction: Point::new(0.6, 0.8, 0.0) });
    let g = circle(n);
    let grid = TimeGrid::new(1.0, dt, steps)?;
    let exact = BoundaryData::sample(&g, &grid, u.as_ref());
    let d = rel_l2(&solve_dirichlet(&Scenario::manufactured(g.clone(), grid, BvpKind::Dirichlet, &u)?)?, &exact.flux);
    let n = rel_l2(&solve_neumann(&Scenario::manufactured(g, grid, BvpKind::Neumann, &u)?)?, &exact.trace);
    Ok([d, n])
}

/// Boundary integral solves in all three dimensions.
fn bie_solves() -> Result<Verdict> {
    // N = 1 endpoint recovery at dt = 1e-3
    let grid = TimeGrid::new(1.0, 1e-3, 2500)?;
    let mut one_d = [0.0f64; 2];
    for (slot, (kind, cosine)) in [(BvpKind::Dirichlet, false), (BvpKind::Neumann, true)].into_iter().enumerate() {
        let u = solution(AnalyticKind::StandingMode1d { k: PI, cosine });
        let sc = Scenario::manufactured(unit_interval(), grid, kind, &u)?;
        let exact = BoundaryData::sample(&unit_interval(), &grid, u.as_ref());
        let (got, want) = match kind {
            BvpKind::Dirichlet => (solve_dirichlet(&sc)?, exact.flux),
            BvpKind::Neumann => (solve_neumann(&sc)?, exact.trace),
        };
        let err = got.values().iter().zip(want.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        one_d[slot] = err / want.max_abs();
    }

    let coarse = disk_errors(32, 0.2, 10)?;
    let fine = disk_errors(64, 0.1, 20)?;

    let u = solution(AnalyticKind::SphericalOutgoing { center: Point::new(2.0, 0.0, 0.0), profile: Profile::Power { n: 3 }, r0: 1.0 });
    let g = ball(2);
    let grid3 = TimeGrid::new(1.0, 0.3, 10)?;
    let exact = BoundaryData::sample(&g, &grid3, u.as_ref());
    let sphere = rel_l2(&solve_dirichlet(&Scenario::manufactured(g.clone(), grid3, BvpKind::Dirichlet, &u)?)?, &exact.flux);

    let mut zero = true;
    for (g, grid) in [(circle(16), TimeGrid::new(1.0, 0.4, 8)?), (ball(1), TimeGrid::new(1.0, 0.5, 6)?), (unit_interval(), TimeGrid::new(1.0, 0.1, 20)?)] {
        for kind in [BvpKind::Dirichlet, BvpKind::Neumann] {
            let given = TraceSeries::zeros(kind.given_kind(), g.node_count(), &grid);
            let out = solve(&Scenario::new(g.clone(), grid, kind, given, CauchyData::zero())?)?;
            zero &= out.trace.values().iter().chain(out.flux.values()).all(|v| *v == 0.0);
        }
    }

    let ok = one_d.iter().all(|e| *e <= 0.01)
        && coarse.iter().chain(&fine).all(|e| *e <= 0.05)
        && fine[0] < coarse[0]
        && fine[1] < coarse[1]
        && sphere <= 0.05
        && zero;
    Ok((
        ok,
        format!(
            "interval D/N {} <= 1e-2; disk D/N {} -> {} <= 5e-2; sphere {sphere:.2e} <= 5e-2; zero data {}",
            fmt_list(&one_d),
            fmt_list(&coarse),
            fmt_list(&fine),
            if zero { "exact" } else { "NOT zero" }
        ),
    ))
}

/// Energy and Lagrangian balances relative to the peak energy.
fn balances() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, file) in [("standing mode", "standing_1d_dirichlet.toml"), ("disk plane wave", "disk_plane_wave.toml"), ("1D ramp", "ramp_shock_1d.toml")] {
        let out = run_scenario(&config(file)?, Command::VerifyEnergy, 1)?;
        let e = out.value("energy_residual_relative").unwrap_or(f64::NAN);
        let l = out.value("lagrangian_residual_relative").unwrap_or(f64::NAN);
        worst = worst.max(e).max(l);
        parts.push(format!("{name} {:.1e}", e.max(l)));
    }
    Ok((worst < 1e-3, format!("residual / peak energy < 1e-3: {}", parts.join(", "))))
}

/// Hadamard conditions across a 1D ramp front and on refined FD fields.
fn shock_audit() -> Result<Verdict> {
    let u: Arc<dyn Field> = solution(AnalyticKind::RampShock1d { v: 1.0 });
    let g = unit_interval();
    let front = FrontSet::new(vec![Point::zeros()], 1.0, 1e-6)?;
    let mut exact_worst = 0.0f64;
    for t in [0.2, 0.5, 0.8] {
        let report = shock_jump_report(&g, &FieldProbe::new(u.clone()), &front, t, 8)?;
        if report.is_empty() {
            return Ok((false, format!("no front sample at t = {t}")));
        }
        exact_worst = exact_worst.max(report.worst());
    }
    let fd: Vec<f64> = [1, 2, 4]
        .into_iter()
        .map(|k| summary("rectangle_ramp_fd.toml", Command::VerifyShock, k, "max_jump_hadamard"))
        .collect::<Result<_>>()?;
    let decreasing = fd.windows(2).all(|w| w[1] < w[0]);
    Ok((
        exact_worst < 1e-8 && decreasing,
        format!("1D ramp max of five jumps {exact_worst:.2e} < 1e-8 at eps 1e-6; FD rectangle Hadamard {} decreasing", fmt_list(&fd)),
    ))
}

/// Interior values from the boundary integral route against finite differences.
fn oracle_cross_check() -> Result<Verdict> {
    let one = summary("interval_plane_wave.toml", Command::Oracle, 1, "bie_fd_relative_l2")?;
    let two = summary("disk_plane_wave.toml", Command::Oracle, 1, "bie_fd_relative_l2")?;
    Ok((one <= 0.03 && two <= 0.03, format!("relative L2 <= 3e-2: interval {one:.2e}, disk {two:.2e}")))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Verdict>); 9] = [
        ("static Gauss", static_gauss),
        ("dynamic Gauss", dynamic_gauss),
        ("kernel identities", kernel_identities),
        ("representation", representation),
        ("Cauchy reduction", cauchy_reduction),
        ("BIE solves", bie_solves),
        ("balances", balances),
        ("shock audit", shock_audit),
        ("FD cross-check", oracle_cross_check),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(v)) => v,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        failed += usize::from(!ok);
        println!("[{}] {} {name}: {detail} [{:.1} s]", if ok { "PASS" } else { "FAIL" }, i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
