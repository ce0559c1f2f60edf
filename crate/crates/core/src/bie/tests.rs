use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::field::{Constant, Zero};
use crate::geometry::{Interval, Point};
use crate::oracle::{analytic_reference, AnalyticKind, Profile};

fn solution(kind: AnalyticKind, c: f64) -> Arc<AnalyticSolution> {
    Arc::new(analytic_reference(kind, c).unwrap())
}

fn plane_wave() -> Arc<AnalyticSolution> {
    solution(AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 1.0, phase: 0.0 }, direction: Point::new(1.0, 0.0, 0.0) }, 1.0)
}

fn disk(m: usize) -> BoundaryGeometry {
    BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, m).unwrap())
}

fn ball(level: usize) -> BoundaryGeometry {
    BoundaryGeometry::Surface(Surface::icosphere(Point::zeros(), 1.0, level).unwrap())
}

fn unit_interval() -> BoundaryGeometry {
    BoundaryGeometry::Interval(Interval::new(0.0, 1.0).unwrap())
}

fn rel_l2(a: &TraceSeries, b: &TraceSeries) -> f64 {
    let num: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.values().iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

fn zero_scenario(geom: BoundaryGeometry, grid: TimeGrid, kind: BvpKind) -> Scenario {
    let given = TraceSeries::zeros(kind.given_kind(), geom.node_count(), &grid);
    Scenario::new(geom, grid, kind, given, CauchyData::zero()).unwrap()
}

fn max_abs(b: &DMatrix<f64>) -> f64 {
    b.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

#[test]
fn zero_data_gives_exactly_zero() {
    let cases = [
        (disk(16), TimeGrid::new(1.0, 0.4, 8).unwrap()),
        (ball(1), TimeGrid::new(1.0, 0.5, 6).unwrap()),
        (unit_interval(), TimeGrid::new(1.0, 0.1, 20).unwrap()),
    ];
    for (geom, grid) in cases {
        for kind in [BvpKind::Dirichlet, BvpKind::Neumann] {
            let sc = zero_scenario(geom.clone(), grid, kind);
            if geom.dimension() > 1 {
                assert!(assemble(&sc).unwrap().rhs.iter().all(|v| *v == 0.0));
            }
            let out = solve(&sc).unwrap();
            assert!(out.trace.values().iter().chain(out.flux.values()).all(|v| *v == 0.0), "{kind:?} in N = {}", geom.dimension());
        }
    }
}

#[test]
fn disk_plane_wave_recovery() {
    let u = plane_wave();
    let mut previous = [f64::INFINITY; 2];
    for (m, dt, steps) in [(32, 0.2, 20), (64, 0.1, 40)] {
        let g = disk(m);
        let grid = TimeGrid::new(1.0, dt, steps).unwrap();
        let exact = BoundaryData::sample(&g, &grid, u.as_ref());
        let d = Scenario::manufactured(g.clone(), grid, BvpKind::Dirichlet, &u).unwrap();
        let e_flux = rel_l2(&solve_dirichlet(&d).unwrap(), &exact.flux);
        let n = Scenario::manufactured(g.clone(), grid, BvpKind::Neumann, &u).unwrap();
        let e_trace = rel_l2(&solve_neumann(&n).unwrap(), &exact.trace);
        assert!(e_flux < previous[0] && e_trace < previous[1], "m = {m}: {e_flux} {e_trace}");
        previous = [e_flux, e_trace];
    }
    // default resolution: 64 nodes, cΔt = 0.1
    assert!(previous[0] <= 0.05, "Dirichlet flux error {}", previous[0]);
    assert!(previous[1] <= 0.05, "Neumann trace error {}", previous[1]);
}

#[test]
fn constant_state_is_kept_by_the_neumann_march() {
    let g = disk(32);
    let grid = TimeGrid::new(1.0, 0.2, 20).unwrap();
    let given = TraceSeries::zeros(TraceKind::Flux, 32, &grid);
    let cauchy = CauchyData::from_solution(Arc::new(Constant(1.0)), Arc::new(Zero));
    let sc = Scenario::new(g, grid, BvpKind::Neumann, given, cauchy).unwrap();
    let trace = solve_neumann(&sc).unwrap();
    let worst = trace.values().iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn circle_blocks_are_circulant() {
    let m = 24;
    let sc = zero_scenario(disk(m), TimeGrid::new(1.0, 0.25, 12).unwrap(), BvpKind::Dirichlet);
    let sys = assemble(&sc).unwrap();
    for op in [&sys.flux, &sys.trace] {
        for b in op.full.iter().chain(op.first.iter()) {
            let scale = max_abs(b).max(1e-300);
            for i in 0..m {
                for j in 0..m {
                    let shifted = b[((i + 1) % m, (j + 1) % m)];
                    assert!((b[(i, j)] - shifted).abs() <= 1e-10 * scale.max(1.0), "({i}, {j})");
                }
            }
        }
    }
}

#[test]
fn sphere_blocks_vanish_past_the_light_cone() {
    let g = ball(1);
    let grid = TimeGrid::new(1.0, 0.25, 16).unwrap();
    let sys = assemble(&zero_scenario(g.clone(), grid, BvpKind::Dirichlet)).unwrap();
    let band = (g.diameter() / (grid.c * grid.dt)).ceil() as usize + 1;
    assert!(sys.flux.support() <= band && sys.trace.support() <= band);
    assert!(sys.flux.support() >= band - 2);
}

#[test]
fn disk_blocks_carry_a_wake() {
    // no sharp back front in two dimensions: the blocks beyond the
    // diameter band decay but never vanish
    let sys = assemble(&zero_scenario(disk(64), TimeGrid::new(1.0, 0.1, 40).unwrap(), BvpKind::Dirichlet)).unwrap();
    let tail: Vec<f64> = (22..=40).map(|l| max_abs(&sys.flux.full[l])).collect();
    assert!(tail.iter().all(|v| *v > 0.0));
    assert!(tail.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sphere_dirichlet_spherical_wave() {
    let u = solution(AnalyticKind::SphericalOutgoing { center: Point::new(2.0, 0.0, 0.0), profile: Profile::Power { n: 3 }, r0: 1.0 }, 1.0);
    let g = ball(2);
    let grid = TimeGrid::new(1.0, 0.3, 10).unwrap();
    let sc = Scenario::manufactured(g.clone(), grid, BvpKind::Dirichlet, &u).unwrap();
    let exact = BoundaryData::sample(&g, &grid, u.as_ref());
    let err = rel_l2(&solve_dirichlet(&sc).unwrap(), &exact.flux);
    assert!(err <= 0.05, "{err}");
}

#[test]
fn interval_neumann_standing_mode() {
    let u = solution(AnalyticKind::StandingMode1d { k: PI, cosine: true }, 1.0);
    let grid = TimeGrid::new(1.0, 1e-3, 2500).unwrap();
    let sc = Scenario::manufactured(unit_interval(), grid, BvpKind::Neumann, &u).unwrap();
    let trace = solve_neumann(&sc).unwrap();
    for k in 0..=grid.steps {
        let t = grid.time(k);
        assert!((trace.get(0, k) - (PI * t).cos()).abs() < 1e-3, "t = {t}");
        assert!((trace.get(1, k) + (PI * t).cos()).abs() < 1e-3, "t = {t}");
    }
}

#[test]
fn interval_dirichlet_standing_mode() {
    let u = solution(AnalyticKind::StandingMode1d { k: PI, cosine: false }, 1.0);
    let grid = TimeGrid::new(1.0, 1e-3, 2500).unwrap();
    let sc = Scenario::manufactured(unit_interval(), grid, BvpKind::Dirichlet, &u).unwrap();
    let flux = solve_dirichlet(&sc).unwrap();
    // outward derivative: -u,x at x = 0, +u,x at x = 1, both -π cos(πt)
    for k in 0..=grid.steps {
        let t = grid.time(k);
        let expected = -PI * (PI * t).cos();
        for node in 0..2 {
            assert!((flux.get(node, k) - expected).abs() < 1e-2 * PI, "node {node}, t = {t}");
        }
    }
}

#[test]
fn interval_step_must_resolve_the_lag() {
    let sc = zero_scenario(unit_interval(), TimeGrid::new(1.0, 1.5, 4).unwrap(), BvpKind::Neumann);
    assert!(matches!(solve(&sc), Err(WaveError::Discretization(_))));
}

#[test]
fn residual_of_manufactured_and_solved_data() {
    let u = plane_wave();
    let g = disk(32);
    let grid = TimeGrid::new(1.0, 0.2, 15).unwrap();
    let sc = Scenario::manufactured(g.clone(), grid, BvpKind::Dirichlet, &u).unwrap();
    let exact = BoundaryData::sample(&g, &grid, u.as_ref());
    assert!(boundary_residual(&sc, &exact).unwrap().max_abs() < 0.1);
    let mut solved = solve(&sc).unwrap();
    let r = boundary_residual(&sc, &solved).unwrap();
    assert!(r.max_abs() < 1e-10, "{}", r.max_abs());
    solved.flux.set(5, 7, solved.flux.get(5, 7) + 1.0);
    let bumped = boundary_residual(&sc, &solved).unwrap();
    assert!(bumped.get(5, 7).abs() > r.get(5, 7).abs() + 1e-3);
    assert!((0..7).all(|k| bumped.get(5, k) == r.get(5, k)));
}

#[test]
fn interval_residual_of_solved_data() {
    let u = solution(AnalyticKind::StandingMode1d { k: PI, cosine: false }, 1.0);
    let grid = TimeGrid::new(1.0, 0.01, 150).unwrap();
    let sc = Scenario::manufactured(unit_interval(), grid, BvpKind::Neumann, &u).unwrap();
    let solved = solve(&sc).unwrap();
    let r = boundary_residual(&sc, &solved).unwrap();
    assert!(r.max_abs() < 1e-10, "{}", r.max_abs());
}

#[test]
fn march_is_causal() {
    let u = plane_wave();
    let g = disk(24);
    let grid = TimeGrid::new(1.0, 0.25, 12).unwrap();
    let sc = Scenario::manufactured(g, grid, BvpKind::Neumann, &u).unwrap();
    let base = solve(&sc).unwrap();
    let mut late = sc.clone();
    for i in 0..24 {
        late.given.set(i, 8, late.given.get(i, 8) + 3.0);
    }
    let moved = solve(&late).unwrap();
    for k in 0..8 {
        assert_eq!(base.trace.step_values(k), moved.trace.step_values(k), "step {k}");
    }
    assert_ne!(base.trace.step_values(8), moved.trace.step_values(8));
}

#[test]
fn singular_step_matrix_is_refused() {
    let sc = zero_scenario(disk(16), TimeGrid::new(1.0, 0.4, 4).unwrap(), BvpKind::Dirichlet);
    let mut sys = assemble(&sc).unwrap();
    assert!(march(&sc, &sys).is_ok());
    let row = sys.flux.full[0].row(2).clone_owned();
    sys.flux.full[0].set_row(3, &row);
    assert!(matches!(march(&sc, &sys), Err(WaveError::Discretization(_))));
}

#[test]
fn courant_number_outside_the_window_is_flagged() {
    let sc = zero_scenario(disk(16), TimeGrid::new(1.0, 2.0, 3).unwrap(), BvpKind::Neumann);
    assert_eq!(assemble(&sc).unwrap().warnings.len(), 1);
    let sc = zero_scenario(disk(16), TimeGrid::new(1.0, 0.4, 3).unwrap(), BvpKind::Neumann);
    assert!(assemble(&sc).unwrap().warnings.is_empty());
}

#[test]
fn misuse_and_incompatible_data() {
    let grid = TimeGrid::new(1.0, 0.4, 3).unwrap();
    let sc = zero_scenario(disk(16), grid, BvpKind::Neumann);
    assert!(matches!(solve_dirichlet(&sc), Err(WaveError::Misuse(_))));
    assert!(matches!(assemble(&zero_scenario(unit_interval(), grid, BvpKind::Neumann)), Err(WaveError::Misuse(_))));
    let given = TraceSeries::zeros(TraceKind::Trace, 16, &grid);
    let cauchy = CauchyData::from_solution(Arc::new(Constant(1.0)), Arc::new(Zero));
    assert!(matches!(Scenario::new(disk(16), grid, BvpKind::Dirichlet, given, cauchy), Err(WaveError::Config(_))));
    let wrong = TraceSeries::zeros(TraceKind::Flux, 16, &grid);
    assert!(matches!(Scenario::new(disk(16), grid, BvpKind::Dirichlet, wrong, CauchyData::zero()), Err(WaveError::Misuse(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn interval_solves_are_linear(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let grid = TimeGrid::new(1.0, 0.05, 40).unwrap();
        let u1 = solution(AnalyticKind::StandingMode1d { k: PI, cosine: true }, 1.0);
        let u2 = solution(AnalyticKind::StandingMode1d { k: 2.0 * PI, cosine: true }, 1.0);
        let s1 = Scenario::manufactured(unit_interval(), grid, BvpKind::Neumann, &u1).unwrap();
        let s2 = Scenario::manufactured(unit_interval(), grid, BvpKind::Neumann, &u2).unwrap();
        let d1 = &s1.cauchy;
        let d2 = &s2.cauchy;
        let disp = crate::field::FnField({
            let (p, q) = (d1.displacement.clone(), d2.displacement.clone());
            move |x: &Point, t: f64| a * p.value(x, t) + b * q.value(x, t)
        });
        // both modes start at rest
        let cauchy = CauchyData { displacement: Arc::new(disp), velocity: Arc::new(Zero), source: Arc::new(Zero) };
        let values: Vec<f64> = s1.given.values().iter().zip(s2.given.values()).map(|(p, q)| a * p + b * q).collect();
        let given = TraceSeries::from_values(TraceKind::Flux, 2, grid.dt, values).unwrap();
        let sc = Scenario::new(unit_interval(), grid, BvpKind::Neumann, given, cauchy).unwrap();
        let (o1, o2, o) = (solve(&s1).unwrap(), solve(&s2).unwrap(), solve(&sc).unwrap());
        for k in 0..o.trace.values().len() {
            let lin = a * o1.trace.values()[k] + b * o2.trace.values()[k];
            prop_assert!((o.trace.values()[k] - lin).abs() < 1e-9 * (1.0 + lin.abs()));
        }
    }
}
