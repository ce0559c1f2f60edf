use std::f64::consts::PI;

use super::*;
use crate::field::{FnField, Zero};
use crate::geometry::Interval;
use crate::oracle::{analytic_reference, AnalyticKind, Profile};

fn unit_interval() -> BoundaryGeometry {
    BoundaryGeometry::Interval(Interval::new(0.0, 1.0).unwrap())
}

fn square() -> BoundaryGeometry {
    let p = |x, y| Point::new(x, y, 0.0);
    BoundaryGeometry::Curve(Curve::polyline(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap())
}

fn disk() -> BoundaryGeometry {
    BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, 64).unwrap())
}

fn standing(cosine: bool) -> Arc<dyn Field> {
    Arc::new(analytic_reference(AnalyticKind::StandingMode1d { k: PI, cosine }, 1.0).unwrap())
}

fn plane_wave() -> Arc<dyn Field> {
    let d = Point::new(0.6, 0.8, 0.0);
    Arc::new(analytic_reference(AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 2.0, phase: 0.3 }, direction: d }, 1.0).unwrap())
}

/// Largest error against `u` on the grid nodes at the final step.
fn final_error(sol: &FdSolution, u: &dyn Field) -> f64 {
    let t = sol.steps() as f64 * sol.dt;
    let last = sol.level(sol.steps());
    (0..last.len())
        .filter(|&k| sol.is_inside(k))
        .map(|k| (last[k] - u.value(&sol.node(k), t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn standing_mode_converges_at_second_order() {
    let u = standing(false);
    let err = |h: f64| {
        let p = FdProblem::manufactured(unit_interval(), 1.0, BvpKind::Dirichlet, u.clone(), Arc::new(Zero), 1.5);
        final_error(&fd_solve(&p, h, 0.5 * h).unwrap(), u.as_ref())
    };
    let (e1, e2) = (err(0.02), err(0.01));
    let ratio = e1 / e2;
    assert!((ratio - 4.0).abs() <= 0.8, "{e1} {e2} ratio {ratio}");
}

#[test]
fn neumann_ghosts_on_the_interval() {
    let u = standing(true);
    let p = FdProblem::manufactured(unit_interval(), 1.0, BvpKind::Neumann, u.clone(), Arc::new(Zero), 2.0);
    let sol = fd_solve(&p, 0.01, 0.005).unwrap();
    assert!(final_error(&sol, u.as_ref()) < 1e-3);
}

#[test]
fn zero_data_gives_a_zero_field() {
    let zero: Arc<dyn Field> = Arc::new(Zero);
    for (g, kind) in [(unit_interval(), BvpKind::Neumann), (square(), BvpKind::Dirichlet), (disk(), BvpKind::Dirichlet)] {
        let p = FdProblem::manufactured(g, 1.0, kind, zero.clone(), Arc::new(Zero), 0.5);
        let sol = fd_solve(&p, 0.05, 0.025).unwrap();
        for k in 0..=sol.steps() {
            assert!(sol.level(k).iter().enumerate().all(|(n, v)| !sol.is_inside(n) || *v == 0.0));
        }
    }
}

#[test]
fn square_plane_wave_both_kinds() {
    let u = plane_wave();
    for kind in [BvpKind::Dirichlet, BvpKind::Neumann] {
        let p = FdProblem::manufactured(square(), 1.0, kind, u.clone(), Arc::new(Zero), 1.0);
        let e1 = final_error(&fd_solve(&p, 0.05, 0.025).unwrap(), u.as_ref());
        let e2 = final_error(&fd_solve(&p, 0.025, 0.0125).unwrap(), u.as_ref());
        assert!(e2 < 1e-2 && e1 / e2 > 2.5, "{kind:?}: {e1} {e2}");
    }
}

#[test]
fn disk_plane_wave_with_shortley_weller_arms() {
    let u = plane_wave();
    let p = FdProblem::manufactured(disk(), 1.0, BvpKind::Dirichlet, u.clone(), Arc::new(Zero), 1.5);
    let e1 = final_error(&fd_solve(&p, 0.025, 0.015).unwrap(), u.as_ref());
    let e2 = final_error(&fd_solve(&p, 0.0125, 0.0075).unwrap(), u.as_ref());
    assert!(e2 < 1e-3 && e1 / e2 > 3.0, "{e1} {e2}");
}

#[test]
fn radial_pulse_self_converges() {
    let pulse: Arc<dyn Field> = Arc::new(FnField(|x: &Point, _t: f64| (-(x.norm_squared()) / 0.09).exp()));
    let mut p = FdProblem::manufactured(disk(), 1.0, BvpKind::Dirichlet, Arc::new(Zero), Arc::new(Zero), 0.8);
    p.cauchy = CauchyData { displacement: pulse, velocity: Arc::new(Zero), source: Arc::new(Zero) };
    let coarse = fd_solve(&p, 0.02, 0.01).unwrap();
    let fine = fd_solve(&p, 0.01, 0.005).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..40 {
        for j in 0..40 {
            let x = Point::new(-0.95 + 1.9 * i as f64 / 39.0, -0.95 + 1.9 * j as f64 / 39.0, 0.0);
            if x.norm() < 0.9 {
                let (a, b) = (coarse.value(&x, 0.8), fine.value(&x, 0.8));
                num += (a - b).powi(2);
                den += b * b;
            }
        }
    }
    let rel = (num / den).sqrt();
    assert!(rel < 0.01, "{rel}");
}

#[test]
fn courant_limit_is_enforced() {
    let u = standing(false);
    let p1 = FdProblem::manufactured(unit_interval(), 1.0, BvpKind::Dirichlet, u.clone(), Arc::new(Zero), 0.5);
    assert!(fd_solve(&p1, 0.1, 0.1).is_ok());
    assert!(matches!(fd_solve(&p1, 0.1, 0.11), Err(WaveError::Stability(_))));
    let p2 = FdProblem::manufactured(square(), 1.0, BvpKind::Dirichlet, u, Arc::new(Zero), 0.5);
    assert!(matches!(fd_solve(&p2, 0.1, 0.08), Err(WaveError::Stability(_))));
}

#[test]
fn runs_are_bit_identical() {
    let u = plane_wave();
    let p = FdProblem::manufactured(disk(), 1.0, BvpKind::Dirichlet, u, Arc::new(Zero), 0.5);
    let a = fd_solve(&p, 0.05, 0.03).unwrap();
    let b = fd_solve(&p, 0.05, 0.03).unwrap();
    for k in 0..=a.steps() {
        assert!(a.level(k).iter().zip(b.level(k)).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn unsupported_setups_are_refused() {
    let u = plane_wave();
    let p = FdProblem::manufactured(disk(), 1.0, BvpKind::Neumann, u.clone(), Arc::new(Zero), 0.5);
    assert!(matches!(fd_solve(&p, 0.05, 0.03), Err(WaveError::Misuse(_))));
    let ball = BoundaryGeometry::Surface(crate::geometry::Surface::icosphere(Point::zeros(), 1.0, 0).unwrap());
    let p = FdProblem::manufactured(ball, 1.0, BvpKind::Dirichlet, u.clone(), Arc::new(Zero), 0.5);
    assert!(matches!(fd_solve(&p, 0.05, 0.03), Err(WaveError::Misuse(_))));
    let p = FdProblem::manufactured(square(), 1.0, BvpKind::Dirichlet, u, Arc::new(Zero), 0.5);
    assert!(matches!(fd_solve(&p, -0.05, 0.03), Err(WaveError::Config(_))));
}

#[test]
fn field_interface_interpolates_value_rate_and_gradient() {
    let u = plane_wave();
    let p = FdProblem::manufactured(square(), 1.0, BvpKind::Dirichlet, u.clone(), Arc::new(Zero), 1.0);
    let sol = fd_solve(&p, 0.01, 0.005).unwrap();
    let x = Point::new(0.437, 0.561, 0.0);
    let t = 0.7123;
    assert!((sol.value(&x, t) - u.value(&x, t)).abs() < 1e-3);
    assert!((sol.time_derivative(&x, t) - u.time_derivative(&x, t)).abs() < 1e-2);
    assert!((sol.gradient(&x, t) - u.gradient(&x, t)).norm() < 1e-2);
    assert!(sol.value(&Point::new(2.0, 0.5, 0.0), t).is_nan());
}

#[test]
fn scenario_data_drive_the_oracle() {
    let u = Arc::new(analytic_reference(AnalyticKind::StandingMode1d { k: PI, cosine: false }, 1.0).unwrap());
    let grid = crate::geometry::TimeGrid::new(1.0, 0.01, 100).unwrap();
    let sc = Scenario::manufactured(unit_interval(), grid, BvpKind::Dirichlet, &u).unwrap();
    let sol = fd_reference(&sc, 0.01, 0.005).unwrap();
    assert!(final_error(&sol, u.as_ref()) < 1e-3);
}

