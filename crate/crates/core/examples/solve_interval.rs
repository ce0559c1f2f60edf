//! Endpoint recursion on [0, 1]: the flux of a standing mode from its trace,
//! and the trace from its flux.

use std::f64::consts::PI;
use std::sync::Arc;

use wavebie::bie::{boundary_residual, solve_1d_endpoints, BvpKind, Scenario};
use wavebie::geometry::{BoundaryGeometry, Interval, TimeGrid};
use wavebie::oracle::{analytic_reference, AnalyticKind};

fn main() -> wavebie::Result<()> {
    let geom = BoundaryGeometry::Interval(Interval::new(0.0, 1.0)?);
    let grid = TimeGrid::new(1.0, 1e-3, 2000)?;
    let u = Arc::new(analytic_reference(AnalyticKind::StandingMode1d { k: PI, cosine: false }, 1.0)?);
    let sc = Scenario::manufactured(geom.clone(), grid, BvpKind::Dirichlet, &u)?;
    let data = solve_1d_endpoints(&sc)?;
    for k in [0, 500, 1000, 1500, 2000] {
        let t = grid.time(k);
        // outward flux at x = 0 is -π cos(πt)
        println!("t = {t:.3}: p(0) = {:+.6}, exact {:+.6}", data.flux.get(0, k), -PI * (PI * t).cos());
    }
    println!("max residual {:.3e}", boundary_residual(&sc, &data)?.max_abs());

    let v = Arc::new(analytic_reference(AnalyticKind::StandingMode1d { k: PI, cosine: true }, 1.0)?);
    let sc = Scenario::manufactured(geom, grid, BvpKind::Neumann, &v)?;
    let data = solve_1d_endpoints(&sc)?;
    println!("Neumann: u(1, 1.3) = {:+.6}, exact {:+.6}", data.trace.get(1, 1300), -(PI * 1.3).cos());
    Ok(())
}
