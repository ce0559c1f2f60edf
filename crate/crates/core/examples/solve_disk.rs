//! Marching-on-in-time on the unit disk: flux recovery for a Dirichlet
//! plane wave under refinement, then the Neumann problem.

use std::sync::Arc;

use wavebie::bie::{solve, BvpKind, Scenario};
use wavebie::field::TraceSeries;
use wavebie::geometry::{BoundaryGeometry, Curve, Point, TimeGrid};
use wavebie::oracle::{analytic_reference, AnalyticKind, Profile};
use wavebie::representation::BoundaryData;

fn rel_l2(a: &TraceSeries, b: &TraceSeries) -> f64 {
    let num: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.values().iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

fn main() -> wavebie::Result<()> {
    let kind = AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 2.0, phase: 0.3 }, direction: Point::new(0.6, 0.8, 0.0) };
    let u = Arc::new(analytic_reference(kind, 1.0)?);
    for (nodes, dt) in [(32, 0.2), (64, 0.1)] {
        let geom = BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, nodes)?);
        let grid = TimeGrid::new(1.0, dt, (2.0 / dt).round() as usize)?;
        let exact = BoundaryData::sample(&geom, &grid, u.as_ref());
        for bvp in [BvpKind::Dirichlet, BvpKind::Neumann] {
            let sc = Scenario::manufactured(geom.clone(), grid, bvp, &u)?;
            let data = solve(&sc)?;
            let err = match bvp {
                BvpKind::Dirichlet => rel_l2(&data.flux, &exact.flux),
                BvpKind::Neumann => rel_l2(&data.trace, &exact.trace),
            };
            println!("{nodes} nodes, Δt = {dt}, {bvp:?}: relative L2 error {err:.4}");
        }
    }
    Ok(())
}
