//! Marching-on-in-time on a 162-node sphere for an outgoing spherical
//! wave, then the interior field from the solved flux.

use std::sync::Arc;

use wavebie::bie::{solve, BvpKind, Scenario};
use wavebie::field::Field;
use wavebie::geometry::{BoundaryGeometry, Point, Surface, TimeGrid};
use wavebie::oracle::{analytic_reference, AnalyticKind, Profile};
use wavebie::representation::{represent, BoundaryData};

fn main() -> wavebie::Result<()> {
    let kind = AnalyticKind::SphericalOutgoing { center: Point::new(2.0, 0.0, 0.0), profile: Profile::Power { n: 3 }, r0: 1.0 };
    let u = Arc::new(analytic_reference(kind, 1.0)?);
    let geom = BoundaryGeometry::Surface(Surface::icosphere(Point::zeros(), 1.0, 2)?);
    let grid = TimeGrid::new(1.0, 0.3, 10)?;
    let sc = Scenario::manufactured(geom.clone(), grid, BvpKind::Dirichlet, &u)?;
    let data = solve(&sc)?;
    let exact = BoundaryData::sample(&geom, &grid, u.as_ref());
    let num: f64 = data.flux.values().iter().zip(exact.flux.values()).map(|(a, b)| (a - b) * (a - b)).sum();
    let den: f64 = exact.flux.values().iter().map(|b| b * b).sum();
    println!("flux relative L2 error {:.4}", (num / den).sqrt());
    let x = Point::new(-0.3, 0.2, 0.1);
    for t in [1.5, 3.0] {
        let v = represent(&geom, &grid, &data, &sc.cauchy, &x, t, &sc.rule)?;
        println!("u({t}) = {v:.6}, exact {:.6}", u.value(&x, t));
    }
    Ok(())
}
