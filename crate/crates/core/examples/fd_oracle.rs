//! Finite-difference reference on the disk against the boundary-integral
//! field built from solved traces.

use std::sync::Arc;

use wavebie::bie::{solve, BvpKind, Scenario};
use wavebie::field::Field;
use wavebie::geometry::{BoundaryGeometry, Curve, Point, TimeGrid};
use wavebie::oracle::{analytic_reference, fd_reference, AnalyticKind, Profile};
use wavebie::representation::represent;

fn main() -> wavebie::Result<()> {
    let kind = AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 2.0, phase: 0.3 }, direction: Point::new(0.6, 0.8, 0.0) };
    let u = Arc::new(analytic_reference(kind, 1.0)?);
    let geom = BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, 64)?);
    let sc = Scenario::manufactured(geom.clone(), TimeGrid::new(1.0, 0.1, 20)?, BvpKind::Dirichlet, &u)?;
    let fd = fd_reference(&sc, 0.02, 0.01)?;
    let data = solve(&sc)?;
    for x in [Point::zeros(), Point::new(0.3, -0.2, 0.0), Point::new(-0.5, 0.4, 0.0)] {
        for t in [1.0, 2.0] {
            let b = represent(&geom, &sc.grid, &data, &sc.cauchy, &x, t, &sc.rule)?;
            println!("({}, {}) t = {t}: fd {:.6}, bie {b:.6}, exact {:.6}", x.x, x.y, fd.value(&x, t), u.value(&x, t));
        }
    }
    Ok(())
}
