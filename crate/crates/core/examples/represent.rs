//! Interior field from boundary traces on the interval, disk and ball,
//! compared with a plane-wave solution.

use std::sync::Arc;

use wavebie::field::Field;
use wavebie::geometry::{BoundaryGeometry, Curve, Interval, Point, Surface, TimeGrid};
use wavebie::oracle::{analytic_reference, AnalyticKind, Profile};
use wavebie::representation::{represent, BoundaryData, RepresentationRule};

fn main() -> wavebie::Result<()> {
    let profile = Profile::Sin { omega: 2.0, phase: 0.3 };
    let cases = [
        (BoundaryGeometry::Interval(Interval::new(0.0, 1.0)?), Point::new(1.0, 0.0, 0.0), Point::new(0.4, 0.0, 0.0), 0.01),
        (BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, 64)?), Point::new(0.6, 0.8, 0.0), Point::new(0.3, -0.2, 0.0), 0.1),
        (BoundaryGeometry::Surface(Surface::icosphere(Point::zeros(), 1.0, 2)?), Point::new(0.48, 0.6, 0.64), Point::new(0.3, -0.2, 0.1), 0.2),
    ];
    for (geom, direction, x, dt) in cases {
        let u = Arc::new(analytic_reference(AnalyticKind::PlaneWave { profile, direction }, 1.0)?);
        let grid = TimeGrid::new(1.0, dt, (2.0 / dt).round() as usize)?;
        let traces = BoundaryData::sample(&geom, &grid, u.as_ref());
        for t in [0.5, 1.2, 2.0] {
            let v = represent(&geom, &grid, &traces, &u.cauchy(), &x, t, &RepresentationRule::default())?;
            println!("N = {} t = {t}: u = {v:.6}, exact {:.6}", geom.dimension(), u.value(&x, t));
        }
    }
    Ok(())
}
