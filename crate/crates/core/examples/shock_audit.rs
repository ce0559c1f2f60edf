//! Jump conditions across a front: exact on the 1D ramp, and converging on
//! a finite-difference field in a rectangle.

use std::sync::Arc;

use wavebie::field::CauchyData;
use wavebie::geometry::{BoundaryGeometry, Curve, Interval, Point};
use wavebie::oracle::{analytic_reference, fd_solve, AnalyticKind, BoundaryValue, FdProblem};
use wavebie::bie::BvpKind;
use wavebie::verify::{shock_jump_report, FieldProbe, FrontSet};

fn main() -> wavebie::Result<()> {
    let ramp = Arc::new(analytic_reference(AnalyticKind::RampShock1d { v: 1.0 }, 1.0)?);
    let iv = BoundaryGeometry::Interval(Interval::new(0.0, 1.0)?);
    let front = FrontSet::new(vec![Point::zeros()], 1.0, 1e-6)?;
    let r = shock_jump_report(&iv, &FieldProbe::new(ramp), &front, 0.5, 2)?;
    println!("ramp: largest jump {:.2e} over {} samples", r.worst(), r.samples.len());

    let p = |x, y| Point::new(x, y, 0.0);
    let rect = BoundaryGeometry::Curve(Curve::polyline(vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 1.0), p(0.0, 1.0)])?);
    let boundary: BoundaryValue = Arc::new(|y: &Point, _: &Point, t: f64| if y.x.abs() < 1e-12 { t } else { 0.0 });
    let prob = FdProblem { geometry: rect.clone(), c: 1.0, kind: BvpKind::Dirichlet, boundary, cauchy: CauchyData::zero(), horizon: 0.7 };
    let seeds: Vec<Point> = (3..=7).map(|k| p(0.0, k as f64 / 10.0)).collect();
    for h in [0.02, 0.01, 0.005] {
        let field = Arc::new(fd_solve(&prob, h, 0.5 * h)?);
        let front = FrontSet::new(seeds.clone(), 1.0, h)?;
        let r = shock_jump_report(&rect, &FieldProbe::new(field), &front, 0.6, 8)?;
        println!("h = {h}: max Hadamard jump {:.3e}", r.max_hadamard);
    }
    Ok(())
}
