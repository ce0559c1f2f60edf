//! Static and dynamic Gauss formulas as self-tests of the boundary
//! quadrature.

use wavebie::geometry::{BoundaryGeometry, Curve, Point, Surface, TimeGrid};
use wavebie::quadrature::QuadratureRule;
use wavebie::representation::RepresentationRule;
use wavebie::verify::{gauss_dynamic, gauss_expected, gauss_static_3d};

fn main() -> wavebie::Result<()> {
    let sphere = Surface::icosphere(Point::zeros(), 1.0, 3)?;
    let c = sphere.corners(7);
    let on_facet = (c[0] + c[1] + c[2]) / 3.0;
    let ball = BoundaryGeometry::Surface(sphere);
    for x in [Point::new(0.2, -0.1, 0.3), Point::new(1.5, 0.0, 0.2), on_facet] {
        let v = gauss_static_3d(&ball, &x, &QuadratureRule::default())?;
        println!("static at {:?}: {v:.6} (expected {:.6})", (x.x, x.y, x.z), gauss_expected(&ball, &x, 1.0));
    }

    let disk = BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, 64)?);
    let grid = TimeGrid::new(1.0, 0.1, 40)?;
    let x = Point::new(0.4, 0.3, 0.0);
    for t in [0.2, 0.9, 2.0, 3.5] {
        let v = gauss_dynamic(&disk, &grid, &x, t, &RepresentationRule::default())?;
        println!("dynamic, t = {t}: {v:.6} (2π = {:.6})", 2.0 * std::f64::consts::PI);
    }
    Ok(())
}
