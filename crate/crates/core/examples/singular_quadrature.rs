//! Retarded boundary truncation and the singular boundary integrals on the
//! unit circle and the unit sphere.

use wavebie::field::{TraceKind, TraceSeries};
use wavebie::geometry::{BoundaryGeometry, Curve, Point, Surface, TimeGrid};
use wavebie::quadrature::{free_term, integrate_principal_value, integrate_weakly_singular, QuadratureRule};

fn main() -> wavebie::Result<()> {
    let disk = BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, 64)?);
    let rule = QuadratureRule::default();

    // ∫_S dS ∫ dτ/√(c²τ²-r²) for a unit density, seen from the centre
    let grid = TimeGrid::new(1.0, 0.1, 20)?;
    let mut one = TraceSeries::zeros(TraceKind::Flux, disk.node_count(), &grid);
    for i in 0..disk.node_count() {
        for k in 0..=grid.steps {
            one.set(i, k, 1.0);
        }
    }
    let v = integrate_weakly_singular(&disk, &Point::zeros(), 2.0, 1.0, &one, &rule)?;
    println!("weakly singular integral: {v:.6} (closed form 2π acosh 2 = {:.6})", 2.0 * std::f64::consts::PI * 2f64.acosh());

    let x = Point::new(0.9, 0.0, 0.0);
    for ct in [0.15, 0.5, 1.0, 2.0] {
        let clip = disk.truncate_boundary(&x, ct);
        println!("ct = {ct}: clipped length {:.6}", clip.measure(&disk));
    }

    // at a mesh vertex the principal value is the discrete solid angle, 4π times the free term
    let ball = BoundaryGeometry::Surface(Surface::icosphere(Point::zeros(), 1.0, 3)?);
    let y = ball.node_point(17);
    let pv = integrate_principal_value(&ball, &y, &|_| 1.0, 1e-6, &rule)?;
    let f = free_term(&ball, &y)?;
    println!("sphere vertex: PV {pv:.6}, 4π × free term {:.6} (free term {f:.6})", 4.0 * std::f64::consts::PI * f);
    Ok(())
}
