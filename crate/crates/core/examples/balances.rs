//! Energy and Lagrangian balances for a standing mode and a plane wave on
//! the disk.

use std::f64::consts::PI;
use std::sync::Arc;

use wavebie::bie::{BvpKind, Scenario};
use wavebie::geometry::{BoundaryGeometry, Curve, Interval, Point, TimeGrid};
use wavebie::oracle::{analytic_reference, AnalyticKind, Profile};
use wavebie::verify::{energy_balance_residual, lagrangian_balance_residual, total_energy, BalanceRule, FieldProbe};

fn main() -> wavebie::Result<()> {
    let cases = [
        (BoundaryGeometry::Interval(Interval::new(0.0, 1.0)?), AnalyticKind::StandingMode1d { k: PI, cosine: false }),
        (
            BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, 64)?),
            AnalyticKind::PlaneWave { profile: Profile::Sin { omega: 2.0, phase: 0.3 }, direction: Point::new(0.6, 0.8, 0.0) },
        ),
    ];
    let rule = BalanceRule::default();
    for (geom, kind) in cases {
        let u = Arc::new(analytic_reference(kind, 1.0)?);
        let sc = Scenario::manufactured(geom, TimeGrid::new(1.0, 0.05, 40)?, BvpKind::Dirichlet, &u)?;
        let probe = FieldProbe::new(u.clone());
        for t in [0.5, 1.5] {
            let e = total_energy(&sc, &probe, t, &rule)?;
            let de = energy_balance_residual(&sc, &probe, t, &rule)?;
            let dl = lagrangian_balance_residual(&sc, &probe, t, &rule)?;
            println!("N = {} t = {t}: energy {e:.6}, residuals {de:.2e} {dl:.2e}", sc.geometry.dimension());
        }
    }
    Ok(())
}
