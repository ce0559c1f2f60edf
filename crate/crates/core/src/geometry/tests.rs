use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;

fn unit_circle(n: usize) -> BoundaryGeometry {
    BoundaryGeometry::Curve(Curve::circle(Point::zeros(), 1.0, n).unwrap())
}

#[test]
fn characteristic_function_on_circle() {
    let g = unit_circle(64);
    assert_eq!(g.characteristic_function(&Point::new(0.0, 0.0, 0.0)), 1.0);
    assert_eq!(g.characteristic_function(&Point::new(1.0, 0.0, 0.0)), 0.5);
    assert_eq!(g.characteristic_function(&Point::new(2.0, 0.0, 0.0)), 0.0);
}

#[test]
fn truncate_boundary_examples() {
    let g = unit_circle(64);
    assert!(g.truncate_boundary(&Point::zeros(), 0.5).is_empty());
    let full = g.truncate_boundary(&Point::zeros(), 2.0);
    assert!((full.measure(&g) - 2.0 * PI).abs() < 1e-10);
    // sampling oracle: fraction of 2e6 equispaced points with r < 0.2
    let x = Point::new(0.9, 0.0, 0.0);
    let n = 2_000_000;
    let hits = (0..n)
        .filter(|k| {
            let s = 2.0 * PI * (*k as f64 + 0.5) / n as f64;
            (Point::new(s.cos(), s.sin(), 0.0) - x).norm() < 0.2
        })
        .count();
    let sampled = 2.0 * PI * hits as f64 / n as f64;
    let arc = g.truncate_boundary(&x, 0.2).measure(&g);
    assert!((arc - sampled).abs() < 1e-4, "{arc} vs {sampled}");
    assert!((arc - 0.3654).abs() < 1e-3);
}

#[test]
fn truncate_domain_areas() {
    let g = unit_circle(64);
    let grid = VolumeGrid::covering(&g, 40.0);
    let area = |ct: f64| -> f64 {
        g.truncate_domain(&grid, &Point::zeros(), ct).unwrap().iter().map(|c| c.measure).sum()
    };
    assert!((area(0.5) - PI / 4.0).abs() < 2e-3);
    assert_eq!(area(0.0), 0.0);
    assert!((area(3.0) - PI).abs() < 5e-3);
    let small = VolumeGrid { origin: Point::zeros(), spacing: 0.1, counts: [3, 3, 1], cut_depth: 2 };
    assert!(matches!(g.truncate_domain(&small, &Point::zeros(), 1.0), Err(WaveError::Coverage(_))));
}

#[test]
fn max_retarded_time_examples() {
    let g = unit_circle(64);
    assert!((g.max_retarded_time(&Point::zeros(), 1.0) - 1.0).abs() < 1e-12);
    assert!((g.max_retarded_time(&Point::zeros(), 2.0) - 0.5).abs() < 1e-12);
    assert!((g.max_retarded_time(&Point::new(0.5, 0.0, 0.0), 1.0) - 1.5).abs() < 1e-9);
}

#[test]
fn interval_normals_and_rejects_degenerate() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    assert_eq!(iv.normals(), [-1.0, 1.0]);
    assert!(Interval::new(1.0, 1.0).is_err());
    assert!(Curve::polyline(vec![Point::zeros(), Point::new(1.0, 0.0, 0.0), Point::new(2.0, 0.0, 0.0)]).is_err());
}

#[test]
fn surface_normals_unit_and_outward() {
    let s = Surface::icosphere(Point::zeros(), 1.0, 2).unwrap();
    for t in 0..s.triangles().len() {
        let n = s.normal(t);
        assert!((n.norm() - 1.0).abs() < 1e-12);
        let c = s.corners(t);
        assert!(n.dot(&((c[0] + c[1] + c[2]) / 3.0)) > 0.0);
    }
    let g = BoundaryGeometry::Surface(s);
    assert_eq!(g.characteristic_function(&Point::new(0.1, 0.2, -0.1)), 1.0);
    assert_eq!(g.characteristic_function(&Point::new(1.5, 0.0, 0.0)), 0.0);
}

#[test]
fn time_grid_validation() {
    assert!(TimeGrid::new(0.0, 0.1, 10).is_err());
    assert!(TimeGrid::new(1.0, -0.1, 10).is_err());
    assert!(TimeGrid::new(1.0, 0.1, 0).is_err());
    let g = TimeGrid::new(2.0, 0.1, 10).unwrap();
    assert!((g.horizon() - 1.0).abs() < 1e-15);
}

fn square() -> BoundaryGeometry {
    BoundaryGeometry::Curve(
        Curve::polyline(vec![
            Point::new(-1.0, -1.0, 0.0),
            Point::new(1.0, -1.0, 0.0),
            Point::new(1.0, 1.0, 0.0),
            Point::new(-1.0, 1.0, 0.0),
        ])
        .unwrap(),
    )
}

fn star() -> BoundaryGeometry {
    let pts = (0..10)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 10.0;
            let r = if k % 2 == 0 { 1.0 } else { 0.5 };
            Point::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect();
    BoundaryGeometry::Curve(Curve::polyline(pts).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn clipped_measure_monotone(x0 in -0.9f64..0.9, y0 in -0.4f64..0.4, a in 0.0f64..2.5, b in 0.0f64..2.5) {
        let g = unit_circle(48);
        let x = Point::new(x0, y0, 0.0);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let m0 = g.truncate_boundary(&x, lo).measure(&g);
        let m1 = g.truncate_boundary(&x, hi).measure(&g);
        prop_assert!(m1 + 1e-12 >= m0);
    }

    #[test]
    fn full_clip_beyond_max_retarded_time(x0 in -2.0f64..2.0, y0 in -2.0f64..2.0) {
        for g in [unit_circle(32), square(), star()] {
            let x = Point::new(x0, y0, 0.0);
            let ct = g.max_retarded_time(&x, 1.0) * (1.0 + 1e-9) + 1e-9;
            let m = g.truncate_boundary(&x, ct).measure(&g);
            prop_assert!((m - g.measure()).abs() < 1e-10, "{} vs {}", m, g.measure());
        }
    }

    #[test]
    fn characteristic_matches_winding(x0 in -1.5f64..1.5, y0 in -1.5f64..1.5) {
        let x = Point::new(x0, y0, 0.0);
        for g in [square(), star()] {
            let chi = g.characteristic_function(&x);
            if chi != 0.5 {
                let BoundaryGeometry::Curve(c) = &g else { unreachable!() };
                prop_assert_eq!(chi, c.winding_number(&x));
            }
        }
    }
}
