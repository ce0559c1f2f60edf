//! Volume integrals over `S⁻` along rays from an interior pole.

use std::f64::consts::PI;

use crate::error::{Result, WaveError};
use crate::geometry::{BoundaryGeometry, Point};
use crate::quadrature::polar::{angle_breaks, integrate_angles, planar_ray, sphere_direction, SphereRule};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone)]
pub struct VolumeRule {
    pub radial: GaussLegendre,
    /// Radial (or, for N = 1, axial) panels per unit length.
    pub panels_per_unit: f64,
    pub angular: GaussLegendre,
    pub angle_width: f64,
    pub sphere: SphereRule,
}

impl Default for VolumeRule {
    fn default() -> Self {
        VolumeRule {
            radial: GaussLegendre::new(10),
            panels_per_unit: 8.0,
            angular: GaussLegendre::new(12),
            angle_width: 0.25,
            sphere: SphereRule { azimuths: 48, scan: 24, polar: GaussLegendre::new(12) },
        }
    }
}

/// A pole inside `S⁻`: the node centroid when it lies inside, otherwise
/// the first inside point of a coarse scan of the bounding box.
pub fn interior_pole(geom: &BoundaryGeometry) -> Result<Point> {
    let n = geom.node_count();
    let mut g = Point::zeros();
    for i in 0..n {
        g += geom.node_point(i);
    }
    g /= n as f64;
    if geom.characteristic_function(&g) == 1.0 {
        return Ok(g);
    }
    let (lo, hi) = geom.bounding_box();
    let dim = geom.dimension();
    let m: usize = 16;
    let mut best: Option<(f64, Point)> = None;
    for idx in 0..m.pow(dim as u32) {
        let mut p = Point::zeros();
        let mut k = idx;
        for d in 0..dim {
            let i = k % m;
            k /= m;
            p[d] = lo[d] + (hi[d] - lo[d]) * (i as f64 + 0.5) / m as f64;
        }
        if geom.characteristic_function(&p) == 1.0 {
            let d = geom.distance_to_boundary(&p);
            if best.is_none_or(|(b, _)| d > b) {
                best = Some((d, p));
            }
        }
    }
    best.map(|b| b.1).ok_or_else(|| WaveError::Domain("no interior point found for volume quadrature".into()))
}

/// Sign changes of `level` on `[a, b]` along `y(s)`, located by scanning
/// and bisection.
fn level_breaks(a: f64, b: f64, samples: usize, at: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut s0 = a;
    let mut v0 = at(a);
    for i in 1..=samples {
        let s1 = a + (b - a) * i as f64 / samples as f64;
        let v1 = at(s1);
        if (v0 < 0.0) != (v1 < 0.0) {
            let (mut lo, mut hi) = (s0, s1);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if (at(m) < 0.0) == (v0 < 0.0) {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        s0 = s1;
        v0 = v1;
    }
    out
}

/// `∫_a^b f` along one line with panels of length at most `1/panels_per_unit`,
/// split where `level` changes sign.
fn integrate_line(rule: &VolumeRule, a: f64, b: f64, level: Option<&dyn Fn(f64) -> f64>, f: &dyn Fn(f64) -> f64) -> f64 {
    let mut cuts = vec![a, b];
    let count = ((b - a) * rule.panels_per_unit).ceil().max(1.0) as usize;
    if let Some(level) = level {
        cuts.extend(level_breaks(a, b, 8 * count, level));
    }
    cuts.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let n = ((hi - lo) * rule.panels_per_unit).ceil().max(1.0) as usize;
        let h = (hi - lo) / n as f64;
        for p in 0..n {
            acc += rule.radial.integrate(lo + p as f64 * h, lo + (p + 1) as f64 * h, f);
        }
    }
    acc
}

/// `∫_{S⁻} f dV`. When `level` is given, panels are also split where it
/// changes sign (a front crossing, say).
pub fn integrate_domain(geom: &BoundaryGeometry, rule: &VolumeRule, level: Option<&dyn Fn(&Point) -> f64>, f: &dyn Fn(&Point) -> f64) -> Result<f64> {
    match geom {
        BoundaryGeometry::Interval(iv) => {
            let at = |s: f64| Point::new(s, 0.0, 0.0);
            let lv = level.map(|l| move |s: f64| l(&at(s)));
            let lref = lv.as_ref().map(|l| l as &dyn Fn(f64) -> f64);
            Ok(integrate_line(rule, iv.a1, iv.a2, lref, &|s| f(&at(s))))
        }
        BoundaryGeometry::Curve(c) => {
            let x0 = interior_pole(geom)?;
            let breaks = angle_breaks(c, &x0, &[], false);
            let reach = 2.0 * geom.diameter();
            Ok(integrate_angles(&breaks, &rule.angular, rule.angle_width, |th| {
                let e = Point::new(th.cos(), th.sin(), 0.0);
                let at = |rho: f64| x0 + e * rho;
                let lv = level.map(|l| move |rho: f64| l(&at(rho)));
                let lref = lv.as_ref().map(|l| l as &dyn Fn(f64) -> f64);
                planar_ray(geom, &x0, th, reach)
                    .iter()
                    .map(|&(a, b)| integrate_line(rule, a, b, lref, &|rho| rho * f(&at(rho))))
                    .sum()
            }))
        }
        BoundaryGeometry::Surface(_) => {
            let x0 = interior_pole(geom)?;
            let reach = 2.0 * geom.diameter();
            let sr = &rule.sphere;
            let mut acc = 0.0;
            for j in 0..sr.azimuths {
                let phi = 2.0 * PI * (j as f64 + 0.5) / sr.azimuths as f64;
                let along = |th: f64| {
                    let e = sphere_direction(th, phi);
                    let at = |rho: f64| x0 + e * rho;
                    let lv = level.map(|l| move |rho: f64| l(&at(rho)));
                    let lref = lv.as_ref().map(|l| l as &dyn Fn(f64) -> f64);
                    geom.ray_inside_intervals(&x0, &e, reach)
                        .iter()
                        .map(|&(a, b)| integrate_line(rule, a, b, lref, &|rho| rho * rho * f(&at(rho))))
                        .sum::<f64>()
                };
                let panels = (PI / rule.angle_width).ceil() as usize;
                let h = PI / panels as f64;
                let mut sum = 0.0;
                for p in 0..panels {
                    sum += sr.polar.integrate(p as f64 * h, (p + 1) as f64 * h, |th| th.sin() * along(th));
                }
                acc += sum * 2.0 * PI / sr.azimuths as f64;
            }
            Ok(acc)
        }
    }
}

/// `∮_S f(y, n(y)) dS` with `order`-point rules per element (a Duffy
/// tensor rule on triangles); for N = 1 the sum over both endpoints.
pub fn integrate_boundary(geom: &BoundaryGeometry, order: usize, f: &dyn Fn(&Point, &Point) -> f64) -> f64 {
    let gl = GaussLegendre::new(order);
    match geom {
        BoundaryGeometry::Interval(iv) => (0..2)
            .map(|k| f(&Point::new(iv.endpoint(k), 0.0, 0.0), &Point::new(iv.normals()[k], 0.0, 0.0)))
            .sum(),
        BoundaryGeometry::Curve(c) => (0..c.element_count())
            .map(|e| {
                let (s0, s1) = c.element_range(e);
                gl.integrate(s0, s1, |s| f(&c.element_position(e, s), &c.element_normal(e, s)) * c.jacobian(s))
            })
            .sum(),
        BoundaryGeometry::Surface(s) => (0..s.triangles().len())
            .map(|t| {
                let [a, b, cc] = s.corners(t);
                let n = s.normal(t);
                let area2 = 2.0 * s.area(t);
                gl.integrate(0.0, 1.0, |u| {
                    gl.integrate(0.0, 1.0, |v| {
                        let y = a + (b - a) * u + (cc - b) * (u * v);
                        f(&y, &n) * u
                    })
                }) * area2
            })
            .sum(),
    }
}
