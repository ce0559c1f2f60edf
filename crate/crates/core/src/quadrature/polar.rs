//! Ray (polar) integration about a field point: angular breakpoints for
//! planar domains and inside-direction quadrature on spheres.

use std::f64::consts::PI;

use crate::geometry::{closest_point_on_triangle, BoundaryGeometry, Curve, CurveShape, Point, Surface};
use crate::quadrature::GaussLegendre;

fn angle_of(v: &Point) -> f64 {
    v.y.atan2(v.x).rem_euclid(2.0 * PI)
}

/// Directions about `x` at which the ray structure of a planar domain
/// changes: polyline vertices, points of `S` at the given radii, and the
/// tangent directions at `x` when `x` lies on `S`.
pub fn angle_breaks(c: &Curve, x: &Point, radii: &[f64], on_boundary: bool) -> Vec<f64> {
    let mut out = Vec::new();
    let tol = 1e-12 * (1.0 + x.norm());
    if let CurveShape::Polyline(p) = c.shape() {
        for v in p {
            if (v - x).norm() > tol {
                out.push(angle_of(&(v - x)));
            }
        }
    }
    for e in 0..c.element_count() {
        for &r in radii {
            for s in c.radius_crossings(e, x, r) {
                out.push(angle_of(&(c.element_position(e, s) - x)));
            }
        }
    }
    if on_boundary {
        for e in 0..c.element_count() {
            if let Some(s) = super::curve::locate_on_element(c, e, x, tol.max(1e-9 * (1.0 + x.norm()))) {
                let t = c.element_tangent(e, s);
                out.push(angle_of(&t));
                out.push(angle_of(&-t));
            }
        }
        for i in 0..c.node_count() {
            if (c.node_point(i) - x).norm() <= 1e-9 {
                let n = c.element_count();
                let sa = c.node_param(i);
                for e in [i, (i + n - 1) % n] {
                    let t = c.element_tangent(e, sa);
                    out.push(angle_of(&t));
                    out.push(angle_of(&-t));
                }
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    out
}

/// `∫₀^{2π} f(θ) dθ` with graded rules between consecutive breakpoints
/// and panels no wider than `max_width`.
pub fn integrate_angles(breaks: &[f64], rule: &GaussLegendre, max_width: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut b: Vec<f64> = breaks.to_vec();
    if b.is_empty() {
        b.push(0.0);
    }
    let n = b.len();
    let mut acc = 0.0;
    for k in 0..n {
        let lo = b[k];
        let hi = if k + 1 < n { b[k + 1] } else { b[0] + 2.0 * PI };
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        let panels = (span / max_width).ceil().max(1.0) as usize;
        let h = span / panels as f64;
        for p in 0..panels {
            let a = lo + p as f64 * h;
            // grade only panels that touch a breakpoint
            if panels == 1 || p == 0 || p + 1 == panels {
                acc += rule.integrate_graded(a, a + h, &f);
            } else {
                acc += rule.integrate(a, a + h, &f);
            }
        }
    }
    acc
}

/// Ray-inside intervals for the direction `theta` in the plane.
pub fn planar_ray(geom: &BoundaryGeometry, x: &Point, theta: f64, rho_max: f64) -> Vec<(f64, f64)> {
    let e = Point::new(theta.cos(), theta.sin(), 0.0);
    geom.ray_inside_intervals(x, &e, rho_max)
}

/// Unit vector with polar angle `theta` from `e3` and azimuth `phi`.
pub fn sphere_direction(theta: f64, phi: f64) -> Point {
    let s = theta.sin();
    Point::new(s * phi.cos(), s * phi.sin(), theta.cos())
}

/// Orthonormal frame whose third vector is the polar axis.
#[derive(Debug, Clone, Copy)]
pub struct SphereFrame {
    pub e1: Point,
    pub e2: Point,
    pub e3: Point,
}

impl SphereFrame {
    pub fn standard() -> Self {
        SphereFrame { e1: Point::new(1.0, 0.0, 0.0), e2: Point::new(0.0, 1.0, 0.0), e3: Point::new(0.0, 0.0, 1.0) }
    }

    pub fn with_axis(axis: &Point) -> Self {
        let e3 = axis.normalize();
        let helper = if e3.x.abs() < 0.6 { Point::new(1.0, 0.0, 0.0) } else { Point::new(0.0, 1.0, 0.0) };
        let e1 = (helper - e3 * helper.dot(&e3)).normalize();
        SphereFrame { e1, e2: e3.cross(&e1), e3 }
    }

    /// Polar axis along the local normal for points of `S`, otherwise
    /// towards the nearest point of `S`. The trace of a nearby plane on a
    /// sphere about `x` is then a circle of latitude.
    pub fn facing(s: &Surface, x: &Point) -> Self {
        let mut best = (f64::INFINITY, Point::zeros());
        for t in 0..s.triangles().len() {
            let [a, b, c] = s.corners(t);
            let q = closest_point_on_triangle(x, &a, &b, &c);
            let d = (q - x).norm();
            if d < best.0 {
                best = (d, q);
            }
        }
        let scale = s.vertices().iter().map(|v| (v - x).norm()).fold(0.0, f64::max);
        let tol = 1e-9 * (1.0 + scale);
        let axis = if best.0 > tol {
            best.1 - x
        } else {
            let mut n = Point::zeros();
            for t in 0..s.triangles().len() {
                if s.triangle_distance(t, x) <= tol {
                    n += s.normal(t) * s.area(t);
                }
            }
            n
        };
        if axis.norm() > 0.0 { SphereFrame::with_axis(&axis) } else { SphereFrame::standard() }
    }

    pub fn direction(&self, theta: f64, phi: f64) -> Point {
        let s = theta.sin();
        self.e1 * (s * phi.cos()) + self.e2 * (s * phi.sin()) + self.e3 * theta.cos()
    }
}

/// Direction rule on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub azimuths: usize,
    pub scan: usize,
    pub polar: GaussLegendre,
}

impl Default for SphereRule {
    fn default() -> Self {
        SphereRule { azimuths: 32, scan: 24, polar: GaussLegendre::new(10) }
    }
}

/// Polar arcs `(θ0, θ1, inside)` of one meridian, split wherever the
/// predicate changes (found by scanning and bisection).
fn scanned_arcs(rule: &SphereRule, frame: &SphereFrame, phi: f64, inside: &dyn Fn(&Point) -> bool) -> Vec<(f64, f64, bool)> {
    let test = |th: f64| inside(&frame.direction(th, phi));
    let mut arcs = Vec::new();
    let mut prev = test(0.0);
    let mut start = 0.0;
    let mut a = 0.0;
    for i in 1..=rule.scan {
        let b = PI * i as f64 / rule.scan as f64;
        let cur = test(b);
        if cur != prev {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..40 {
                let m = 0.5 * (lo + hi);
                if test(m) == prev {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            let edge = 0.5 * (lo + hi);
            arcs.push((start, edge, prev));
            start = edge;
            prev = cur;
        }
        a = b;
    }
    arcs.push((start, PI, prev));
    arcs
}

/// Polar angles at which the meridian `φ` of the sphere `|y - x| = R`
/// crosses a triangle mesh: slice the mesh with the meridian plane and cut
/// each slice segment with the circle.
fn sliced_transitions(s: &Surface, frame: &SphereFrame, x: &Point, radius: f64, phi: f64) -> Vec<f64> {
    let a = frame.e1 * phi.cos() + frame.e2 * phi.sin();
    let m = frame.e2 * phi.cos() - frame.e1 * phi.sin();
    let e3 = frame.e3;
    let v = s.vertices();
    let side: Vec<f64> = v.iter().map(|p| (p - x).dot(&m)).collect();
    let mut out = Vec::new();
    for t in s.triangles() {
        let mut pts = Vec::with_capacity(2);
        for k in 0..3 {
            let (i, j) = (t[k], t[(k + 1) % 3]);
            let (di, dj) = (side[i], side[j]);
            // a vertex on the plane counts as the positive side
            if (di >= 0.0) != (dj >= 0.0) {
                let w = di / (di - dj);
                let p = v[i] + (v[j] - v[i]) * w - x;
                pts.push((p.dot(&a), p.dot(&e3)));
            }
        }
        if pts.len() != 2 {
            continue;
        }
        let (p, q) = (pts[0], pts[1]);
        let d = (q.0 - p.0, q.1 - p.1);
        let qa = d.0 * d.0 + d.1 * d.1;
        if qa == 0.0 {
            continue;
        }
        let qb = 2.0 * (p.0 * d.0 + p.1 * d.1);
        let qc = p.0 * p.0 + p.1 * p.1 - radius * radius;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        for xi in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
            if (0.0..=1.0).contains(&xi) {
                let (u, w) = (p.0 + xi * d.0, p.1 + xi * d.1);
                if u >= 0.0 {
                    out.push(u.atan2(w));
                }
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    out
}

/// Arcs of the meridian `φ` of `frame` with the flag "x + R e lies in S⁻".
pub fn meridian_arcs(geom: &BoundaryGeometry, frame: &SphereFrame, x: &Point, radius: f64, phi: f64, rule: &SphereRule) -> Vec<(f64, f64, bool)> {
    let inside = |e: &Point| {
        geom.ray_inside_intervals(x, e, radius * (1.0 + 1e-12))
            .iter()
            .any(|&(a, b)| a < radius && b >= radius)
    };
    let BoundaryGeometry::Surface(s) = geom else {
        return scanned_arcs(rule, frame, phi, &inside);
    };
    let mut edges = vec![0.0];
    edges.extend(sliced_transitions(s, frame, x, radius, phi).into_iter().filter(|&t| t > 0.0 && t < PI));
    edges.push(PI);
    edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        // classify the arc midpoint itself: a ray from x ∈ S along a tangent
        // direction grazes the mesh and can miscount its crossings
        .map(|w| (w[0], w[1], s.solid_angle(&(x + frame.direction(0.5 * (w[0] + w[1]), phi) * radius)) > 2.0 * PI))
        .collect()
}

fn integrate_arcs(rule: &SphereRule, frame: &SphereFrame, arcs_of: impl Fn(f64) -> Vec<(f64, f64, bool)>, keep: impl Fn(bool) -> bool, f: &dyn Fn(&Point) -> f64) -> f64 {
    let nphi = rule.azimuths;
    let mut acc = 0.0;
    for j in 0..nphi {
        let phi = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
        let mut sum = 0.0;
        for (a, b, flag) in arcs_of(phi) {
            if keep(flag) {
                sum += rule.polar.integrate_graded(a, b, |th| th.sin() * f(&frame.direction(th, phi)));
            }
        }
        acc += sum * 2.0 * PI / nphi as f64;
    }
    acc
}

fn frame_for(geom: &BoundaryGeometry, x: &Point) -> SphereFrame {
    match geom {
        BoundaryGeometry::Surface(s) => SphereFrame::facing(s, x),
        _ => SphereFrame::standard(),
    }
}

/// `∫ f(e) dω` over directions `e` with `inside(e)`, found per azimuth by
/// scanning the polar angle and bisecting each transition.
pub fn integrate_sphere_where(rule: &SphereRule, inside: &dyn Fn(&Point) -> bool, f: &dyn Fn(&Point) -> f64) -> f64 {
    let frame = SphereFrame::standard();
    integrate_arcs(rule, &frame, |phi| scanned_arcs(rule, &frame, phi, inside), |flag| flag, f)
}

/// `∫ f(e) dω` over the directions for which `x + radius e` lies in `S⁻`.
pub fn integrate_sphere_inside(geom: &BoundaryGeometry, x: &Point, radius: f64, rule: &SphereRule, f: &dyn Fn(&Point) -> f64) -> f64 {
    let frame = frame_for(geom, x);
    integrate_arcs(rule, &frame, |phi| meridian_arcs(geom, &frame, x, radius, phi, rule), |flag| flag, f)
}

/// `∫ f(e) dω` over all directions, with panel breaks where `x + radius e`
/// crosses `S`.
pub fn integrate_sphere_split(geom: &BoundaryGeometry, x: &Point, radius: f64, rule: &SphereRule, f: &dyn Fn(&Point) -> f64) -> f64 {
    let frame = frame_for(geom, x);
    integrate_arcs(rule, &frame, |phi| meridian_arcs(geom, &frame, x, radius, phi, rule), |_| true, f)
}
