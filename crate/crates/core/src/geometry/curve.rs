//! Closed planar curves (N = 2 boundaries).

use std::f64::consts::PI;

use crate::error::{Result, WaveError};
use crate::geometry::Point;

/// Parameterised shape of a closed curve, counter-clockwise so that the
/// normal `(y'_2, -y'_1) / |y'|` points out of the enclosed domain.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveShape {
    /// Straight segments between consecutive vertices; parameter is arc length.
    Polyline(Vec<Point>),
    /// Axis-aligned ellipse `center + (a cos s, b sin s)`; a circle when `a == b`.
    Ellipse { center: Point, a: f64, b: f64 },
}

/// Closed curve with boundary nodes at increasing parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    shape: CurveShape,
    nodes: Vec<f64>,
    period: f64,
}

fn cross2(a: &Point, b: &Point) -> f64 {
    a.x * b.y - a.y * b.x
}

impl Curve {
    /// Circle of radius `radius` with `n` uniformly spaced nodes.
    pub fn circle(center: Point, radius: f64, n: usize) -> Result<Self> {
        Self::ellipse(center, radius, radius, n)
    }

    pub fn ellipse(center: Point, a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(WaveError::InvalidGeometry(format!("ellipse semi-axes must be positive, got {a}, {b}")));
        }
        if n < 3 {
            return Err(WaveError::InvalidGeometry("a closed curve needs at least 3 nodes".into()));
        }
        let period = 2.0 * PI;
        let nodes = (0..n).map(|k| period * k as f64 / n as f64).collect();
        Ok(Curve { shape: CurveShape::Ellipse { center, a, b }, nodes, period })
    }

    /// Closed polyline through `points` (closure implied). Clockwise input
    /// is reversed so that normals point outward.
    pub fn polyline(mut points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(WaveError::InvalidGeometry("a closed polyline needs at least 3 vertices".into()));
        }
        let n = points.len();
        let area: f64 = (0..n).map(|i| cross2(&points[i], &points[(i + 1) % n])).sum::<f64>() * 0.5;
        if area.abs() < 1e-14 {
            return Err(WaveError::InvalidGeometry("polyline encloses zero area".into()));
        }
        if area < 0.0 {
            points.reverse();
        }
        let mut nodes = Vec::with_capacity(n);
        let mut s = 0.0;
        for i in 0..n {
            nodes.push(s);
            let len = (points[(i + 1) % n] - points[i]).norm();
            if len < 1e-14 {
                return Err(WaveError::InvalidGeometry(format!("zero-length segment at vertex {i}")));
            }
            s += len;
        }
        Ok(Curve { shape: CurveShape::Polyline(points), nodes, period: s })
    }

    pub fn shape(&self) -> &CurveShape {
        &self.shape
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Parameter value of node `i`.
    pub fn node_param(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn node_point(&self, i: usize) -> Point {
        self.position(self.nodes[i])
    }

    pub fn element_count(&self) -> usize {
        self.nodes.len()
    }

    /// Parameter range of element `e`; the upper end may exceed the period
    /// for the closing element.
    pub fn element_range(&self, e: usize) -> (f64, f64) {
        let n = self.nodes.len();
        let s0 = self.nodes[e];
        let s1 = if e + 1 == n { self.period + self.nodes[0] } else { self.nodes[e + 1] };
        (s0, s1)
    }

    /// Global node indices at the start and end of element `e`.
    pub fn element_nodes(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.nodes.len())
    }

    fn segment(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(self.period);
        let i = match self.nodes.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        (i, s - self.nodes[i])
    }

    pub fn position(&self, s: f64) -> Point {
        match &self.shape {
            CurveShape::Ellipse { center, a, b } => center + Point::new(a * s.cos(), b * s.sin(), 0.0),
            CurveShape::Polyline(p) => {
                let (i, ds) = self.segment(s);
                let q = &p[(i + 1) % p.len()];
                let d = q - p[i];
                p[i] + d * (ds / d.norm())
            }
        }
    }

    /// Derivative of the position with respect to the parameter.
    pub fn tangent(&self, s: f64) -> Point {
        match &self.shape {
            CurveShape::Ellipse { a, b, .. } => Point::new(-a * s.sin(), b * s.cos(), 0.0),
            CurveShape::Polyline(p) => {
                let (i, _) = self.segment(s);
                let d = p[(i + 1) % p.len()] - p[i];
                d / d.norm()
            }
        }
    }

    /// Tangent on element `e` at parameter `s` (uses the element's own
    /// segment for polylines so vertex parameters are unambiguous).
    pub fn element_tangent(&self, e: usize, s: f64) -> Point {
        match &self.shape {
            CurveShape::Polyline(p) => {
                let d = p[(e + 1) % p.len()] - p[e];
                d / d.norm()
            }
            _ => self.tangent(s),
        }
    }

    pub fn element_position(&self, e: usize, s: f64) -> Point {
        match &self.shape {
            CurveShape::Polyline(p) => {
                let (s0, s1) = self.element_range(e);
                let xi = (s - s0) / (s1 - s0);
                p[e] + (p[(e + 1) % p.len()] - p[e]) * xi
            }
            _ => self.position(s),
        }
    }

    pub fn element_normal(&self, e: usize, s: f64) -> Point {
        let t = self.element_tangent(e, s);
        Point::new(t.y, -t.x, 0.0) / t.norm()
    }

    pub fn normal(&self, s: f64) -> Point {
        let t = self.tangent(s);
        Point::new(t.y, -t.x, 0.0) / t.norm()
    }

    /// Arc-length element `|y'(s)|`.
    pub fn jacobian(&self, s: f64) -> f64 {
        self.tangent(s).norm()
    }

    /// Sorted ray crossings `x + rho * dir`, `rho > tol`, each tagged with
    /// `+1` when leaving the enclosed domain and `-1` when entering it.
    pub fn ray_crossings(&self, x: &Point, dir: &Point, tol: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        match &self.shape {
            CurveShape::Ellipse { center, a, b } => {
                let px = (x.x - center.x) / a;
                let py = (x.y - center.y) / b;
                let dx = dir.x / a;
                let dy = dir.y / b;
                let qa = dx * dx + dy * dy;
                let qb = 2.0 * (px * dx + py * dy);
                let qc = px * px + py * py - 1.0;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc > 0.0 {
                    let sq = disc.sqrt();
                    // numerically stable roots
                    let q = -0.5 * (qb + qb.signum() * sq);
                    let (r1, r2) = if q != 0.0 { (q / qa, qc / q) } else { (-sq / (2.0 * qa), sq / (2.0 * qa)) };
                    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
                    if lo > tol {
                        out.push((lo, -1.0));
                    }
                    if hi > tol {
                        out.push((hi, 1.0));
                    }
                }
            }
            CurveShape::Polyline(p) => {
                let n = p.len();
                for i in 0..n {
                    let a = p[i];
                    let d = p[(i + 1) % n] - a;
                    let den = cross2(dir, &d);
                    if den.abs() < 1e-300 {
                        continue;
                    }
                    let w = a - x;
                    let rho = cross2(&w, &d) / den;
                    let lam = cross2(&w, dir) / den;
                    if rho > tol && (0.0..1.0).contains(&lam) {
                        let nrm = Point::new(d.y, -d.x, 0.0);
                        out.push((rho, nrm.dot(dir).signum()));
                    }
                }
                out.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
            }
        }
        out
    }

    /// Winding number of the curve about `x` (1 inside, 0 outside).
    pub fn winding_number(&self, x: &Point) -> f64 {
        match &self.shape {
            CurveShape::Ellipse { center, a, b } => {
                let u = (x.x - center.x) / a;
                let v = (x.y - center.y) / b;
                if u * u + v * v < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            CurveShape::Polyline(p) => {
                let n = p.len();
                let mut angle = 0.0;
                for i in 0..n {
                    let u = p[i] - x;
                    let v = p[(i + 1) % n] - x;
                    angle += cross2(&u, &v).atan2(u.dot(&v));
                }
                (angle / (2.0 * PI)).round()
            }
        }
    }

    /// Euclidean distance from `x` to the curve.
    pub fn distance(&self, x: &Point) -> f64 {
        match &self.shape {
            CurveShape::Ellipse { center, a, b } if (a - b).abs() < 1e-15 * a.max(*b) => {
                ((x - center).norm() - a).abs()
            }
            CurveShape::Polyline(p) => {
                let n = p.len();
                (0..n)
                    .map(|i| {
                        let a = p[i];
                        let d = p[(i + 1) % n] - a;
                        let lam = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
                        (a + d * lam - x).norm()
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            CurveShape::Ellipse { .. } => {
                let (_, d) = self.extremal_distance(x, false);
                d
            }
        }
    }

    /// Parameter and value of the minimum (`maximize = false`) or maximum
    /// distance from `x` over the curve, by sampling plus golden refinement.
    pub fn extremal_distance(&self, x: &Point, maximize: bool) -> (f64, f64) {
        let sign = if maximize { -1.0 } else { 1.0 };
        let f = |s: f64| sign * (self.position(s) - x).norm();
        let samples = 64 * self.nodes.len().max(8);
        let h = self.period / samples as f64;
        let mut best = (0.0, f(0.0));
        for k in 1..samples {
            let s = k as f64 * h;
            let v = f(s);
            if v < best.1 {
                best = (s, v);
            }
        }
        // vertices are exact extremal candidates for polylines
        for i in 0..self.nodes.len() {
            let v = f(self.nodes[i]);
            if v < best.1 {
                best = (self.nodes[i], v);
            }
        }
        let (mut lo, mut hi) = (best.0 - h, best.0 + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let s = 0.5 * (lo + hi);
        let v = f(s).min(best.1);
        (s.rem_euclid(self.period), sign * v)
    }

    /// `y(s) - y(sigma)` without cancellation for nearby parameters.
    pub fn chord(&self, e: usize, s: f64, sigma: f64) -> Point {
        match &self.shape {
            CurveShape::Ellipse { a, b, .. } => {
                let h = (0.5 * (s - sigma)).sin();
                let m = 0.5 * (s + sigma);
                Point::new(-a * m.sin(), b * m.cos(), 0.0) * (2.0 * h)
            }
            CurveShape::Polyline(_) => self.element_position(e, s) - self.position(sigma),
        }
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        match &self.shape {
            CurveShape::Polyline(_) => self.period,
            CurveShape::Ellipse { .. } => {
                let q = crate::quadrature::GaussLegendre::new(16);
                (0..self.element_count())
                    .map(|e| {
                        let (s0, s1) = self.element_range(e);
                        q.integrate(s0, s1, |s| self.jacobian(s))
                    })
                    .sum()
            }
        }
    }

    /// Parameters in `(s0, s1)` where `|y(s) - x| = radius`, found by
    /// sampling and bisection to 1e-12 relative.
    pub fn radius_crossings(&self, e: usize, x: &Point, radius: f64) -> Vec<f64> {
        let (s0, s1) = self.element_range(e);
        if let CurveShape::Polyline(p) = &self.shape {
            // exact roots of |p + ξ d - x|² = R²
            let a = p[e];
            let d = p[(e + 1) % p.len()] - a;
            let w = a - x;
            let qa = d.norm_squared();
            let qb = 2.0 * w.dot(&d);
            let qc = w.norm_squared() - radius * radius;
            if !qc.is_finite() {
                return Vec::new();
            }
            let disc = qb * qb - 4.0 * qa * qc;
            if disc <= 0.0 {
                return Vec::new();
            }
            let sq = disc.sqrt();
            let q = -0.5 * (qb + qb.signum() * sq);
            let mut roots = vec![q / qa, if q != 0.0 { qc / q } else { -q / qa }];
            roots.sort_by(|u, v| u.partial_cmp(v).unwrap());
            return roots
                .into_iter()
                .filter(|xi| *xi > 0.0 && *xi < 1.0)
                .map(|xi| s0 + (s1 - s0) * xi)
                .collect();
        }
        let g = |s: f64| (self.element_position(e, s) - x).norm() - radius;
        let samples = 8;
        let mut out = Vec::new();
        let mut a = s0;
        let mut ga = g(a);
        for k in 1..=samples {
            let b = s0 + (s1 - s0) * k as f64 / samples as f64;
            let gb = g(b);
            if ga == 0.0 && k > 1 {
                out.push(a);
            } else if ga * gb < 0.0 {
                let (mut lo, mut hi, mut glo) = (a, b, ga);
                while hi - lo > 1e-12 * (s1 - s0).abs().max(1e-300) {
                    let m = 0.5 * (lo + hi);
                    let gm = g(m);
                    if gm == 0.0 {
                        lo = m;
                        hi = m;
                        break;
                    }
                    if (gm < 0.0) == (glo < 0.0) {
                        lo = m;
                        glo = gm;
                    } else {
                        hi = m;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            a = b;
            ga = gb;
        }
        out
    }
}
