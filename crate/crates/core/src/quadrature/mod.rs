//! Space-time quadrature for retarded, weakly singular and principal-value
//! boundary integrals.

pub mod curve;
pub mod facet;
mod gauss;
pub mod polar;
pub mod time;
pub mod volume;

use std::f64::consts::PI;

pub use gauss::{adaptive, GaussLegendre};

use crate::error::{Result, WaveError};
use crate::field::TraceSeries;
use crate::geometry::{BoundaryGeometry, FacetFrame, Point};
use curve::{curve_pieces, element_hats, integrate_pieces, Anchor};
use facet::{barycentric, integrate_facet};

/// Per-element orders and the graded order used next to singular points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub singular_order: usize,
    /// Angular order for polar (ray and sector) integration.
    pub angular_order: usize,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule { order: 8, singular_order: 16, angular_order: 16 }
    }
}

impl QuadratureRule {
    pub fn with_order(order: usize) -> Self {
        QuadratureRule { order, singular_order: 2 * order, angular_order: 2 * order }
    }
}

/// Lag radii `c(t - t_m)` at which time-interpolated densities have kinks.
pub fn lag_radii(c: f64, t: f64, dt: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut m = 0;
    while (m as f64) * dt < t {
        let r = c * (t - m as f64 * dt);
        if r > 0.0 {
            out.push(r);
        }
        m += 1;
    }
    out
}

/// Coefficient of `u(x, t)` at a boundary point: the interior angle over
/// `2π` (N = 2) or the interior solid angle over `4π` (N = 3); 1/2 at
/// smooth points.
pub fn free_term(geom: &BoundaryGeometry, x: &Point) -> Result<f64> {
    if !geom.is_on_boundary(x) {
        return Err(WaveError::Misuse("free term requested at a point off the boundary".into()));
    }
    match geom {
        BoundaryGeometry::Interval(_) => Ok(0.5),
        BoundaryGeometry::Curve(c) => {
            let breaks = polar::angle_breaks(c, x, &[], true);
            let rule = GaussLegendre::new(2);
            let a = polar::integrate_angles(&breaks, &rule, 2.0 * PI, |th| {
                let iv = polar::planar_ray(geom, x, th, f64::INFINITY);
                if iv.first().is_some_and(|v| v.0 == 0.0) {
                    1.0
                } else {
                    0.0
                }
            });
            Ok(a / (2.0 * PI))
        }
        BoundaryGeometry::Surface(s) => Ok(s.solid_angle(x) / (4.0 * PI)),
    }
}

/// Retarded single layer of a flux series:
/// N = 2: `∫_{S_t(x)} dS ∫_{r/c}^t p(y, t-τ)/√(c²τ²-r²) dτ`;
/// N = 3: `∫_{S_t(x)} p(y, t - r/c)/r dS`.
pub fn integrate_weakly_singular(
    geom: &BoundaryGeometry,
    x: &Point,
    t: f64,
    c: f64,
    density: &TraceSeries,
    rule: &QuadratureRule,
) -> Result<f64> {
    density.require_horizon(t)?;
    if density.nodes != geom.node_count() {
        return Err(WaveError::Coverage(format!(
            "density has {} nodes, geometry has {}",
            density.nodes,
            geom.node_count()
        )));
    }
    let radii = lag_radii(c, t, density.dt);
    let ct = c * t;
    match geom {
        BoundaryGeometry::Interval(_) => Err(WaveError::Misuse("N = 1 has no boundary integrals".into())),
        BoundaryGeometry::Curve(cv) => {
            let on = geom.is_on_boundary(x).then_some(1e-9 * geom.diameter());
            let anchor = Anchor::new(cv, x, on);
            let pieces = curve_pieces(cv, &anchor, ct, &radii);
            let gl = GaussLegendre::new(if on.is_some() { rule.singular_order } else { rule.order });
            let mut acc = 0.0;
            integrate_pieces(cv, &anchor, &pieces, &gl, |e, s, _, d, w| {
                let r = d.norm();
                let hats = element_hats(cv, e, s);
                let sample = |m: usize| {
                    let m = m.min(density.steps());
                    hats[0].1 * density.get(hats[0].0, m) + hats[1].1 * density.get(hats[1].0, m)
                };
                acc += w * time::single_layer_2d(r, c, t, density.dt, &sample);
            });
            Ok(acc)
        }
        BoundaryGeometry::Surface(s) => {
            let psi = GaussLegendre::new(rule.angular_order.min(12));
            let rho = GaussLegendre::new(rule.order.min(6));
            let mut acc = 0.0;
            for tri in 0..s.triangles().len() {
                if s.triangle_distance(tri, x) >= ct {
                    continue;
                }
                let corners = s.corners(tri);
                let ids = s.triangles()[tri];
                let frame = FacetFrame::new(&corners, &s.normal(tri), x);
                integrate_facet(&frame, &radii, 0.0, ct, &psi, &rho, |y, r, w| {
                    let l = barycentric(&corners, y);
                    let tau = t - r / c;
                    let p: f64 = (0..3).map(|a| l[a] * density.at(ids[a], tau)).sum();
                    acc += w * p / r;
                });
            }
            Ok(acc)
        }
    }
}

/// Static boundary-point Gauss integral with a density:
/// N = 2: `V.P. ∫_S f (1/r) ∂r/∂n dS`; N = 3: `V.P. ∫_S f ∂r/∂n / r² dS`.
/// The kernel is bounded on the curve and vanishes on flat facets through
/// `x`, so `eps` only sets the innermost panel break.
pub fn integrate_principal_value(geom: &BoundaryGeometry, x: &Point, f: &dyn Fn(&Point) -> f64, eps: f64, rule: &QuadratureRule) -> Result<f64> {
    if !geom.is_on_boundary(x) {
        return Err(WaveError::Misuse("principal value needs a point on the boundary".into()));
    }
    match geom {
        BoundaryGeometry::Interval(_) => Err(WaveError::Misuse("N = 1 has no boundary integrals".into())),
        BoundaryGeometry::Curve(cv) => {
            let gl = GaussLegendre::new(rule.singular_order);
            let anchor = Anchor::new(cv, x, Some(1e-9 * geom.diameter()));
            let pieces = curve_pieces(cv, &anchor, 2.0 * geom.diameter() + eps, &[eps]);
            // d·n/r² stays bounded on a piecewise smooth curve; ε only marks
            // a panel break so the graded rule resolves the neighbourhood of x
            let mut acc = 0.0;
            integrate_pieces(cv, &anchor, &pieces, &gl, |e, s, y, d, w| {
                let r = d.norm();
                if r > 0.0 {
                    acc += w * f(y) * d.dot(&cv.element_normal(e, s)) / (r * r);
                }
            });
            Ok(acc)
        }
        BoundaryGeometry::Surface(s) => {
            let psi = GaussLegendre::new(rule.angular_order);
            let rho = GaussLegendre::new(rule.order);
            let mut acc = 0.0;
            for tri in 0..s.triangles().len() {
                let corners = s.corners(tri);
                let n = s.normal(tri);
                let frame = FacetFrame::new(&corners, &n, x);
                let dn = frame.normal_offset();
                if dn == 0.0 {
                    continue;
                }
                integrate_facet(&frame, &[], eps, 1e300, &psi, &rho, |y, r, w| {
                    acc += w * f(y) * dn / (r * r * r);
                });
            }
            Ok(acc)
        }
    }
}
