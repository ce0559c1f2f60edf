//! Checks of the identities behind the representation: static and dynamic
//! Gauss formulas, energy and Lagrangian balances, and front jump
//! conditions.
//!
//! Orientation: `n` is the outward normal and `r = |x - y|`. With that
//! convention the double-layer density of the Gauss formulas is
//! `∂r/∂n(y) / r^{N-1}`, positive on a convex boundary seen from inside.

mod balance;
mod shock;

pub use balance::{energy_balance_residual, lagrangian_balance_residual, total_energy, BalanceRule, FieldProbe};
pub use shock::{shock_jump_report, FrontSample, FrontSet, JumpReport};

use std::f64::consts::PI;

use crate::error::{Result, WaveError};
use crate::geometry::{BoundaryGeometry, FacetFrame, Point, Surface, TimeGrid};
use crate::quadrature::curve::{curve_pieces, integrate_pieces, Anchor};
use crate::quadrature::facet::{facet_rules, integrate_facet};
use crate::quadrature::polar::{angle_breaks, integrate_angles, integrate_sphere_inside, planar_ray};
use crate::quadrature::{integrate_principal_value, GaussLegendre, QuadratureRule};
use crate::representation::RepresentationRule;

/// `∮_S ∂r/∂n / r² dS` over `S` clipped to `r < r_max`, skipping facets
/// through `x` (their kernel vanishes).
fn solid_angle_integral(s: &Surface, x: &Point, r_max: f64, rule: &QuadratureRule) -> f64 {
    let near = (GaussLegendre::new(rule.angular_order), GaussLegendre::new(rule.order));
    let far = (GaussLegendre::new(rule.order.div_ceil(2) + 2), GaussLegendre::new(rule.order.div_ceil(2)));
    let diam = 2.0 * s.vertices().iter().map(|v| (v - x).norm()).fold(0.0, f64::max);
    let mut acc = 0.0;
    for tri in 0..s.triangles().len() {
        let dist = s.triangle_distance(tri, x);
        if dist >= r_max {
            continue;
        }
        let corners = s.corners(tri);
        let n = s.normal(tri);
        let frame = FacetFrame::new(&corners, &n, x);
        let dn = frame.normal_offset();
        let h = dn.abs();
        if h == 0.0 {
            continue;
        }
        // geometric radial cuts resolve the h/(ρ²+h²)^{3/2} peak of close facets
        let mut radii = Vec::new();
        let mut r = 2.0 * h;
        while r < diam.min(r_max) {
            radii.push(r);
            r *= 2.0;
        }
        let (psi, rho) = facet_rules(&near, &far, dist, s.triangle_size(tri));
        integrate_facet(&frame, &radii, 0.0, r_max, psi, rho, |_, r, w| {
            acc += w * dn / (r * r * r);
        });
    }
    acc
}

/// `∮_S ∂r/∂n(y) / r² dS(y)`, a principal value when `x ∈ S`; equals
/// `4π H_S⁻(x)` up to quadrature error.
pub fn gauss_static_3d(geom: &BoundaryGeometry, x: &Point, rule: &QuadratureRule) -> Result<f64> {
    let BoundaryGeometry::Surface(s) = geom else {
        return Err(WaveError::Misuse("the static Gauss integral needs a closed surface".into()));
    };
    if geom.is_on_boundary(x) {
        return integrate_principal_value(geom, x, &|_| 1.0, 1e-6 * geom.diameter(), rule);
    }
    Ok(solid_angle_integral(s, x, f64::INFINITY, rule))
}

/// Left side of the dynamic Gauss formula, normalized like the Green
/// formula (2, 2π or 4π times `H_S⁻(x)H(t)`):
///
/// N = 1: `½ Σ_k H(ct - |x - a_k|) + ½ #{x ± ct ∈ [a1, a2]}`, times 2;
/// N = 2: `∫_{S_t} ct/√(c²t²-r²) ∂r/∂n / r dS + (1/c) ∂_t ∫_{S_t⁻} dV/√(c²t²-r²)`;
/// N = 3: `∫_{S_t} ∂r/∂n / r² dS + (1/c) ∂_t {∫_{r=ct} H_S⁻/r dS + ∫_{S_t} ∂r/∂n / r dS}`.
///
/// The time derivatives are taken analytically on the moving domain. In
/// 2D, each ray of `S_t⁻` contributes `ct/√(c²t²-a²) - ct/√(c²t²-b²)` per
/// inside interval `(a, b)` (the last term dropped when `b` is clipped at
/// `ct`). In 3D the front contributions of the two braced terms cancel and
/// the derivative is the solid angle of `S⁻` seen on the sphere `r = ct`.
pub fn gauss_dynamic(geom: &BoundaryGeometry, grid: &TimeGrid, x: &Point, t: f64, rule: &RepresentationRule) -> Result<f64> {
    if !(t > 0.0) {
        return Err(WaveError::Domain(format!("dynamic Gauss formula needs t > 0, got {t}")));
    }
    let c = grid.c;
    let ct = c * t;
    let on = geom.is_on_boundary(x);
    match geom {
        BoundaryGeometry::Interval(iv) => {
            // H(0) = ½ at arrival times
            let step = |s: f64| if s > 0.0 { 1.0 } else if s == 0.0 { 0.5 } else { 0.0 };
            let mut v = 0.0;
            for k in 0..2 {
                let d = x.x - iv.endpoint(k);
                // sgn(0) = 0: an endpoint's own term is a principal value
                if d != 0.0 {
                    let n = iv.normals()[k];
                    // -∂W/∂x_i n_i with W = -(c/2)(t - |x|/c)H
                    v -= 0.5 * d.signum() * n * step(ct - d.abs());
                }
            }
            for y in [x.x - ct, x.x + ct] {
                v += 0.5 * step(y - iv.a1).min(step(iv.a2 - y));
            }
            Ok(2.0 * v)
        }
        BoundaryGeometry::Curve(cv) => {
            let anchor = Anchor::new(cv, x, on.then_some(1e-9 * (1.0 + x.norm())));
            let pieces = curve_pieces(cv, &anchor, ct, &[]);
            let gl = GaussLegendre::new(rule.quadrature.singular_order);
            let mut layer = 0.0;
            integrate_pieces(cv, &anchor, &pieces, &gl, |e, s, _, d, w| {
                let r = d.norm();
                if r > 0.0 && r < ct {
                    let dn = d.dot(&cv.element_normal(e, s)) / r;
                    layer += w * ct / ((ct - r) * (ct + r)).sqrt() * dn / r;
                }
            });
            let breaks = angle_breaks(cv, x, &[ct], on);
            let gl_a = GaussLegendre::new(rule.quadrature.angular_order);
            let volume = integrate_angles(&breaks, &gl_a, rule.angle_width, |th| {
                let mut v = 0.0;
                for (a, b) in planar_ray(geom, x, th, ct) {
                    v += ct / ((ct - a) * (ct + a)).sqrt();
                    if b < ct {
                        v -= ct / ((ct - b) * (ct + b)).sqrt();
                    }
                }
                v
            });
            Ok(layer + volume)
        }
        BoundaryGeometry::Surface(s) => {
            let layer = solid_angle_integral(s, x, ct, &rule.quadrature);
            let sphere = integrate_sphere_inside(geom, x, ct, &rule.sphere, &|_| 1.0);
            Ok(layer + sphere)
        }
    }
}

/// Expected value `normalization · H_S⁻(x) · H(t)`.
pub fn gauss_expected(geom: &BoundaryGeometry, x: &Point, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let norm = match geom.dimension() {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    };
    norm * geom.characteristic_function(x)
}
