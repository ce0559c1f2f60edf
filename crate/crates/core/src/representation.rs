//! Interior values `u(x, t)` from boundary traces, Cauchy data and the
//! source, for N = 1, 2, 3.
//!
//! Every evaluator here returns the *unnormalized* sum, i.e. `2u`, `2πu`
//! or `4πu` at interior points; [`normalization`] gives the divisor. The
//! boundary-integral solver reuses the same pieces at points of `S`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Result, WaveError};
use crate::field::{CauchyData, Field, TraceKind, TraceSeries};
use crate::geometry::{BoundaryGeometry, Curve, FacetFrame, Interval, Point, Surface, TimeGrid};
use crate::quadrature::curve::{curve_pieces, element_hats, integrate_pieces, Anchor};
use crate::quadrature::facet::{barycentric, facet_rules, integrate_facet};
use crate::quadrature::polar::{angle_breaks, integrate_angles, integrate_sphere_inside, integrate_sphere_split, SphereRule};
use crate::quadrature::time::{double_layer_2d, single_layer_2d};
use crate::quadrature::{lag_radii, GaussLegendre, QuadratureRule};

/// Nodal trace `u_S` and flux `p = ∂u/∂n` on a common time grid. The
/// boundary velocity is the time derivative of the `u_S` interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub trace: TraceSeries,
    pub flux: TraceSeries,
}

impl BoundaryData {
    pub fn new(trace: TraceSeries, flux: TraceSeries) -> Result<Self> {
        if trace.kind != TraceKind::Trace || flux.kind != TraceKind::Flux {
            return Err(WaveError::Misuse("boundary data wants a trace and a flux series".into()));
        }
        if trace.nodes != flux.nodes || trace.steps() != flux.steps() || (trace.dt - flux.dt).abs() > 1e-15 * trace.dt {
            return Err(WaveError::Coverage("trace and flux series live on different grids".into()));
        }
        Ok(BoundaryData { trace, flux })
    }

    pub fn zeros(geom: &BoundaryGeometry, grid: &TimeGrid) -> Self {
        let n = geom.node_count();
        BoundaryData { trace: TraceSeries::zeros(TraceKind::Trace, n, grid), flux: TraceSeries::zeros(TraceKind::Flux, n, grid) }
    }

    /// Both traces of a known field.
    pub fn sample(geom: &BoundaryGeometry, grid: &TimeGrid, u: &dyn Field) -> Self {
        BoundaryData {
            trace: TraceSeries::sample(TraceKind::Trace, geom, grid, u),
            flux: TraceSeries::sample(TraceKind::Flux, geom, grid, u),
        }
    }

    fn check(&self, geom: &BoundaryGeometry, grid: &TimeGrid, t: f64) -> Result<()> {
        if self.trace.nodes != geom.node_count() {
            return Err(WaveError::Coverage(format!(
                "traces have {} nodes, boundary has {}",
                self.trace.nodes,
                geom.node_count()
            )));
        }
        if (self.trace.dt - grid.dt).abs() > 1e-12 * grid.dt {
            return Err(WaveError::Coverage(format!("traces use Δt = {}, grid uses {}", self.trace.dt, grid.dt)));
        }
        self.trace.require_horizon(t)
    }
}

/// Resolution knobs for representation integrals.
#[derive(Debug, Clone)]
pub struct RepresentationRule {
    pub quadrature: QuadratureRule,
    /// Widest angular panel for planar ray integrals.
    pub angle_width: f64,
    pub sphere: SphereRule,
    /// Panels per unit time for the 1D source integral.
    pub time_panels: usize,
}

impl Default for RepresentationRule {
    fn default() -> Self {
        RepresentationRule { quadrature: QuadratureRule::default(), angle_width: 0.25, sphere: SphereRule::default(), time_panels: 8 }
    }
}

impl RepresentationRule {
    /// Rule with every resolution scaled by `k` (at least 1).
    pub fn refined(k: usize) -> Self {
        let k = k.max(1);
        let base = RepresentationRule::default();
        RepresentationRule {
            quadrature: QuadratureRule::with_order(base.quadrature.order * k),
            angle_width: base.angle_width / k as f64,
            sphere: SphereRule { azimuths: base.sphere.azimuths * k, scan: base.sphere.scan * k, polar: GaussLegendre::new(10 * k) },
            time_panels: base.time_panels * k,
        }
    }
}

/// `2`, `2π` or `4π`: the factor multiplying `u(x, t)` on the left of the
/// Green formula at an interior point.
pub fn normalization(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

fn check_interior(geom: &BoundaryGeometry, x: &Point) -> Result<()> {
    if geom.is_on_boundary(x) || geom.characteristic_function(x) < 0.75 {
        return Err(WaveError::Placement(format!("({}, {}, {}) is not strictly inside S", x.x, x.y, x.z)));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WaveError::Domain(format!("evaluation time {t} must be non-negative")));
    }
    Ok(())
}

/// `u(x, t)` at an interior point of any supported dimension.
pub fn represent(
    geom: &BoundaryGeometry,
    grid: &TimeGrid,
    data: &BoundaryData,
    cauchy: &CauchyData,
    x: &Point,
    t: f64,
    rule: &RepresentationRule,
) -> Result<f64> {
    match geom {
        BoundaryGeometry::Interval(iv) => represent_1d(iv, grid, data, cauchy, x.x, t, rule),
        BoundaryGeometry::Curve(_) => represent_2d(geom, grid, data, cauchy, x, t, rule),
        BoundaryGeometry::Surface(_) => represent_3d(geom, grid, data, cauchy, x, t, rule),
    }
}

/// [`represent`] over many `(x, t)` pairs in parallel.
pub fn represent_points(
    geom: &BoundaryGeometry,
    grid: &TimeGrid,
    data: &BoundaryData,
    cauchy: &CauchyData,
    points: &[(Point, f64)],
    rule: &RepresentationRule,
) -> Result<Vec<f64>> {
    points.par_iter().map(|(x, t)| represent(geom, grid, data, cauchy, x, *t, rule)).collect()
}

pub fn represent_1d(
    iv: &Interval,
    grid: &TimeGrid,
    data: &BoundaryData,
    cauchy: &CauchyData,
    x: f64,
    t: f64,
    rule: &RepresentationRule,
) -> Result<f64> {
    check_time(t)?;
    if !(x > iv.a1 && x < iv.a2) {
        return Err(WaveError::Placement(format!("x = {x} is not inside ({}, {})", iv.a1, iv.a2)));
    }
    let geom = BoundaryGeometry::Interval(*iv);
    data.check(&geom, grid, t)?;
    let raw = endpoint_terms_1d(iv, grid.c, data, x, t) + cauchy_terms_1d(iv, grid.c, cauchy, x, t, rule);
    Ok(raw / 2.0)
}

/// `∫₀^s f(node, τ) dτ` of the piecewise-linear interpolant.
pub(crate) fn running_integral(series: &TraceSeries, node: usize, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let dt = series.dt;
    let whole = ((s / dt).floor() as usize).min(series.steps());
    let mut acc = 0.0;
    for m in 0..whole {
        acc += 0.5 * dt * (series.get(node, m) + series.get(node, m + 1));
    }
    let rest = s - whole as f64 * dt;
    if rest > 0.0 {
        acc += 0.5 * rest * (series.get(node, whole) + series.at(node, s));
    }
    acc
}

/// Endpoint flux integrals and retarded endpoint values,
/// `Σ_k H(ct - d_k) [c ∫₀^{t - d_k/c} p_k + u(a_k, t - d_k/c)]`.
pub fn endpoint_terms_1d(iv: &Interval, c: f64, data: &BoundaryData, x: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..2 {
        let d = (x - iv.endpoint(k)).abs();
        if c * t > d {
            let ts = t - d / c;
            acc += c * running_integral(&data.flux, k, ts) + data.trace.at(k, ts);
        }
    }
    acc
}

/// Initial-data and source terms of the 1D formula (times 2). Valid at
/// the endpoints too, where the outward characteristic leaves the domain.
pub fn cauchy_terms_1d(iv: &Interval, c: f64, cauchy: &CauchyData, x: f64, t: f64, rule: &RepresentationRule) -> f64 {
    let gl = GaussLegendre::new(rule.quadrature.order);
    let at = |y: f64| Point::new(y, 0.0, 0.0);
    let ct = c * t;
    let mut acc = 0.0;
    if !cauchy.displacement.is_zero() {
        if x + ct <= iv.a2 {
            acc += cauchy.displacement.value(&at(x + ct), 0.0);
        }
        if x - ct >= iv.a1 {
            acc += cauchy.displacement.value(&at(x - ct), 0.0);
        }
    }
    let (lo, hi) = ((x - ct).max(iv.a1), (x + ct).min(iv.a2));
    if !cauchy.velocity.is_zero() && hi > lo {
        let panels = rule.time_panels.max(1);
        let h = (hi - lo) / panels as f64;
        let v: f64 = (0..panels)
            .map(|p| gl.integrate(lo + p as f64 * h, lo + (p + 1) as f64 * h, |y| cauchy.velocity.value(&at(y), 0.0)))
            .sum();
        acc += v / c;
    }
    if !cauchy.source.is_zero() && t > 0.0 {
        // the cone {|y - x| < cτ} meets the endpoints at τ = d_k / c
        let mut cuts = vec![0.0, t];
        for k in 0..2 {
            let tau = (x - iv.endpoint(k)).abs() / c;
            if tau > 0.0 && tau < t {
                cuts.push(tau);
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let panels = ((rule.time_panels as f64 * t).ceil() as usize).max(2);
        let mut s = 0.0;
        for w in cuts.windows(2) {
            let h = (w[1] - w[0]) / panels as f64;
            for p in 0..panels {
                s += gl.integrate(w[0] + p as f64 * h, w[0] + (p + 1) as f64 * h, |tau| {
                    let (a, b) = ((x - c * tau).max(iv.a1), (x + c * tau).min(iv.a2));
                    if b <= a {
                        return 0.0;
                    }
                    gl.integrate(a, b, |y| cauchy.source.value(&at(y), t - tau))
                });
            }
        }
        acc -= c * s;
    }
    acc
}

pub fn represent_2d(
    geom: &BoundaryGeometry,
    grid: &TimeGrid,
    data: &BoundaryData,
    cauchy: &CauchyData,
    x: &Point,
    t: f64,
    rule: &RepresentationRule,
) -> Result<f64> {
    let BoundaryGeometry::Curve(cv) = geom else {
        return Err(WaveError::Misuse("represent_2d needs a closed curve".into()));
    };
    check_time(t)?;
    check_interior(geom, x)?;
    data.check(geom, grid, t)?;
    let raw = boundary_terms_2d(cv, grid.c, data, x, t, rule, false) + cauchy_terms_2d(geom, grid.c, cauchy, x, t, rule);
    Ok(raw / (2.0 * PI))
}

/// Retarded single and double layers of the 2D formula,
/// `c ∫_{S_t} [∫ p(t-τ) dτ/√(c²τ²-r²) + (∂r/∂n / r) ∫ τ u̇(t-τ) dτ/√(c²τ²-r²)] dS`.
pub fn boundary_terms_2d(cv: &Curve, c: f64, data: &BoundaryData, x: &Point, t: f64, rule: &RepresentationRule, on_boundary: bool) -> f64 {
    let ct = c * t;
    if ct <= 0.0 {
        return 0.0;
    }
    let dt = data.trace.dt;
    let last = data.trace.steps();
    let radii = lag_radii(c, t, dt);
    let tol = 1e-9 * (1.0 + x.norm());
    let anchor = Anchor::new(cv, x, on_boundary.then_some(tol));
    let pieces = curve_pieces(cv, &anchor, ct, &radii);
    let order = if on_boundary { rule.quadrature.singular_order } else { rule.quadrature.order };
    let gl = GaussLegendre::new(order);
    let mut acc = 0.0;
    integrate_pieces(cv, &anchor, &pieces, &gl, |e, s, _, d, w| {
        let r = d.norm();
        let hats = element_hats(cv, e, s);
        let nodal = |series: &TraceSeries, m: usize| -> f64 {
            let m = m.min(last);
            hats.iter().map(|&(j, h)| h * series.get(j, m)).sum()
        };
        let mut v = single_layer_2d(r, c, t, dt, &|m| nodal(&data.flux, m));
        let dn = d.dot(&cv.element_normal(e, s));
        if r > 0.0 && dn != 0.0 {
            let rate = |m: usize| (nodal(&data.trace, m) - nodal(&data.trace, m - 1)) / dt;
            v += dn / (r * r) * double_layer_2d(r, c, t, dt, &rate);
        }
        acc += w * c * v;
    });
    acc
}

/// Cauchy-data and source terms of the 2D formula (times 2π), written ray
/// by ray: `u₀(x)` on rays that start inside, `ct ∫ ∂_ρ u₀ dφ` and
/// `t ∫ sin φ u̇₀ dφ` with `ρ = ct sin φ`, and the retarded source.
/// At points of `S` only the rays entering `S⁻` contribute.
pub fn cauchy_terms_2d(geom: &BoundaryGeometry, c: f64, cauchy: &CauchyData, x: &Point, t: f64, rule: &RepresentationRule) -> f64 {
    let BoundaryGeometry::Curve(cv) = geom else {
        return 0.0;
    };
    if cauchy.is_zero() {
        return 0.0;
    }
    let ct = c * t;
    let on = geom.is_on_boundary(x);
    let gl = GaussLegendre::new(rule.quadrature.order);
    let (u0, v0, g) = (&cauchy.displacement, &cauchy.velocity, &cauchy.source);
    if ct <= 0.0 {
        let free = if on { crate::quadrature::free_term(geom, x).unwrap_or(0.5) } else { 1.0 };
        return 2.0 * PI * free * u0.value(x, 0.0);
    }
    let breaks = angle_breaks(cv, x, &[ct], on);
    let (dz, vz, gz) = (u0.is_zero(), v0.is_zero(), g.is_zero());
    integrate_angles(&breaks, &gl, rule.angle_width, |th| {
        let e = Point::new(th.cos(), th.sin(), 0.0);
        let mut v = 0.0;
        for (a, b) in geom.ray_inside_intervals(x, &e, ct) {
            if a == 0.0 && !dz {
                v += u0.value(x, 0.0);
            }
            let (pa, pb) = ((a / ct).min(1.0).asin(), (b / ct).min(1.0).asin());
            if !(dz && vz) {
                v += gl.integrate_graded(pa, pb, |phi| {
                    let y = x + e * (ct * phi.sin());
                    let mut f = 0.0;
                    if !dz {
                        f += ct * u0.gradient(&y, 0.0).dot(&e);
                    }
                    if !vz {
                        f += t * phi.sin() * v0.value(&y, 0.0);
                    }
                    f
                });
            }
            if !gz {
                // ∫ ρ dρ ∫ G(y, t-τ) dτ / √(c²τ²-ρ²), with s = √(c²τ²-ρ²)
                let src = gl.integrate_graded(a, b, |rho| {
                    let y = x + e * rho;
                    let smax = ((ct - rho) * (ct + rho)).max(0.0).sqrt();
                    rho * gl.integrate_graded(0.0, smax, |s| {
                        let q = s.hypot(rho);
                        g.value(&y, t - q / c) / (c * q)
                    })
                });
                v -= c * c * src;
            }
        }
        v
    })
}

pub fn represent_3d(
    geom: &BoundaryGeometry,
    grid: &TimeGrid,
    data: &BoundaryData,
    cauchy: &CauchyData,
    x: &Point,
    t: f64,
    rule: &RepresentationRule,
) -> Result<f64> {
    let BoundaryGeometry::Surface(s) = geom else {
        return Err(WaveError::Misuse("represent_3d needs a closed surface".into()));
    };
    check_time(t)?;
    check_interior(geom, x)?;
    data.check(geom, grid, t)?;
    let raw = boundary_terms_3d(s, grid.c, data, x, t, rule) + cauchy_terms_3d(geom, grid.c, cauchy, x, t, rule);
    Ok(raw / (4.0 * PI))
}

/// Retarded layers of the 3D formula,
/// `∫_{S_t} [p/r + u̇ ∂r/∂n /(cr) + u ∂r/∂n / r²] dS` at `t - r/c`.
pub fn boundary_terms_3d(s: &Surface, c: f64, data: &BoundaryData, x: &Point, t: f64, rule: &RepresentationRule) -> f64 {
    let ct = c * t;
    if ct <= 0.0 {
        return 0.0;
    }
    let radii = lag_radii(c, t, data.trace.dt);
    let near = (GaussLegendre::new(rule.quadrature.angular_order), GaussLegendre::new(rule.quadrature.order));
    let far = (GaussLegendre::new(rule.quadrature.order.div_ceil(2) + 2), GaussLegendre::new(rule.quadrature.order.div_ceil(2)));
    let mut acc = 0.0;
    for (tri, ids) in s.triangles().iter().enumerate() {
        let corners = s.corners(tri);
        let dist = s.triangle_distance(tri, x);
        if dist >= ct {
            continue;
        }
        let n = s.normal(tri);
        let frame = FacetFrame::new(&corners, &n, x);
        let (psi, rho) = facet_rules(&near, &far, dist, s.triangle_size(tri));
        let dn = frame.normal_offset();
        integrate_facet(&frame, &radii, 0.0, ct, psi, rho, |y, r, w| {
            if r <= 0.0 {
                return;
            }
            let b = barycentric(&corners, y);
            let tau = t - r / c;
            let (mut u, mut ud, mut p) = (0.0, 0.0, 0.0);
            for k in 0..3 {
                u += b[k] * data.trace.at(ids[k], tau);
                ud += b[k] * data.trace.rate(ids[k], tau);
                p += b[k] * data.flux.at(ids[k], tau);
            }
            let dr = dn / r;
            acc += w * (p / r + dr * (ud / (c * r) + u / (r * r)));
        });
    }
    acc
}

/// Kirchhoff terms over the inside part of the sphere `|y - x| = ct`
/// and the retarded volume source, times 4π.
pub fn cauchy_terms_3d(geom: &BoundaryGeometry, c: f64, cauchy: &CauchyData, x: &Point, t: f64, rule: &RepresentationRule) -> f64 {
    if cauchy.is_zero() {
        return 0.0;
    }
    let ct = c * t;
    let (u0, v0, g) = (&cauchy.displacement, &cauchy.velocity, &cauchy.source);
    if ct <= 0.0 {
        let free = if geom.is_on_boundary(x) { crate::quadrature::free_term(geom, x).unwrap_or(0.5) } else { 1.0 };
        return 4.0 * PI * free * u0.value(x, 0.0);
    }
    let mut acc = 0.0;
    if !(u0.is_zero() && v0.is_zero()) {
        acc += integrate_sphere_inside(geom, x, ct, &rule.sphere, &|e| {
            let y = x + e * ct;
            u0.value(&y, 0.0) + ct * u0.gradient(&y, 0.0).dot(e) + t * v0.value(&y, 0.0)
        });
    }
    if !g.is_zero() {
        let gl = GaussLegendre::new(rule.quadrature.order);
        let along = |e: &Point| -> f64 {
            geom.ray_inside_intervals(x, e, ct)
                .iter()
                .map(|&(a, b)| gl.integrate(a, b, |rho| rho * g.value(&(x + e * rho), t - rho / c)))
                .sum()
        };
        acc -= integrate_sphere_split(geom, x, ct, &rule.sphere, &along);
    }
    acc
}
