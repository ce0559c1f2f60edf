//! Jump conditions across fronts launched from incompatible boundary data.
//!
//! At a front point `x` with unit normal `n` (the propagation direction),
//! `f⁺` is the limit from behind (`x - s n`, `s → 0⁺`) and `f⁻` the limit
//! from ahead, and `[f] = f⁺ - f⁻`. Each limit is extrapolated from the
//! samples at `s = ε` and `s = 2ε`, which is exact for fields linear on
//! each side.

use std::f64::consts::PI;

use crate::error::{Result, WaveError};
use crate::geometry::{BoundaryGeometry, Point};
use crate::verify::FieldProbe;

/// Fronts `{x ∈ S⁻ : dist(x, seeds) = ct}` spreading from a seed set.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontSet {
    pub seeds: Vec<Point>,
    pub c: f64,
    /// Stencil offset `ε`; samples are taken at `ε` and `2ε` on each side.
    pub eps_f: f64,
}

/// One sampled front point with its jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSample {
    pub x: Point,
    pub normal: Point,
    pub jump_u: f64,
    /// `[u̇ + c ∂u/∂n]`
    pub jump_hadamard: f64,
    /// `[u̇ n_j + c u,_j]`
    pub jump_tangential: Point,
    /// `[E] + c⁻¹[u̇ ∂u/∂n]`
    pub jump_energy: f64,
    /// `[L] - c⁻²(u̇⁻ + c ∂u⁻/∂n)[u̇]`
    pub jump_lagrangian: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpReport {
    pub t: f64,
    pub samples: Vec<FrontSample>,
    pub max_u: f64,
    pub max_hadamard: f64,
    pub max_tangential: [f64; 3],
    pub max_energy: f64,
    pub max_lagrangian: f64,
}

impl JumpReport {
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Largest of the five maxima.
    pub fn worst(&self) -> f64 {
        let tang = self.max_tangential.iter().fold(0.0f64, |m, v| m.max(*v));
        self.max_u.max(self.max_hadamard).max(tang).max(self.max_energy).max(self.max_lagrangian)
    }
}

impl FrontSet {
    pub fn new(seeds: Vec<Point>, c: f64, eps_f: f64) -> Result<Self> {
        if seeds.is_empty() {
            return Err(WaveError::Config("a front needs at least one seed point".into()));
        }
        if !(c > 0.0) || !(eps_f > 0.0) {
            return Err(WaveError::Config(format!("front speed and stencil width must be positive, got c = {c}, eps_f = {eps_f}")));
        }
        Ok(FrontSet { seeds, c, eps_f })
    }

    /// Seeds along the boundary nodes selected by `pick`, with the default
    /// stencil width `1e-4 cΔt`.
    pub fn from_boundary(geom: &BoundaryGeometry, c: f64, dt: f64, pick: impl Fn(&Point) -> bool) -> Result<Self> {
        let seeds: Vec<Point> = (0..geom.node_count()).map(|i| geom.node_point(i)).filter(|p| pick(p)).collect();
        FrontSet::new(seeds, c, 1e-4 * c * dt)
    }

    fn nearest(&self, y: &Point) -> (f64, Point) {
        let mut best = (f64::INFINITY, self.seeds[0]);
        for s in &self.seeds {
            let d = (y - s).norm();
            if d < best.0 {
                best = (d, *s);
            }
        }
        best
    }

    /// `dist(y, seeds) - ct`: negative behind the front, positive ahead.
    pub fn offset(&self, y: &Point, t: f64) -> f64 {
        self.nearest(y).0 - self.c * t
    }

    /// Up to `m` candidate points per seed on the front at time `t`, kept
    /// when the point and the stencil `x ± 2ε n` lie strictly inside `S⁻`
    /// and the seed is the nearest one.
    pub fn samples(&self, geom: &BoundaryGeometry, t: f64, m: usize) -> Vec<(Point, Point)> {
        let ct = self.c * t;
        if ct <= 0.0 || m == 0 {
            return Vec::new();
        }
        let dirs: Vec<Point> = match geom.dimension() {
            1 => vec![Point::new(-1.0, 0.0, 0.0), Point::new(1.0, 0.0, 0.0)],
            2 => (0..m).map(|k| {
                let th = 2.0 * PI * k as f64 / m as f64;
                Point::new(th.cos(), th.sin(), 0.0)
            }).collect(),
            _ => {
                // Fibonacci lattice
                let g = PI * (3.0 - 5f64.sqrt());
                (0..m).map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let s = (1.0 - z * z).sqrt();
                    let a = g * k as f64;
                    Point::new(s * a.cos(), s * a.sin(), z)
                }).collect()
            }
        };
        let tol = 1e-9 * (1.0 + ct);
        let mut out = Vec::new();
        for s in &self.seeds {
            for n in &dirs {
                let x = s + n * ct;
                if (self.nearest(&x).0 - ct).abs() > tol {
                    continue;
                }
                let inside = |p: &Point| geom.characteristic_function(p) == 1.0;
                let w = 2.0 * self.eps_f;
                if inside(&x) && inside(&(x - n * w)) && inside(&(x + n * w)) {
                    out.push((x, *n));
                }
            }
        }
        out
    }
}

/// Limit of the jet at `x` from the side `x + s d`, `s → 0⁺`.
fn one_sided(probe: &FieldProbe, x: &Point, d: &Point, eps: f64, t: f64) -> Result<(f64, f64, Point)> {
    let (u1, ut1, g1) = probe.jet(&(x + d * eps), t)?;
    let (u2, ut2, g2) = probe.jet(&(x + d * (2.0 * eps)), t)?;
    Ok((2.0 * u1 - u2, 2.0 * ut1 - ut2, g1 * 2.0 - g2))
}

/// The five front functionals at up to `m` points per seed. A front that
/// has left `S⁻` gives an empty report.
pub fn shock_jump_report(geom: &BoundaryGeometry, probe: &FieldProbe, front: &FrontSet, t: f64, m: usize) -> Result<JumpReport> {
    let c = front.c;
    let eps = front.eps_f;
    let mut samples = Vec::new();
    for (x, n) in front.samples(geom, t, m) {
        let (u_b, ut_b, g_b) = one_sided(probe, &x, &(-n), eps, t)?;
        let (u_a, ut_a, g_a) = one_sided(probe, &x, &n, eps, t)?;
        let e = |ut: f64, g: &Point| 0.5 * (ut * ut / (c * c) + g.norm_squared());
        let l = |ut: f64, g: &Point| 0.5 * (ut * ut / (c * c) - g.norm_squared());
        let (dn_b, dn_a) = (g_b.dot(&n), g_a.dot(&n));
        samples.push(FrontSample {
            x,
            normal: n,
            jump_u: u_b - u_a,
            jump_hadamard: (ut_b + c * dn_b) - (ut_a + c * dn_a),
            jump_tangential: (n * ut_b + g_b * c) - (n * ut_a + g_a * c),
            jump_energy: (e(ut_b, &g_b) - e(ut_a, &g_a)) + (ut_b * dn_b - ut_a * dn_a) / c,
            jump_lagrangian: (l(ut_b, &g_b) - l(ut_a, &g_a)) - (ut_a + c * dn_a) * (ut_b - ut_a) / (c * c),
        });
    }
    let max = |f: &dyn Fn(&FrontSample) -> f64| samples.iter().map(f).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut max_tangential = [0.0; 3];
    for (k, slot) in max_tangential.iter_mut().enumerate() {
        *slot = max(&|s| s.jump_tangential[k]);
    }
    Ok(JumpReport {
        t,
        max_u: max(&|s| s.jump_u),
        max_hadamard: max(&|s| s.jump_hadamard),
        max_tangential,
        max_energy: max(&|s| s.jump_energy),
        max_lagrangian: max(&|s| s.jump_lagrangian),
        samples,
    })
}
