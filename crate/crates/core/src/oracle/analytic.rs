//! Closed-form solutions of `□_c u = G` used as references.

use std::sync::Arc;

use crate::error::{Result, WaveError};
use crate::field::{CauchyData, Constant, Field, Zero};
use crate::geometry::Point;

/// One-variable wave profile `f(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `sin(ω s + φ)`
    Sin { omega: f64, phase: f64 },
    /// `s^n H(s)`, `n ≥ 1`
    Power { n: i32 },
    /// `exp(-((s - s0)/w)²)`
    Gaussian { center: f64, width: f64 },
}

impl Profile {
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            Profile::Sin { omega, phase } => (omega * s + phase).sin(),
            Profile::Power { n } => {
                if s > 0.0 {
                    s.powi(n)
                } else {
                    0.0
                }
            }
            Profile::Gaussian { center, width } => (-((s - center) / width).powi(2)).exp(),
        }
    }

    pub fn d1(&self, s: f64) -> f64 {
        match *self {
            Profile::Sin { omega, phase } => omega * (omega * s + phase).cos(),
            Profile::Power { n } => {
                if s > 0.0 {
                    n as f64 * s.powi(n - 1)
                } else {
                    0.0
                }
            }
            Profile::Gaussian { center, width } => {
                let z = (s - center) / width;
                -2.0 * z / width * (-z * z).exp()
            }
        }
    }

    pub fn d2(&self, s: f64) -> f64 {
        match *self {
            Profile::Sin { omega, phase } => -omega * omega * (omega * s + phase).sin(),
            Profile::Power { n } => {
                if s > 0.0 && n >= 2 {
                    (n * (n - 1)) as f64 * s.powi(n - 2)
                } else {
                    0.0
                }
            }
            Profile::Gaussian { center, width } => {
                let z = (s - center) / width;
                (4.0 * z * z - 2.0) / (width * width) * (-z * z).exp()
            }
        }
    }
}

/// The reference catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticKind {
    /// `f(t - d·x/c)` with unit direction `d`.
    PlaneWave { profile: Profile, direction: Point },
    /// `X(x) cos(ckt)` on an interval, `X = sin(kx)` or `cos(kx)`.
    StandingMode1d { k: f64, cosine: bool },
    /// `f(t - (|x - x_c| - r0)/c) / |x - x_c|`.
    SphericalOutgoing { center: Point, profile: Profile, r0: f64 },
    /// Free-space solution from `u₀ = A exp(-((x-x0)/w)²)` and
    /// `u̇₀ = B sech²((x-x1)/v)`.
    DAlembert1d { a: f64, x0: f64, w: f64, b: f64, x1: f64, v: f64 },
    /// `v (t - x/c) H(t - x/c)`, the front launched by a ramp at `x = 0`.
    RampShock1d { v: f64 },
    /// `a t² + b |x|²` in `N` dimensions, with `G = 2Nb - 2a/c²`.
    Quadratic { a: f64, b: f64, dim: usize },
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSolution {
    pub kind: AnalyticKind,
    pub c: f64,
}

/// Builds a catalog solution, validating its parameters.
pub fn analytic_reference(kind: AnalyticKind, c: f64) -> Result<AnalyticSolution> {
    if !(c > 0.0) {
        return Err(WaveError::Config(format!("wave speed must be positive, got {c}")));
    }
    match &kind {
        AnalyticKind::PlaneWave { direction, .. } if (direction.norm() - 1.0).abs() > 1e-12 => {
            return Err(WaveError::Config("plane wave direction must be a unit vector".into()));
        }
        AnalyticKind::DAlembert1d { w, v, .. } if !(*w > 0.0 && *v > 0.0) => {
            return Err(WaveError::Config("pulse widths must be positive".into()));
        }
        AnalyticKind::Quadratic { dim, .. } if !(1..=3).contains(dim) => {
            return Err(WaveError::Config(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        _ => {}
    }
    Ok(AnalyticSolution { kind, c })
}

fn sech2(z: f64) -> f64 {
    let c = z.cosh();
    1.0 / (c * c)
}

impl AnalyticSolution {
    /// `(u, u_t, ∇u)` at `(x, t)`.
    pub fn jet(&self, x: &Point, t: f64) -> (f64, f64, Point) {
        let c = self.c;
        match &self.kind {
            AnalyticKind::PlaneWave { profile, direction } => {
                let s = t - direction.dot(x) / c;
                let d1 = profile.d1(s);
                (profile.value(s), d1, direction * (-d1 / c))
            }
            AnalyticKind::StandingMode1d { k, cosine } => {
                let (xs, dxs) = if *cosine {
                    ((k * x.x).cos(), -k * (k * x.x).sin())
                } else {
                    ((k * x.x).sin(), k * (k * x.x).cos())
                };
                let w = c * k;
                let (ct, dct) = ((w * t).cos(), -w * (w * t).sin());
                (xs * ct, xs * dct, Point::new(dxs * ct, 0.0, 0.0))
            }
            AnalyticKind::SphericalOutgoing { center, profile, r0 } => {
                let d = x - center;
                let r = d.norm();
                let s = t - (r - r0) / c;
                let f = profile.value(s);
                let f1 = profile.d1(s);
                let dr = -f1 / (c * r) - f / (r * r);
                (f / r, f1 / r, d * (dr / r))
            }
            AnalyticKind::DAlembert1d { a, x0, w, b, x1, v } => {
                let g = |y: f64| a * (-((y - x0) / w).powi(2)).exp();
                let dg = |y: f64| -2.0 * a * (y - x0) / (w * w) * (-((y - x0) / w).powi(2)).exp();
                let h = |y: f64| b * sech2((y - x1) / v);
                let big_h = |y: f64| b * v * ((y - x1) / v).tanh();
                let (p, m) = (x.x + c * t, x.x - c * t);
                let u = 0.5 * (g(p) + g(m)) + (big_h(p) - big_h(m)) / (2.0 * c);
                let ut = 0.5 * c * (dg(p) - dg(m)) + 0.5 * (h(p) + h(m));
                let ux = 0.5 * (dg(p) + dg(m)) + (h(p) - h(m)) / (2.0 * c);
                (u, ut, Point::new(ux, 0.0, 0.0))
            }
            AnalyticKind::RampShock1d { v } => {
                let s = t - x.x / c;
                if s > 0.0 {
                    (v * s, *v, Point::new(-v / c, 0.0, 0.0))
                } else {
                    (0.0, 0.0, Point::zeros())
                }
            }
            AnalyticKind::Quadratic { a, b, dim } => {
                let mut y = *x;
                for k in *dim..3 {
                    y[k] = 0.0;
                }
                (a * t * t + b * y.norm_squared(), 2.0 * a * t, y * (2.0 * b))
            }
            AnalyticKind::Constant { value } => (*value, 0.0, Point::zeros()),
        }
    }

    /// Value of `□_c u` (the source `G` this solution satisfies).
    pub fn source_value(&self) -> f64 {
        match &self.kind {
            AnalyticKind::Quadratic { a, b, dim } => 2.0 * *dim as f64 * b - 2.0 * a / (self.c * self.c),
            _ => 0.0,
        }
    }

    pub fn source(&self) -> Arc<dyn Field> {
        let g = self.source_value();
        if g == 0.0 {
            Arc::new(Zero)
        } else {
            Arc::new(Constant(g))
        }
    }

    /// Second time derivative, used by the residual checks.
    pub fn second_time_derivative(&self, x: &Point, t: f64) -> f64 {
        let c = self.c;
        match &self.kind {
            AnalyticKind::PlaneWave { profile, direction } => profile.d2(t - direction.dot(x) / c),
            AnalyticKind::StandingMode1d { k, .. } => -(c * k).powi(2) * self.jet(x, t).0,
            AnalyticKind::SphericalOutgoing { center, profile, r0 } => {
                let r = (x - center).norm();
                profile.d2(t - (r - r0) / c) / r
            }
            AnalyticKind::Quadratic { a, .. } => 2.0 * a,
            _ => {
                let h = 1e-4;
                (self.value(x, t + h) - 2.0 * self.value(x, t) + self.value(x, t - h)) / (h * h)
            }
        }
    }

    pub fn cauchy(self: &Arc<Self>) -> CauchyData {
        CauchyData {
            displacement: self.clone(),
            velocity: Arc::new(Velocity(self.clone())),
            source: self.source(),
        }
    }
}

impl Field for AnalyticSolution {
    fn value(&self, x: &Point, t: f64) -> f64 {
        self.jet(x, t).0
    }
    fn time_derivative(&self, x: &Point, t: f64) -> f64 {
        self.jet(x, t).1
    }
    fn gradient(&self, x: &Point, t: f64) -> Point {
        self.jet(x, t).2
    }
    fn is_zero(&self) -> bool {
        matches!(self.kind, AnalyticKind::Constant { value } if value == 0.0)
            || matches!(self.kind, AnalyticKind::DAlembert1d { a, b, .. } if a == 0.0 && b == 0.0)
    }
}

/// `u_t` of an analytic solution, with its own analytic gradient.
pub struct Velocity(pub Arc<AnalyticSolution>);

impl Field for Velocity {
    fn value(&self, x: &Point, t: f64) -> f64 {
        self.0.jet(x, t).1
    }
    fn time_derivative(&self, x: &Point, t: f64) -> f64 {
        self.0.second_time_derivative(x, t)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero() || matches!(self.0.kind, AnalyticKind::Constant { .. })
    }
}
