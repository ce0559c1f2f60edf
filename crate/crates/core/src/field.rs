//! Space-time fields, Cauchy data and sampled boundary traces.

use std::sync::Arc;

use crate::error::{Result, WaveError};
use crate::geometry::{BoundaryGeometry, Point, TimeGrid};

/// A scalar function `f(x, t)`. Derivatives default to central differences.
pub trait Field: Send + Sync {
    fn value(&self, x: &Point, t: f64) -> f64;

    fn time_derivative(&self, x: &Point, t: f64) -> f64 {
        let h = 1e-5 * (1.0 + t.abs());
        (self.value(x, t + h) - self.value(x, t - h)) / (2.0 * h)
    }

    fn gradient(&self, x: &Point, t: f64) -> Point {
        let h = 1e-5 * (1.0 + x.norm());
        let mut g = Point::zeros();
        for k in 0..3 {
            let mut e = Point::zeros();
            e[k] = h;
            g[k] = (self.value(&(x + e), t) - self.value(&(x - e), t)) / (2.0 * h);
        }
        g
    }

    /// Lets integrators skip terms that vanish identically.
    fn is_zero(&self) -> bool {
        false
    }
}

/// The zero field.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl Field for Zero {
    fn value(&self, _: &Point, _: f64) -> f64 {
        0.0
    }
    fn time_derivative(&self, _: &Point, _: f64) -> f64 {
        0.0
    }
    fn gradient(&self, _: &Point, _: f64) -> Point {
        Point::zeros()
    }
    fn is_zero(&self) -> bool {
        true
    }
}

/// Constant field.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl Field for Constant {
    fn value(&self, _: &Point, _: f64) -> f64 {
        self.0
    }
    fn time_derivative(&self, _: &Point, _: f64) -> f64 {
        0.0
    }
    fn gradient(&self, _: &Point, _: f64) -> Point {
        Point::zeros()
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

/// Closure-backed field without analytic derivatives.
pub struct FnField<F>(pub F);

impl<F: Fn(&Point, f64) -> f64 + Send + Sync> Field for FnField<F> {
    fn value(&self, x: &Point, t: f64) -> f64 {
        (self.0)(x, t)
    }
}

/// The time derivative of a field, as a field.
pub struct TimeDerivative(pub Arc<dyn Field>);

impl Field for TimeDerivative {
    fn value(&self, x: &Point, t: f64) -> f64 {
        self.0.time_derivative(x, t)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Initial displacement `u₀`, initial velocity `u̇₀` (both read at `t = 0`)
/// and the source `G` of `□_c u = G`.
#[derive(Clone)]
pub struct CauchyData {
    pub displacement: Arc<dyn Field>,
    pub velocity: Arc<dyn Field>,
    pub source: Arc<dyn Field>,
}

impl CauchyData {
    pub fn zero() -> Self {
        CauchyData { displacement: Arc::new(Zero), velocity: Arc::new(Zero), source: Arc::new(Zero) }
    }

    /// Cauchy data read off a solution field, with `G` supplied separately.
    pub fn from_solution(u: Arc<dyn Field>, source: Arc<dyn Field>) -> Self {
        CauchyData { displacement: u.clone(), velocity: Arc::new(TimeDerivative(u)), source }
    }

    pub fn is_zero(&self) -> bool {
        self.displacement.is_zero() && self.velocity.is_zero() && self.source.is_zero()
    }
}

impl std::fmt::Debug for CauchyData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CauchyData").field("zero", &self.is_zero()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// Boundary values `u_S`.
    Trace,
    /// Normal derivative `p = ∂u/∂n`.
    Flux,
}

/// Nodal boundary samples at `t_k = kΔt`, `k = 0..=K`, linear in time
/// between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSeries {
    pub kind: TraceKind,
    pub nodes: usize,
    pub dt: f64,
    values: Vec<f64>,
}

impl TraceSeries {
    pub fn zeros(kind: TraceKind, nodes: usize, grid: &TimeGrid) -> Self {
        TraceSeries { kind, nodes, dt: grid.dt, values: vec![0.0; nodes * (grid.steps + 1)] }
    }

    pub fn from_values(kind: TraceKind, nodes: usize, dt: f64, values: Vec<f64>) -> Result<Self> {
        if nodes == 0 || values.is_empty() || values.len() % nodes != 0 {
            return Err(WaveError::Coverage(format!("{} samples do not fill {nodes} nodes", values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(WaveError::Discretization(format!("non-finite trace sample at index {k}")));
        }
        Ok(TraceSeries { kind, nodes, dt, values })
    }

    /// Samples `u` (or `∂u/∂n`) of an analytic field at the boundary nodes.
    pub fn sample(kind: TraceKind, geom: &BoundaryGeometry, grid: &TimeGrid, u: &dyn Field) -> Self {
        let n = geom.node_count();
        let mut values = Vec::with_capacity(n * (grid.steps + 1));
        for k in 0..=grid.steps {
            let t = grid.time(k);
            for i in 0..n {
                let x = geom.node_point(i);
                values.push(match kind {
                    TraceKind::Trace => u.value(&x, t),
                    TraceKind::Flux => u.gradient(&x, t).dot(&geom.node_normal(i)),
                });
            }
        }
        TraceSeries { kind, nodes: n, dt: grid.dt, values }
    }

    pub fn steps(&self) -> usize {
        self.values.len() / self.nodes - 1
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps() as f64
    }

    pub fn get(&self, node: usize, step: usize) -> f64 {
        self.values[step * self.nodes + node]
    }

    pub fn set(&mut self, node: usize, step: usize, v: f64) {
        self.values[step * self.nodes + node] = v;
    }

    pub fn step_values(&self, step: usize) -> &[f64] {
        &self.values[step * self.nodes..(step + 1) * self.nodes]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation in time; zero for `t < 0`.
    pub fn at(&self, node: usize, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let s = t / self.dt;
        let k = (s.floor() as usize).min(self.steps().saturating_sub(1));
        let th = s - k as f64;
        if self.steps() == 0 {
            return self.get(node, 0);
        }
        (1.0 - th) * self.get(node, k) + th * self.get(node, k + 1)
    }

    /// Time derivative on step `[k, k+1]` of the quadratic through samples
    /// `k-1, k, k+1`; the first step uses the chord. Never reads past `k+1`.
    pub fn rate(&self, node: usize, t: f64) -> f64 {
        if t < 0.0 || self.steps() == 0 {
            return 0.0;
        }
        let s = t / self.dt;
        let k = (s.floor() as usize).min(self.steps() - 1);
        let (u0, u1) = (self.get(node, k), self.get(node, k + 1));
        if k == 0 {
            return (u1 - u0) / self.dt;
        }
        let um = self.get(node, k - 1);
        let th = s - k as f64;
        (0.5 * (u1 - um) + th * (u1 - 2.0 * u0 + um)) / self.dt
    }

    pub fn require_horizon(&self, t: f64) -> Result<()> {
        if t > self.horizon() * (1.0 + 1e-12) + 1e-14 {
            return Err(WaveError::Coverage(format!(
                "trace series ends at t = {}, evaluation needs t = {t}",
                self.horizon()
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
