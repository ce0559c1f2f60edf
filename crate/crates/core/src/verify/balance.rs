//! Energy and Lagrangian balances over `S⁻ × (0, t)`.
//!
//! With `E = ½(u̇²/c² + |∇u|²)` and `L = ½(u̇²/c² - |∇u|²)`:
//!
//! `∫(E(t) - E(0)) dV + ∫₀ᵗ∫ G u̇ dV dτ - ∫₀ᵗ∮ u̇ p dS dτ = 0`,
//! `2∫₀ᵗ∫ L dV dτ - ∫₀ᵗ∫ u G dV dτ + ∫₀ᵗ∮ u p dS dτ - c⁻²∫(u u̇ - u₀ u̇₀) dV = 0`.

use std::sync::Arc;

use crate::bie::Scenario;
use crate::error::{Result, WaveError};
use crate::field::Field;
use crate::geometry::{BoundaryGeometry, Point};
use crate::quadrature::volume::{integrate_boundary, integrate_domain, VolumeRule};
use crate::quadrature::GaussLegendre;
use crate::verify::FrontSet;

/// A field audited through its value, rate and gradient.
#[derive(Clone)]
pub struct FieldProbe {
    field: Arc<dyn Field>,
}

impl FieldProbe {
    pub fn new(field: Arc<dyn Field>) -> Self {
        FieldProbe { field }
    }

    /// `(u, u̇, ∇u)`; non-finite values are a probe error.
    pub fn jet(&self, x: &Point, t: f64) -> Result<(f64, f64, Point)> {
        let u = self.field.value(x, t);
        let ut = self.field.time_derivative(x, t);
        let g = self.field.gradient(x, t);
        if !(u.is_finite() && ut.is_finite() && g.iter().all(|v| v.is_finite())) {
            return Err(WaveError::Probe(format!("field undefined at ({}, {}, {}), t = {t}", x.x, x.y, x.z)));
        }
        Ok((u, ut, g))
    }
}

impl std::fmt::Debug for FieldProbe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FieldProbe")
    }
}

#[derive(Debug, Clone)]
pub struct BalanceRule {
    pub volume: VolumeRule,
    pub boundary_order: usize,
    pub time: GaussLegendre,
    pub time_panels: usize,
    /// Fronts across which the volume panels are split.
    pub fronts: Option<FrontSet>,
}

impl Default for BalanceRule {
    fn default() -> Self {
        BalanceRule { volume: VolumeRule::default(), boundary_order: 8, time: GaussLegendre::new(8), time_panels: 16, fronts: None }
    }
}

/// Collects the first probe error raised inside a quadrature closure.
struct Guard {
    err: std::cell::RefCell<Option<WaveError>>,
}

impl Guard {
    fn new() -> Self {
        Guard { err: std::cell::RefCell::new(None) }
    }

    fn jet(&self, probe: &FieldProbe, x: &Point, t: f64) -> (f64, f64, Point) {
        match probe.jet(x, t) {
            Ok(j) => j,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                (0.0, 0.0, Point::zeros())
            }
        }
    }

    fn finish(self, v: f64) -> Result<f64> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

fn volume(geom: &BoundaryGeometry, rule: &BalanceRule, t: f64, f: &dyn Fn(&Point) -> f64) -> Result<f64> {
    let level = rule.fronts.as_ref().map(|fr| move |y: &Point| fr.offset(y, t));
    let lref = level.as_ref().map(|l| l as &dyn Fn(&Point) -> f64);
    integrate_domain(geom, &rule.volume, lref, f)
}

fn in_time(rule: &BalanceRule, t: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let n = rule.time_panels.max(1);
    let h = t / n as f64;
    let mut acc = 0.0;
    for p in 0..n {
        for (tau, w) in rule.time.mapped(p as f64 * h, (p + 1) as f64 * h) {
            acc += w * f(tau)?;
        }
    }
    Ok(acc)
}

fn check(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WaveError::Domain(format!("balance time {t} must be non-negative")));
    }
    Ok(())
}

/// `∫_{S⁻} ½(u̇²/c² + |∇u|²) dV` at time `t`.
pub fn total_energy(scenario: &Scenario, probe: &FieldProbe, t: f64, rule: &BalanceRule) -> Result<f64> {
    let c = scenario.grid.c;
    let g = Guard::new();
    let v = volume(&scenario.geometry, rule, t, &|y| {
        let (_, ut, grad) = g.jet(probe, y, t);
        0.5 * (ut * ut / (c * c) + grad.norm_squared())
    })?;
    g.finish(v)
}

/// Residual of the energy identity at time `t`.
pub fn energy_balance_residual(scenario: &Scenario, probe: &FieldProbe, t: f64, rule: &BalanceRule) -> Result<f64> {
    check(t)?;
    let geom = &scenario.geometry;
    let source = scenario.cauchy.source.clone();
    let energy = |tau: f64| total_energy(scenario, probe, tau, rule);
    let work = in_time(rule, t, &|tau| {
        if source.is_zero() {
            return Ok(0.0);
        }
        let g = Guard::new();
        let v = volume(geom, rule, tau, &|y| source.value(y, tau) * g.jet(probe, y, tau).1)?;
        g.finish(v)
    })?;
    let flux = in_time(rule, t, &|tau| {
        let g = Guard::new();
        let v = integrate_boundary(geom, rule.boundary_order, &|y, n| {
            let (_, ut, grad) = g.jet(probe, y, tau);
            ut * grad.dot(n)
        });
        g.finish(v)
    })?;
    Ok((energy(t)? - energy(0.0)? + work - flux).abs())
}

/// Residual of the Lagrangian identity at time `t`.
pub fn lagrangian_balance_residual(scenario: &Scenario, probe: &FieldProbe, t: f64, rule: &BalanceRule) -> Result<f64> {
    check(t)?;
    let geom = &scenario.geometry;
    let c = scenario.grid.c;
    let source = scenario.cauchy.source.clone();
    let action = in_time(rule, t, &|tau| {
        let g = Guard::new();
        let v = volume(geom, rule, tau, &|y| {
            let (u, ut, grad) = g.jet(probe, y, tau);
            (ut * ut / (c * c) - grad.norm_squared()) - u * source.value(y, tau)
        })?;
        g.finish(v)
    })?;
    let flux = in_time(rule, t, &|tau| {
        let g = Guard::new();
        let v = integrate_boundary(geom, rule.boundary_order, &|y, n| {
            let (u, _, grad) = g.jet(probe, y, tau);
            u * grad.dot(n)
        });
        g.finish(v)
    })?;
    let moment = |tau: f64| -> Result<f64> {
        let g = Guard::new();
        let v = volume(geom, rule, tau, &|y| {
            let (u, ut, _) = g.jet(probe, y, tau);
            u * ut
        })?;
        g.finish(v)
    };
    Ok((action + flux - (moment(t)? - moment(0.0)?) / (c * c)).abs())
}
