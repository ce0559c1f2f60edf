//! Marching-on-in-time collocation for the Dirichlet and Neumann problems
//! (N = 2, 3) and the lagging-argument endpoint recursion (N = 1).
//!
//! The discrete boundary equation at node `i` and step `k` reads
//! `F_i u_i^k = Σ_m P(k, m) p^m + Σ_m Q(k, m) u^m + C_i^k`, with `F` the
//! free term times `2π` or `4π`, `P`, `Q` lag operators built from the
//! retarded layers and `C` the Cauchy-data and source terms.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Result, WaveError};
use crate::field::{CauchyData, TraceKind, TraceSeries};
use crate::geometry::{BoundaryGeometry, Curve, CurveShape, FacetFrame, Surface, TimeGrid};
use crate::oracle::AnalyticSolution;
use crate::quadrature::curve::{curve_pieces, element_hats, integrate_pieces, Anchor};
use crate::quadrature::facet::{barycentric, facet_rules, integrate_facet};
use crate::quadrature::time::{hat_weights_2d, rate_weight_2d, retarded_lag};
use crate::quadrature::{free_term, GaussLegendre};
use crate::representation::{
    cauchy_terms_1d, cauchy_terms_2d, cauchy_terms_3d, endpoint_terms_1d, normalization, running_integral, BoundaryData,
    RepresentationRule,
};

/// Largest acceptable condition number of the step matrix.
pub const MAX_CONDITION: f64 = 1e12;
/// Courant window `cΔt/h` outside of which the march is flagged.
pub const STABILITY_WINDOW: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvpKind {
    /// `u_S` given, flux unknown.
    Dirichlet,
    /// Flux given, `u_S` unknown.
    Neumann,
}

impl BvpKind {
    pub fn given_kind(self) -> TraceKind {
        match self {
            BvpKind::Dirichlet => TraceKind::Trace,
            BvpKind::Neumann => TraceKind::Flux,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub geometry: BoundaryGeometry,
    pub grid: TimeGrid,
    pub kind: BvpKind,
    pub given: TraceSeries,
    pub cauchy: CauchyData,
    pub rule: RepresentationRule,
}

impl Scenario {
    pub fn new(geometry: BoundaryGeometry, grid: TimeGrid, kind: BvpKind, given: TraceSeries, cauchy: CauchyData) -> Result<Self> {
        if given.kind != kind.given_kind() {
            return Err(WaveError::Misuse(format!("{kind:?} problem given a {:?} series", given.kind)));
        }
        if given.nodes != geometry.node_count() {
            return Err(WaveError::Coverage(format!("given series has {} nodes, boundary has {}", given.nodes, geometry.node_count())));
        }
        if given.steps() != grid.steps || (given.dt - grid.dt).abs() > 1e-12 * grid.dt {
            return Err(WaveError::Coverage("given series does not match the time grid".into()));
        }
        if kind == BvpKind::Dirichlet {
            // boundary and initial data must agree at t = 0
            for i in 0..geometry.node_count() {
                let x = geometry.node_point(i);
                let gap = (given.get(i, 0) - cauchy.displacement.value(&x, 0.0)).abs();
                if gap > 1e-8 {
                    return Err(WaveError::Config(format!("u_S(·, 0) differs from u₀ by {gap:e} at node {i}")));
                }
            }
        }
        Ok(Scenario { geometry, grid, kind, given, cauchy, rule: RepresentationRule::default() })
    }

    /// Scenario whose data are read off a known solution.
    pub fn manufactured(geometry: BoundaryGeometry, grid: TimeGrid, kind: BvpKind, u: &Arc<AnalyticSolution>) -> Result<Self> {
        let given = TraceSeries::sample(kind.given_kind(), &geometry, &grid, u.as_ref());
        Scenario::new(geometry, grid, kind, given, u.cauchy())
    }

    pub fn with_rule(mut self, rule: RepresentationRule) -> Self {
        self.rule = rule;
        self
    }

    /// Values at `t = 0` of the unknown series, from the Cauchy data.
    fn initial_unknown(&self) -> Vec<f64> {
        let geom = &self.geometry;
        (0..geom.node_count())
            .map(|i| {
                let x = geom.node_point(i);
                match self.kind {
                    BvpKind::Dirichlet => self.cauchy.displacement.gradient(&x, 0.0).dot(&geom.node_normal(i)),
                    BvpKind::Neumann => self.cauchy.displacement.value(&x, 0.0),
                }
            })
            .collect()
    }
}

/// Lag-indexed influence blocks: the coefficient of density step `m` in
/// the equation at step `k` is `first[k]` for `m = 0` and `full[k - m]`
/// otherwise; missing lags are zero.
#[derive(Debug, Clone)]
pub struct LagOperator {
    pub full: Vec<DMatrix<f64>>,
    pub first: Vec<DMatrix<f64>>,
}

impl LagOperator {
    fn zeros(n: usize, lags: usize) -> Self {
        LagOperator { full: vec![DMatrix::zeros(n, n); lags], first: vec![DMatrix::zeros(n, n); lags] }
    }

    pub fn block(&self, k: usize, m: usize) -> Option<&DMatrix<f64>> {
        if m == 0 { self.first.get(k) } else { self.full.get(k - m) }
    }

    /// `Σ_{m < k} block(k, m) · series(m)`.
    fn history(&self, k: usize, series: &TraceSeries) -> DVector<f64> {
        let mut acc = DVector::zeros(series.nodes);
        for m in 0..k {
            if let Some(b) = self.block(k, m) {
                acc += b * DVector::from_column_slice(series.step_values(m));
            }
        }
        acc
    }

    /// Largest lag with a nonzero block.
    pub fn support(&self) -> usize {
        let nz = |b: &DMatrix<f64>| b.iter().any(|v| *v != 0.0);
        (0..self.full.len()).rev().find(|&l| nz(&self.full[l]) || nz(&self.first[l])).unwrap_or(0)
    }
}

/// Assembled marching system.
#[derive(Debug, Clone)]
pub struct MotSystem {
    pub dim: usize,
    pub nodes: usize,
    pub steps: usize,
    /// Free term times the normalization, per node.
    pub free: Vec<f64>,
    /// Flux operator.
    pub flux: LagOperator,
    /// Trace operator.
    pub trace: LagOperator,
    /// Known Cauchy-data and source terms `C_i^k`, step-major.
    pub rhs: Vec<f64>,
    /// Non-fatal diagnostics such as a Courant number outside the window.
    pub warnings: Vec<String>,
}

impl MotSystem {
    fn rhs_step(&self, k: usize) -> DVector<f64> {
        DVector::from_column_slice(&self.rhs[k * self.nodes..(k + 1) * self.nodes])
    }

    /// Matrix solved at every step for the unknown series.
    pub fn step_matrix(&self, kind: BvpKind) -> DMatrix<f64> {
        match kind {
            BvpKind::Dirichlet => self.flux.full[0].clone(),
            BvpKind::Neumann => DMatrix::from_diagonal(&DVector::from_vec(self.free.clone())) - &self.trace.full[0],
        }
    }

    /// Residual `F u^k - Σ P p - Σ Q u - C^k` of both series.
    pub fn residual(&self, data: &BoundaryData) -> Vec<f64> {
        let n = self.nodes;
        let mut out = vec![0.0; n * (self.steps + 1)];
        for k in 1..=self.steps {
            let u = DVector::from_column_slice(data.trace.step_values(k));
            let p = DVector::from_column_slice(data.flux.step_values(k));
            let mut r = self.flux.history(k, &data.flux) + self.trace.history(k, &data.trace) + self.rhs_step(k);
            r += &self.flux.full[0] * p + &self.trace.full[0] * &u;
            for i in 0..n {
                out[k * n + i] = self.free[i] * u[i] - r[i];
            }
        }
        out
    }
}

fn min_spacing(geom: &BoundaryGeometry) -> f64 {
    match geom {
        BoundaryGeometry::Interval(iv) => iv.length(),
        BoundaryGeometry::Curve(c) => (0..c.element_count())
            .map(|e| {
                let (a, b) = c.element_nodes(e);
                (c.node_point(a) - c.node_point(b)).norm()
            })
            .fold(f64::INFINITY, f64::min),
        BoundaryGeometry::Surface(s) => s
            .triangles()
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| (s.vertices()[a] - s.vertices()[b]).norm())
            .fold(f64::INFINITY, f64::min),
    }
}

pub fn assemble(scenario: &Scenario) -> Result<MotSystem> {
    let geom = &scenario.geometry;
    let grid = &scenario.grid;
    let n = geom.node_count();
    let mut warnings = Vec::new();
    let courant = grid.c * grid.dt / min_spacing(geom);
    if courant < STABILITY_WINDOW.0 || courant > STABILITY_WINDOW.1 {
        warnings.push(format!(
            "cΔt/h = {courant:.3} is outside [{}, {}]; the march may be inaccurate or unstable",
            STABILITY_WINDOW.0, STABILITY_WINDOW.1
        ));
    }
    let free: Vec<f64> = (0..n)
        .map(|i| free_term(geom, &geom.node_point(i)).map(|chi| chi * normalization(geom.dimension())))
        .collect::<Result<_>>()?;
    let (flux, trace) = match geom {
        BoundaryGeometry::Curve(c) => assemble_2d(c, grid, &scenario.rule),
        BoundaryGeometry::Surface(s) => assemble_3d(s, geom.diameter(), grid, &scenario.rule),
        BoundaryGeometry::Interval(_) => {
            return Err(WaveError::Misuse("N = 1 is solved by the endpoint recursion, not by MOT".into()))
        }
    };
    let rhs = cauchy_rhs(scenario)?;
    Ok(MotSystem { dim: geom.dimension(), nodes: n, steps: grid.steps, free, flux, trace, rhs, warnings })
}

fn cauchy_rhs(scenario: &Scenario) -> Result<Vec<f64>> {
    let geom = &scenario.geometry;
    let grid = &scenario.grid;
    let n = geom.node_count();
    if scenario.cauchy.is_zero() {
        return Ok(vec![0.0; n * (grid.steps + 1)]);
    }
    let jobs: Vec<(usize, usize)> = (0..=grid.steps).flat_map(|k| (0..n).map(move |i| (k, i))).collect();
    let vals: Vec<f64> = jobs
        .par_iter()
        .map(|&(k, i)| {
            let x = geom.node_point(i);
            let t = grid.time(k);
            match geom {
                BoundaryGeometry::Curve(_) => cauchy_terms_2d(geom, grid.c, &scenario.cauchy, &x, t, &scenario.rule),
                _ => cauchy_terms_3d(geom, grid.c, &scenario.cauchy, &x, t, &scenario.rule),
            }
        })
        .collect();
    if let Some(j) = vals.iter().position(|v| !v.is_finite()) {
        let (k, i) = jobs[j];
        return Err(WaveError::Discretization(format!("non-finite initial-data term at node {i}, step {k}")));
    }
    Ok(vals)
}

fn stack(rows: Vec<Vec<Vec<f64>>>, n: usize, lags: usize) -> Vec<DMatrix<f64>> {
    (0..lags).map(|l| DMatrix::from_fn(n, n, |i, j| rows[i][l][j])).collect()
}

fn assemble_2d(cv: &Curve, grid: &TimeGrid, rule: &RepresentationRule) -> (LagOperator, LagOperator) {
    let n = cv.node_count();
    let (c, dt, k_max) = (grid.c, grid.dt, grid.steps);
    let lags = k_max + 1;
    let gl = GaussLegendre::new(rule.quadrature.singular_order);
    let radii: Vec<f64> = (1..=lags).map(|l| c * dt * l as f64).collect();
    let r_max = c * grid.horizon();
    // per row: rising / falling hat weights and rate weights for every lag
    let rows: Vec<[Vec<Vec<f64>>; 3]> = (0..n)
        .into_par_iter()
        .map(|i| {
            let anchor = Anchor { x: cv.node_point(i), param: Some(cv.node_param(i)) };
            let mut left = vec![vec![0.0; n]; lags];
            let mut right = vec![vec![0.0; n]; lags];
            let mut rate = vec![vec![0.0; n]; lags];
            let pieces = curve_pieces(cv, &anchor, r_max, &radii);
            integrate_pieces(cv, &anchor, &pieces, &gl, |e, s, _, d, w| {
                let r = d.norm();
                let hats = element_hats(cv, e, s);
                let dn = d.dot(&cv.element_normal(e, s));
                let kern = if r > 0.0 { dn / (r * r) } else { 0.0 };
                let l0 = ((r / (c * dt)).ceil() as usize).saturating_sub(1);
                for l in l0..lags {
                    let (a, b) = hat_weights_2d(r, c, dt, l);
                    let q = if kern != 0.0 { kern * rate_weight_2d(r, c, dt, l) } else { 0.0 };
                    for &(j, h) in &hats {
                        left[l][j] += w * c * h * a;
                        right[l][j] += w * c * h * b;
                        rate[l][j] += w * c * h * q;
                    }
                }
            });
            [left, right, rate]
        })
        .collect();
    let mut lr = Vec::with_capacity(n);
    let mut rr = Vec::with_capacity(n);
    let mut dr = Vec::with_capacity(n);
    for [l, r, d] in rows {
        lr.push(l);
        rr.push(r);
        dr.push(d);
    }
    let left = stack(lr, n, lags);
    let right = stack(rr, n, lags);
    let rate = stack(dr, n, lags);
    let mut flux = LagOperator::zeros(n, lags);
    let mut trace = LagOperator::zeros(n, lags);
    for l in 0..lags {
        flux.full[l] = &left[l] + &right[l];
        flux.first[l] = left[l].clone();
        // u̇ on (t_{m-1}, t_m) is (u^m - u^{m-1})/Δt
        let prev = if l > 0 { rate[l - 1].clone() } else { DMatrix::zeros(n, n) };
        trace.full[l] = (&rate[l] - &prev) / dt;
        trace.first[l] = -prev / dt;
    }
    (flux, trace)
}

fn assemble_3d(s: &Surface, diameter: f64, grid: &TimeGrid, rule: &RepresentationRule) -> (LagOperator, LagOperator) {
    let n = s.vertices().len();
    let (c, dt) = (grid.c, grid.dt);
    let lags = ((diameter / (c * dt)).ceil() as usize + 2).min(grid.steps + 1);
    let near = (GaussLegendre::new(rule.quadrature.angular_order), GaussLegendre::new(rule.quadrature.order));
    let far = (GaussLegendre::new(rule.quadrature.order.div_ceil(2) + 2), GaussLegendre::new(rule.quadrature.order.div_ceil(2)));
    let radii: Vec<f64> = (1..=lags).map(|l| c * dt * l as f64).collect();
    let r_max = (c * grid.horizon()).min(diameter * (1.0 + 1e-9));
    // coefficient of f^{k-ℓ} ("a") and f^{k-ℓ-1} ("b") for p and u
    let rows: Vec<[Vec<Vec<f64>>; 4]> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = s.vertices()[i];
            let mut blocks: [Vec<Vec<f64>>; 4] = std::array::from_fn(|_| vec![vec![0.0; n]; lags]);
            for (tri, ids) in s.triangles().iter().enumerate() {
                let corners = s.corners(tri);
                let normal = s.normal(tri);
                let frame = FacetFrame::new(&corners, &normal, &x);
                let (psi, rho) = facet_rules(&near, &far, s.triangle_distance(tri, &x), s.triangle_size(tri));
                let dn = frame.normal_offset();
                integrate_facet(&frame, &radii, 0.0, r_max, psi, rho, |y, r, w| {
                    if r <= 0.0 {
                        return;
                    }
                    let (l, th) = retarded_lag(r / c, dt);
                    if l >= lags {
                        return;
                    }
                    let b = barycentric(&corners, y);
                    let dr = dn / r;
                    let sl = w / r;
                    let dl = w * dr / (r * r);
                    let vel = w * dr / (c * r * dt);
                    for k in 0..3 {
                        let j = ids[k];
                        blocks[0][l][j] += b[k] * sl * (1.0 - th);
                        blocks[1][l][j] += b[k] * sl * th;
                        blocks[2][l][j] += b[k] * (dl * (1.0 - th) + vel);
                        blocks[3][l][j] += b[k] * (dl * th - vel);
                    }
                });
            }
            blocks
        })
        .collect();
    let mut parts: [Vec<Vec<Vec<f64>>>; 4] = Default::default();
    for row in rows {
        for (q, b) in row.into_iter().enumerate() {
            parts[q].push(b);
        }
    }
    let [pa, pb, qa, qb] = parts.map(|p| stack(p, n, lags));
    let mut flux = LagOperator::zeros(n, lags + 1);
    let mut trace = LagOperator::zeros(n, lags + 1);
    for l in 0..=lags {
        let zero = DMatrix::zeros(n, n);
        let (a_p, a_q) = if l < lags { (pa[l].clone(), qa[l].clone()) } else { (zero.clone(), zero.clone()) };
        let (b_p, b_q) = if l > 0 { (pb[l - 1].clone(), qb[l - 1].clone()) } else { (zero.clone(), zero) };
        flux.full[l] = &a_p + &b_p;
        flux.first[l] = b_p;
        trace.full[l] = &a_q + &b_q;
        trace.first[l] = b_q;
    }
    (flux, trace)
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 { max / min } else { f64::INFINITY }
}

/// Marches the assembled system; returns both series.
pub fn march(scenario: &Scenario, system: &MotSystem) -> Result<BoundaryData> {
    let n = system.nodes;
    let grid = &scenario.grid;
    let b0 = system.step_matrix(scenario.kind);
    let cond = condition_number(&b0);
    if !(cond <= MAX_CONDITION) {
        return Err(WaveError::Discretization(format!(
            "step matrix condition number {cond:e} exceeds {MAX_CONDITION:e}; change the ratio cΔt/h"
        )));
    }
    let lu = b0.lu();
    let (mut trace, mut flux) = match scenario.kind {
        BvpKind::Dirichlet => (scenario.given.clone(), TraceSeries::zeros(TraceKind::Flux, n, grid)),
        BvpKind::Neumann => (TraceSeries::zeros(TraceKind::Trace, n, grid), scenario.given.clone()),
    };
    let init = scenario.initial_unknown();
    for (i, v) in init.into_iter().enumerate() {
        match scenario.kind {
            BvpKind::Dirichlet => flux.set(i, 0, v),
            BvpKind::Neumann => trace.set(i, 0, v),
        }
    }
    let free = DVector::from_vec(system.free.clone());
    for k in 1..=grid.steps {
        let known = system.flux.history(k, &flux) + system.trace.history(k, &trace) + system.rhs_step(k);
        let rhs = match scenario.kind {
            BvpKind::Dirichlet => {
                let u = DVector::from_column_slice(trace.step_values(k));
                free.component_mul(&u) - &system.trace.full[0] * &u - known
            }
            BvpKind::Neumann => {
                let p = DVector::from_column_slice(flux.step_values(k));
                &system.flux.full[0] * p + known
            }
        };
        let x = lu
            .solve(&rhs)
            .ok_or_else(|| WaveError::Discretization(format!("step matrix singular at step {k}")))?;
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(WaveError::Stability(format!("non-finite unknown at node {i}, step {k}")));
        }
        for i in 0..n {
            match scenario.kind {
                BvpKind::Dirichlet => flux.set(i, k, x[i]),
                BvpKind::Neumann => trace.set(i, k, x[i]),
            }
        }
    }
    BoundaryData::new(trace, flux)
}

/// Unknown flux of a Dirichlet problem.
pub fn solve_dirichlet(scenario: &Scenario) -> Result<TraceSeries> {
    if scenario.kind != BvpKind::Dirichlet {
        return Err(WaveError::Misuse("solve_dirichlet needs a Dirichlet scenario".into()));
    }
    Ok(solve(scenario)?.flux)
}

/// Unknown trace of a Neumann problem.
pub fn solve_neumann(scenario: &Scenario) -> Result<TraceSeries> {
    if scenario.kind != BvpKind::Neumann {
        return Err(WaveError::Misuse("solve_neumann needs a Neumann scenario".into()));
    }
    Ok(solve(scenario)?.trace)
}

/// Both boundary series, whatever the dimension.
pub fn solve(scenario: &Scenario) -> Result<BoundaryData> {
    match &scenario.geometry {
        BoundaryGeometry::Interval(_) => solve_1d_endpoints(scenario),
        _ => {
            let system = assemble(scenario)?;
            march(scenario, &system)
        }
    }
}

/// Endpoint recursion for N = 1. Each endpoint value satisfies
/// `u(a_k, t) = c ∫₀ᵗ p_k + H(ct - d)[c ∫₀^{t-d/c} p_j + u(a_j, t - d/c)] + C_k(t)`
/// with `d = a2 - a1`; the Neumann case is explicit, the Dirichlet case is
/// a Volterra equation for `∫ p_k` inverted with the trapezoidal rule.
pub fn solve_1d_endpoints(scenario: &Scenario) -> Result<BoundaryData> {
    let BoundaryGeometry::Interval(iv) = &scenario.geometry else {
        return Err(WaveError::Misuse("solve_1d_endpoints needs an interval".into()));
    };
    let grid = &scenario.grid;
    let (c, dt) = (grid.c, grid.dt);
    let d = iv.length();
    if dt > d / c {
        return Err(WaveError::Discretization(format!(
            "Δt = {dt} exceeds the crossing time d/c = {}; the lag must span at least one step",
            d / c
        )));
    }
    let (mut trace, mut flux) = match scenario.kind {
        BvpKind::Dirichlet => (scenario.given.clone(), TraceSeries::zeros(TraceKind::Flux, 2, grid)),
        BvpKind::Neumann => (TraceSeries::zeros(TraceKind::Trace, 2, grid), scenario.given.clone()),
    };
    for (k, v) in scenario.initial_unknown().into_iter().enumerate() {
        match scenario.kind {
            BvpKind::Dirichlet => flux.set(k, 0, v),
            BvpKind::Neumann => trace.set(k, 0, v),
        }
    }
    let cauchy = |k: usize, t: f64| cauchy_terms_1d(iv, c, &scenario.cauchy, iv.endpoint(k), t, &scenario.rule);
    // retarded contribution of the far endpoint; uses steps before `t` only
    let far = |trace: &TraceSeries, flux: &TraceSeries, j: usize, t: f64| -> f64 {
        if c * t > d {
            let ts = t - d / c;
            c * running_integral(flux, j, ts) + trace.at(j, ts)
        } else {
            0.0
        }
    };
    for step in 1..=grid.steps {
        let t = grid.time(step);
        for k in 0..2 {
            let j = 1 - k;
            let known = far(&trace, &flux, j, t) + cauchy(k, t);
            match scenario.kind {
                BvpKind::Neumann => {
                    let u = c * running_integral(&flux, k, t) + known;
                    trace.set(k, step, u);
                }
                BvpKind::Dirichlet => {
                    // c ∫₀ᵗ p_k = u(a_k, t) - known, trapezoid over the last step
                    let total = (trace.get(k, step) - known) / c;
                    let before = running_integral(&flux, k, grid.time(step - 1));
                    let p = 2.0 * (total - before) / dt - flux.get(k, step - 1);
                    flux.set(k, step, p);
                }
            }
        }
    }
    let out = BoundaryData::new(trace, flux)?;
    if let Some(v) = out.trace.values().iter().chain(out.flux.values()).find(|v| !v.is_finite()) {
        return Err(WaveError::Stability(format!("endpoint recursion produced {v}")));
    }
    Ok(out)
}

/// Per-node, per-step residual of the discrete boundary equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub nodes: usize,
    pub values: Vec<f64>,
}

impl Residual {
    pub fn get(&self, node: usize, step: usize) -> f64 {
        self.values[step * self.nodes + node]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Plugs both series back into the boundary equation.
pub fn boundary_residual(scenario: &Scenario, solved: &BoundaryData) -> Result<Residual> {
    let geom = &scenario.geometry;
    let n = geom.node_count();
    match geom {
        BoundaryGeometry::Interval(iv) => {
            let grid = &scenario.grid;
            let mut values = vec![0.0; 2 * (grid.steps + 1)];
            for step in 1..=grid.steps {
                let t = grid.time(step);
                for k in 0..2 {
                    let x = iv.endpoint(k);
                    // the endpoint formula counts u(a_k, t) once on each side
                    let rhs = endpoint_terms_1d(iv, grid.c, solved, x, t)
                        + cauchy_terms_1d(iv, grid.c, &scenario.cauchy, x, t, &scenario.rule);
                    values[step * 2 + k] = 2.0 * solved.trace.get(k, step) - rhs;
                }
            }
            Ok(Residual { nodes: 2, values })
        }
        _ => {
            let system = assemble(scenario)?;
            Ok(Residual { nodes: n, values: system.residual(solved) })
        }
    }
}

/// Shape tag for diagnostics.
pub fn describe(geom: &BoundaryGeometry) -> String {
    match geom {
        BoundaryGeometry::Interval(iv) => format!("interval ({}, {})", iv.a1, iv.a2),
        BoundaryGeometry::Curve(c) => match c.shape() {
            CurveShape::Ellipse { a, b, .. } => format!("ellipse {a}×{b}, {} nodes", c.node_count()),
            CurveShape::Polyline(p) => format!("polygon with {} vertices", p.len()),
        },
        BoundaryGeometry::Surface(s) => format!("surface mesh, {} vertices", s.vertices().len()),
    }
}

#[cfg(test)]
mod tests;
