//! Explicit second-order finite differences for `u_tt = c²(Δu - G)` on a
//! tensor grid (N = 1, 2).
//!
//! Interval and axis-aligned rectangle boundaries fall on grid lines:
//! Dirichlet values are imposed on the boundary nodes, Neumann data through
//! mirrored ghost values. Other curves take Dirichlet data only, with
//! Shortley–Weller arms to the boundary crossings. An arm so short that the
//! explicit step would be unstable turns its node into an interpolant
//! between the boundary value and the opposite neighbour.

use std::sync::Arc;

use crate::bie::{BvpKind, Scenario};
use crate::error::{Result, WaveError};
use crate::field::{CauchyData, Field};
use crate::geometry::{BoundaryGeometry, Curve, CurveShape, Point};
use crate::quadrature::curve::element_hats;

/// Boundary datum `g(y, n, t)`: the trace for Dirichlet problems, `∂u/∂n`
/// for Neumann problems, given the point and the outward normal there.
pub type BoundaryValue = Arc<dyn Fn(&Point, &Point, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct FdProblem {
    pub geometry: BoundaryGeometry,
    pub c: f64,
    pub kind: BvpKind,
    pub boundary: BoundaryValue,
    pub cauchy: CauchyData,
    pub horizon: f64,
}

impl std::fmt::Debug for FdProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FdProblem").field("c", &self.c).field("kind", &self.kind).field("horizon", &self.horizon).finish()
    }
}

impl FdProblem {
    /// Boundary data read off a known field.
    pub fn manufactured(geometry: BoundaryGeometry, c: f64, kind: BvpKind, u: Arc<dyn Field>, source: Arc<dyn Field>, horizon: f64) -> Self {
        let field = u.clone();
        let boundary: BoundaryValue = match kind {
            BvpKind::Dirichlet => Arc::new(move |y, _, t| field.value(y, t)),
            BvpKind::Neumann => Arc::new(move |y, n, t| field.gradient(y, t).dot(n)),
        };
        FdProblem { geometry, c, kind, boundary, cauchy: CauchyData::from_solution(u, source), horizon }
    }

    /// The scenario's nodal series, interpolated linearly along the
    /// boundary and in time.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        let given = scenario.given.clone();
        let boundary: BoundaryValue = match &scenario.geometry {
            BoundaryGeometry::Interval(iv) => {
                let mid = 0.5 * (iv.a1 + iv.a2);
                Arc::new(move |y, _, t| given.at(if y.x < mid { 0 } else { 1 }, t))
            }
            BoundaryGeometry::Curve(cv) => {
                let cv = cv.clone();
                Arc::new(move |y, _, t| {
                    let (e, s) = locate(&cv, y);
                    element_hats(&cv, e, s).iter().map(|&(j, w)| w * given.at(j, t)).sum()
                })
            }
            BoundaryGeometry::Surface(_) => Arc::new(|_, _, _| f64::NAN),
        };
        FdProblem {
            geometry: scenario.geometry.clone(),
            c: scenario.grid.c,
            kind: scenario.kind,
            boundary,
            cauchy: scenario.cauchy.clone(),
            horizon: scenario.grid.horizon(),
        }
    }
}

/// Element and parameter of the curve point nearest to `y`.
fn locate(cv: &Curve, y: &Point) -> (usize, f64) {
    let s = match cv.shape() {
        CurveShape::Ellipse { center, a, b } => ((y.y - center.y) / b).atan2((y.x - center.x) / a).rem_euclid(cv.period()),
        CurveShape::Polyline(p) => {
            let mut best = (f64::INFINITY, 0.0);
            for i in 0..p.len() {
                let (a, q) = (p[i], p[(i + 1) % p.len()]);
                let d = q - a;
                let lam = ((y - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
                let dist = (a + d * lam - y).norm();
                if dist < best.0 {
                    best = (dist, cv.node_param(i) + lam * d.norm());
                }
            }
            best.1
        }
    };
    for e in 0..cv.element_count() {
        let (s0, s1) = cv.element_range(e);
        for shift in [0.0, cv.period()] {
            if s + shift >= s0 && s + shift <= s1 {
                return (e, s + shift);
            }
        }
    }
    (0, cv.element_range(0).0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Arm {
    /// Neighbour node at the full spacing.
    Node(usize),
    /// Boundary crossing at distance `len` (Dirichlet value there).
    Wall { len: f64, at: Point },
    /// Mirrored ghost; the datum is `∂u/∂n` with outward normal `normal`.
    Ghost { mirror: usize, normal: Point },
}

#[derive(Debug, Clone, PartialEq)]
enum Role {
    Outside,
    /// Dirichlet node on the boundary.
    Pinned(Point),
    /// Updated by the scheme; arms are (-x, +x, -y, +y).
    Free(Vec<Arm>),
    /// `(g + θ u_opp) / (1 + θ)` along its shortest arm.
    Slaved { at: Point, theta: f64, opposite: Option<usize> },
}

/// Gridded solution, all time levels kept.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub dim: usize,
    pub origin: Point,
    pub spacing: [f64; 2],
    pub shape: [usize; 2],
    pub dt: f64,
    levels: Vec<Vec<f64>>,
    inside: Vec<bool>,
}

/// Axis-aligned rectangle `(lo, hi)` when the curve is one.
fn rectangle(geom: &BoundaryGeometry) -> Option<(Point, Point)> {
    let BoundaryGeometry::Curve(cv) = geom else { return None };
    let CurveShape::Polyline(p) = cv.shape() else { return None };
    if p.len() != 4 {
        return None;
    }
    let aligned = (0..4).all(|i| {
        let d = p[(i + 1) % 4] - p[i];
        d.x.abs() < 1e-12 * d.norm() || d.y.abs() < 1e-12 * d.norm()
    });
    aligned.then(|| geom.bounding_box())
}

struct Layout {
    dim: usize,
    origin: Point,
    spacing: [f64; 2],
    shape: [usize; 2],
    roles: Vec<Role>,
}

impl Layout {
    fn index(&self, i: usize, j: usize) -> usize {
        j * self.shape[0] + i
    }

    fn point(&self, i: usize, j: usize) -> Point {
        Point::new(self.origin.x + i as f64 * self.spacing[0], self.origin.y + j as f64 * self.spacing[1], 0.0)
    }

    fn new(problem: &FdProblem, h: f64, dt: f64) -> Result<Self> {
        let geom = &problem.geometry;
        let dim = geom.dimension();
        let (lo, hi) = geom.bounding_box();
        let aligned = dim == 1 || rectangle(geom).is_some();
        if !aligned && problem.kind == BvpKind::Neumann {
            return Err(WaveError::Misuse("the finite-difference oracle takes Neumann data on intervals and axis-aligned rectangles only".into()));
        }
        let mut shape = [1usize; 2];
        let mut spacing = [h; 2];
        for a in 0..dim {
            let len = hi[a] - lo[a];
            let cells = if aligned { (len / h).round().max(2.0) as usize } else { (len / h).ceil() as usize + 2 };
            shape[a] = cells + 1;
            spacing[a] = if aligned { len / cells as f64 } else { h };
        }
        let origin = if aligned {
            lo
        } else {
            // one spare node beyond each side of the box
            Point::new(lo.x - h, lo.y - h, 0.0)
        };
        let mut layout = Layout { dim, origin, spacing, shape, roles: Vec::new() };
        let hmin = layout.spacing[..dim].iter().cloned().fold(f64::INFINITY, f64::min);
        layout.roles = layout.classify(problem, aligned, problem.c * dt / hmin);
        if !layout.roles.iter().any(|r| matches!(r, Role::Free(_))) {
            return Err(WaveError::Discretization(format!("grid step {h} leaves no interior nodes")));
        }
        Ok(layout)
    }

    fn classify(&self, problem: &FdProblem, aligned: bool, courant: f64) -> Vec<Role> {
        let geom = &problem.geometry;
        let [nx, ny] = self.shape;
        let mut roles = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                roles.push(if aligned { self.aligned_role(problem.kind, i, j) } else { self.curved_role(geom, i, j) });
            }
        }
        if aligned {
            return roles;
        }
        // a node is kept when r² Σ_a 1/(θ₋θ₊) ≤ 1, the Gershgorin bound of
        // the leapfrog step with arm fractions θ±; otherwise it is slaved
        // to its shortest arm
        let mut out = roles.clone();
        for (k, role) in roles.iter().enumerate() {
            let Role::Free(arms) = role else { continue };
            let theta = |q: usize| match arms[q] {
                Arm::Wall { len, .. } => len / self.spacing[q / 2],
                _ => 1.0,
            };
            let load: f64 = (0..self.dim).map(|a| 1.0 / (theta(2 * a) * theta(2 * a + 1))).sum();
            if courant * courant * load <= 1.0 + 1e-12 {
                continue;
            }
            let q = (0..arms.len()).min_by(|&p, &q| theta(p).total_cmp(&theta(q))).unwrap();
            let Arm::Wall { at, .. } = arms[q] else { continue };
            let opposite = match arms[q ^ 1] {
                Arm::Node(m) if matches!(roles[m], Role::Free(_)) => Some(m),
                _ => None,
            };
            out[k] = Role::Slaved { at, theta: theta(q), opposite };
        }
        out
    }

    fn aligned_role(&self, kind: BvpKind, i: usize, j: usize) -> Role {
        let [nx, ny] = self.shape;
        let edge_x = i == 0 || i + 1 == nx;
        let edge_y = self.dim == 2 && (j == 0 || j + 1 == ny);
        if (edge_x || edge_y) && kind == BvpKind::Dirichlet {
            return Role::Pinned(self.point(i, j));
        }
        let mut arms = Vec::with_capacity(2 * self.dim);
        let dirs: &[(isize, isize, Point)] = &[
            (-1, 0, Point::new(-1.0, 0.0, 0.0)),
            (1, 0, Point::new(1.0, 0.0, 0.0)),
            (0, -1, Point::new(0.0, -1.0, 0.0)),
            (0, 1, Point::new(0.0, 1.0, 0.0)),
        ];
        for &(di, dj, n) in &dirs[..2 * self.dim] {
            let (pi, pj) = (i as isize + di, j as isize + dj);
            if pi < 0 || pj < 0 || pi >= nx as isize || pj >= ny as isize {
                let mirror = self.index((i as isize - di) as usize, (j as isize - dj) as usize);
                arms.push(Arm::Ghost { mirror, normal: n });
            } else {
                arms.push(Arm::Node(self.index(pi as usize, pj as usize)));
            }
        }
        Role::Free(arms)
    }

    fn curved_role(&self, geom: &BoundaryGeometry, i: usize, j: usize) -> Role {
        let [nx, ny] = self.shape;
        let p = self.point(i, j);
        let chi = geom.characteristic_function(&p);
        if chi == 0.0 {
            return Role::Outside;
        }
        if chi < 1.0 {
            return Role::Pinned(p);
        }
        let mut arms = Vec::with_capacity(4);
        for (a, dir) in [(0, -1isize), (0, 1), (1, -1), (1, 1)] {
            let (di, dj) = if a == 0 { (dir, 0) } else { (0, dir) };
            let (pi, pj) = (i as isize + di, j as isize + dj);
            let inside = pi >= 0 && pj >= 0 && pi < nx as isize && pj < ny as isize && {
                let q = self.point(pi as usize, pj as usize);
                geom.characteristic_function(&q) > 0.0
            };
            let e = Point::new(di as f64, dj as f64, 0.0);
            let s = self.spacing[a];
            let wall = geom.ray_crossings(&p, &e).first().map(|c| c.0).filter(|rho| *rho < s);
            match (inside, wall) {
                (true, None) => arms.push(Arm::Node(self.index(pi as usize, pj as usize))),
                (_, Some(len)) => arms.push(Arm::Wall { len, at: p + e * len }),
                (false, None) => arms.push(Arm::Wall { len: s, at: p + e * s }),
            }
        }
        Role::Free(arms)
    }
}

struct Stepper<'a> {
    problem: &'a FdProblem,
    layout: &'a Layout,
}

impl Stepper<'_> {
    /// `Δ_h u` at a free node at time `t`.
    fn laplacian(&self, arms: &[Arm], k: usize, u: &[f64], t: f64) -> f64 {
        let g = &self.problem.boundary;
        let mut acc = 0.0;
        for a in 0..self.layout.dim {
            let s = self.layout.spacing[a];
            let side = |arm: &Arm| -> (f64, f64) {
                match arm {
                    Arm::Node(m) => (s, u[*m]),
                    Arm::Wall { len, at } => (*len, g(at, &Point::zeros(), t)),
                    Arm::Ghost { mirror, normal } => {
                        let here = self.layout.point(k % self.layout.shape[0], k / self.layout.shape[0]);
                        (s, u[*mirror] + 2.0 * s * g(&here, normal, t))
                    }
                }
            };
            let (lm, um) = side(&arms[2 * a]);
            let (lp, up) = side(&arms[2 * a + 1]);
            acc += 2.0 / (lm + lp) * ((up - u[k]) / lp - (u[k] - um) / lm);
        }
        acc
    }

    /// Dirichlet and slaved nodes at time `t`, after the free nodes.
    fn close(&self, u: &mut [f64], t: f64) {
        let g = &self.problem.boundary;
        for (k, role) in self.layout.roles.iter().enumerate() {
            match role {
                Role::Pinned(p) => u[k] = g(p, &Point::zeros(), t),
                Role::Slaved { at, theta, opposite } => {
                    let gv = g(at, &Point::zeros(), t);
                    u[k] = match opposite {
                        Some(m) => (gv + theta * u[*m]) / (1.0 + theta),
                        None => gv,
                    };
                }
                _ => {}
            }
        }
    }
}

/// Runs the scheme with space step `h` and time step `dt` up to the
/// problem horizon. Refused when `cΔt/h > 1/√N`.
pub fn fd_solve(problem: &FdProblem, h: f64, dt: f64) -> Result<FdSolution> {
    let geom = &problem.geometry;
    let dim = geom.dimension();
    if dim == 3 {
        return Err(WaveError::Misuse("the finite-difference oracle covers N = 1, 2".into()));
    }
    if !(h > 0.0 && dt > 0.0 && h.is_finite() && dt.is_finite()) {
        return Err(WaveError::Config(format!("grid steps must be positive, got h = {h}, dt = {dt}")));
    }
    let layout = Layout::new(problem, h, dt)?;
    let hmin = layout.spacing[..dim].iter().cloned().fold(f64::INFINITY, f64::min);
    let courant = problem.c * dt / hmin;
    if courant > 1.0 / (dim as f64).sqrt() + 1e-12 {
        return Err(WaveError::Stability(format!("cΔt/h = {courant:.4} exceeds 1/√{dim}")));
    }
    let steps = (problem.horizon / dt).ceil() as usize;
    let n = layout.roles.len();
    let stepper = Stepper { problem, layout: &layout };
    let (c2, dt2) = (problem.c * problem.c, dt * dt);
    let src = &problem.cauchy.source;
    let pt = |k: usize| layout.point(k % layout.shape[0], k / layout.shape[0]);

    let mut u0 = vec![f64::NAN; n];
    for k in 0..n {
        if layout.roles[k] != Role::Outside {
            u0[k] = problem.cauchy.displacement.value(&pt(k), 0.0);
        }
    }
    stepper.close(&mut u0, 0.0);
    let mut u1 = u0.clone();
    for (k, role) in layout.roles.iter().enumerate() {
        if let Role::Free(arms) = role {
            let x = pt(k);
            let acc = c2 * (stepper.laplacian(arms, k, &u0, 0.0) - src.value(&x, 0.0));
            u1[k] = u0[k] + dt * problem.cauchy.velocity.value(&x, 0.0) + 0.5 * dt2 * acc;
        }
    }
    stepper.close(&mut u1, dt);
    let mut levels = vec![u0, u1];
    for s in 1..steps {
        let t = s as f64 * dt;
        let (prev, cur) = (&levels[s - 1], &levels[s]);
        let mut next = cur.clone();
        for (k, role) in layout.roles.iter().enumerate() {
            if let Role::Free(arms) = role {
                let acc = c2 * (stepper.laplacian(arms, k, cur, t) - src.value(&pt(k), t));
                next[k] = 2.0 * cur[k] - prev[k] + dt2 * acc;
            }
        }
        stepper.close(&mut next, t + dt);
        if let Some(k) = next.iter().zip(&layout.roles).position(|(v, r)| *r != Role::Outside && !v.is_finite()) {
            return Err(WaveError::Stability(format!("non-finite value at grid node {k}, step {}", s + 1)));
        }
        levels.push(next);
    }
    let inside = layout.roles.iter().map(|r| *r != Role::Outside).collect();
    Ok(FdSolution { dim, origin: layout.origin, spacing: layout.spacing, shape: layout.shape, dt, levels, inside })
}

/// The scenario's data on an `h`, `dt` grid.
pub fn fd_reference(scenario: &Scenario, h: f64, dt: f64) -> Result<FdSolution> {
    fd_solve(&FdProblem::from_scenario(scenario), h, dt)
}

impl FdSolution {
    pub fn steps(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    /// Coordinates of grid node `k`.
    pub fn node(&self, k: usize) -> Point {
        let (i, j) = (k % self.shape[0], k / self.shape[0]);
        Point::new(self.origin.x + i as f64 * self.spacing[0], self.origin.y + j as f64 * self.spacing[1], 0.0)
    }

    pub fn is_inside(&self, k: usize) -> bool {
        self.inside[k]
    }

    fn at(&self, level: &dyn Fn(usize) -> f64, x: &Point) -> f64 {
        let fx = (x.x - self.origin.x) / self.spacing[0];
        let fy = if self.dim == 2 { (x.y - self.origin.y) / self.spacing[1] } else { 0.0 };
        let (nx, ny) = (self.shape[0], self.shape[1]);
        if fx < 0.0 || fy < 0.0 || fx > (nx - 1) as f64 || fy > (ny - 1) as f64 {
            return f64::NAN;
        }
        let i = (fx.floor() as usize).min(nx.saturating_sub(2));
        let j = if ny > 1 { (fy.floor() as usize).min(ny - 2) } else { 0 };
        let (ax, ay) = (fx - i as f64, fy - j as f64);
        let corners: &[(usize, usize, f64)] = if self.dim == 1 {
            &[(i, 0, 1.0 - ax), (i + 1, 0, ax)]
        } else {
            &[(i, j, (1.0 - ax) * (1.0 - ay)), (i + 1, j, ax * (1.0 - ay)), (i, j + 1, (1.0 - ax) * ay), (i + 1, j + 1, ax * ay)]
        };
        // within a cell of a curved boundary, outside corners are dropped
        let (mut acc, mut wsum) = (0.0, 0.0);
        for &(ci, cj, w) in corners {
            let k = cj * nx + ci;
            if self.inside[k] && w > 0.0 {
                acc += w * level(k);
                wsum += w;
            }
        }
        if wsum > 0.0 { acc / wsum } else { f64::NAN }
    }

    /// Time-level index and weight for `t`.
    fn bracket(&self, t: f64) -> (usize, f64) {
        let s = (t / self.dt).clamp(0.0, self.steps() as f64);
        let k = (s.floor() as usize).min(self.steps().saturating_sub(1));
        (k, s - k as f64)
    }

    fn rate_at(&self, k: usize, node: usize) -> f64 {
        let last = self.steps();
        let l = &self.levels;
        match k {
            0 => (l[1][node] - l[0][node]) / self.dt,
            _ if k == last => (l[k][node] - l[k - 1][node]) / self.dt,
            _ => (l[k + 1][node] - l[k - 1][node]) / (2.0 * self.dt),
        }
    }

    fn grad_at(&self, k: usize, node: usize, a: usize) -> f64 {
        let (nx, ny) = (self.shape[0], self.shape[1]);
        let (i, j) = (node % nx, node / nx);
        let step = if a == 0 { 1 } else { nx };
        let (lo_ok, hi_ok) = if a == 0 { (i > 0, i + 1 < nx) } else { (j > 0, j + 1 < ny) };
        let lo = (lo_ok && self.inside[node - step]).then(|| self.levels[k][node - step]);
        let hi = (hi_ok && self.inside[node + step]).then(|| self.levels[k][node + step]);
        let h = self.spacing[a];
        let u = self.levels[k][node];
        match (lo, hi) {
            (Some(m), Some(p)) => (p - m) / (2.0 * h),
            (None, Some(p)) => (p - u) / h,
            (Some(m), None) => (u - m) / h,
            (None, None) => 0.0,
        }
    }
}

impl Field for FdSolution {
    fn value(&self, x: &Point, t: f64) -> f64 {
        let (k, th) = self.bracket(t);
        let a = self.at(&|n| self.levels[k][n], x);
        let b = self.at(&|n| self.levels[k + 1][n], x);
        (1.0 - th) * a + th * b
    }

    fn time_derivative(&self, x: &Point, t: f64) -> f64 {
        let (k, th) = self.bracket(t);
        let a = self.at(&|n| self.rate_at(k, n), x);
        let b = self.at(&|n| self.rate_at(k + 1, n), x);
        (1.0 - th) * a + th * b
    }

    fn gradient(&self, x: &Point, t: f64) -> Point {
        let (k, th) = self.bracket(t);
        let mut g = Point::zeros();
        for a in 0..self.dim {
            let lo = self.at(&|n| self.grad_at(k, n, a), x);
            let hi = self.at(&|n| self.grad_at(k + 1, n, a), x);
            g[a] = (1.0 - th) * lo + th * hi;
        }
        g
    }
}

#[cfg(test)]
mod tests;
