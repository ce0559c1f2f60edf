//! Domain, boundary, time grid and retarded truncations.

mod curve;
mod facet;
mod surface;

pub use curve::{Curve, CurveShape};
pub use facet::{FacetFrame, Sector};
pub use surface::{closest_point_on_triangle, Surface};

use nalgebra::Vector3;

use crate::error::{Result, WaveError};

/// Points of `R^N` embedded in `R^3` (unused trailing components are zero).
pub type Point = Vector3<f64>;

/// Relative width of the band in which a point counts as lying on `S`.
pub const ON_BOUNDARY_BAND: f64 = 1e-9;

/// The interval `(a1, a2)` of the one-dimensional problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a1: f64,
    pub a2: f64,
}

impl Interval {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 < a2) || !a1.is_finite() || !a2.is_finite() {
            return Err(WaveError::InvalidGeometry(format!("interval endpoints must satisfy a1 < a2, got {a1}, {a2}")));
        }
        Ok(Interval { a1, a2 })
    }

    pub fn length(&self) -> f64 {
        self.a2 - self.a1
    }

    /// Outward normals at `a1` and `a2`.
    pub fn normals(&self) -> [f64; 2] {
        [-1.0, 1.0]
    }

    pub fn endpoint(&self, k: usize) -> f64 {
        if k == 0 {
            self.a1
        } else {
            self.a2
        }
    }
}

/// Boundary `S` of the bounded domain `S⁻`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryGeometry {
    Interval(Interval),
    Curve(Curve),
    Surface(Surface),
}

impl BoundaryGeometry {
    pub fn dimension(&self) -> usize {
        match self {
            BoundaryGeometry::Interval(_) => 1,
            BoundaryGeometry::Curve(_) => 2,
            BoundaryGeometry::Surface(_) => 3,
        }
    }

    /// Number of boundary collocation nodes.
    pub fn node_count(&self) -> usize {
        match self {
            BoundaryGeometry::Interval(_) => 2,
            BoundaryGeometry::Curve(c) => c.node_count(),
            BoundaryGeometry::Surface(s) => s.vertices().len(),
        }
    }

    pub fn node_point(&self, i: usize) -> Point {
        match self {
            BoundaryGeometry::Interval(iv) => Point::new(iv.endpoint(i), 0.0, 0.0),
            BoundaryGeometry::Curve(c) => c.node_point(i),
            BoundaryGeometry::Surface(s) => s.vertices()[i],
        }
    }

    /// Outward unit normal at node `i` (area-weighted average for meshes).
    pub fn node_normal(&self, i: usize) -> Point {
        match self {
            BoundaryGeometry::Interval(iv) => Point::new(iv.normals()[i.min(1)], 0.0, 0.0),
            BoundaryGeometry::Curve(c) => match c.shape() {
                CurveShape::Polyline(_) => {
                    let n = c.node_count();
                    let prev = (i + n - 1) % n;
                    let s = c.node_param(i);
                    (c.element_normal(prev, s) + c.element_normal(i, s)).normalize()
                }
                _ => c.normal(c.node_param(i)),
            },
            BoundaryGeometry::Surface(s) => {
                let mut acc = Point::zeros();
                for (t, tri) in s.triangles().iter().enumerate() {
                    if tri.contains(&i) {
                        acc += s.normal(t) * s.area(t);
                    }
                }
                acc.normalize()
            }
        }
    }

    /// Total measure of `S` (point count, length, or area).
    pub fn measure(&self) -> f64 {
        match self {
            BoundaryGeometry::Interval(_) => 2.0,
            BoundaryGeometry::Curve(c) => c.length(),
            BoundaryGeometry::Surface(s) => s.total_area(),
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::repeat(f64::INFINITY);
        let mut hi = Point::repeat(f64::NEG_INFINITY);
        let mut add = |p: Point| {
            lo = lo.inf(&p);
            hi = hi.sup(&p);
        };
        match self {
            BoundaryGeometry::Interval(iv) => {
                add(Point::new(iv.a1, 0.0, 0.0));
                add(Point::new(iv.a2, 0.0, 0.0));
            }
            BoundaryGeometry::Curve(c) => match c.shape() {
                CurveShape::Polyline(p) => p.iter().for_each(|q| add(*q)),
                CurveShape::Ellipse { center, a, b } => {
                    add(center + Point::new(*a, *b, 0.0));
                    add(center - Point::new(*a, *b, 0.0));
                }
            },
            BoundaryGeometry::Surface(s) => s.vertices().iter().for_each(|q| add(*q)),
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        match self {
            BoundaryGeometry::Interval(iv) => iv.length(),
            BoundaryGeometry::Curve(c) => match c.shape() {
                CurveShape::Ellipse { a, b, .. } => 2.0 * a.max(*b),
                CurveShape::Polyline(p) => max_pairwise(p),
            },
            BoundaryGeometry::Surface(s) => max_pairwise(s.vertices()),
        }
    }

    fn band(&self) -> f64 {
        ON_BOUNDARY_BAND * self.diameter()
    }

    /// Distance from `x` to `S`.
    pub fn distance_to_boundary(&self, x: &Point) -> f64 {
        match self {
            BoundaryGeometry::Interval(iv) => (x.x - iv.a1).abs().min((x.x - iv.a2).abs()),
            BoundaryGeometry::Curve(c) => c.distance(x),
            BoundaryGeometry::Surface(s) => s.distance(x),
        }
    }

    /// Whether `x` lies on `S` within the on-boundary band.
    pub fn is_on_boundary(&self, x: &Point) -> bool {
        self.distance_to_boundary(x) <= self.band()
    }

    /// Characteristic function of `S⁻`: 1 inside, 1/2 on `S`, 0 outside.
    pub fn characteristic_function(&self, x: &Point) -> f64 {
        if self.is_on_boundary(x) {
            return 0.5;
        }
        match self {
            BoundaryGeometry::Interval(iv) => {
                if x.x > iv.a1 && x.x < iv.a2 {
                    1.0
                } else {
                    0.0
                }
            }
            BoundaryGeometry::Curve(c) => c.winding_number(x).abs().min(1.0),
            BoundaryGeometry::Surface(s) => (s.solid_angle(x) / (4.0 * std::f64::consts::PI)).round().abs().min(1.0),
        }
    }

    /// Sorted crossings of the ray `x + rho dir` with `S`, tagged `+1` on
    /// exit and `-1` on entry.
    pub fn ray_crossings(&self, x: &Point, dir: &Point) -> Vec<(f64, f64)> {
        let tol = self.band();
        match self {
            BoundaryGeometry::Interval(iv) => {
                let mut out = Vec::new();
                for (k, a) in [iv.a1, iv.a2].into_iter().enumerate() {
                    let rho = (a - x.x) / dir.x;
                    if dir.x != 0.0 && rho > tol {
                        let n = iv.normals()[k];
                        out.push((rho, (n * dir.x).signum()));
                    }
                }
                out.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
                out
            }
            BoundaryGeometry::Curve(c) => c.ray_crossings(x, dir, tol),
            BoundaryGeometry::Surface(s) => s.ray_crossings(x, dir, tol),
        }
    }

    /// Parts of the ray `x + rho dir`, `0 < rho < rho_max`, lying in `S⁻`.
    pub fn ray_inside_intervals(&self, x: &Point, dir: &Point, rho_max: f64) -> Vec<(f64, f64)> {
        let crossings = self.ray_crossings(x, dir);
        let mut inside = match crossings.first() {
            Some(&(_, tag)) => tag > 0.0,
            None => false,
        };
        let mut out = Vec::new();
        let mut start = 0.0;
        for &(rho, _) in &crossings {
            if rho >= rho_max {
                break;
            }
            if inside {
                out.push((start, rho));
            }
            inside = !inside;
            start = rho;
        }
        if inside && start < rho_max {
            out.push((start, rho_max));
        }
        out
    }

    /// `t*(x) = max_{y ∈ S} |x - y| / c`.
    pub fn max_retarded_time(&self, x: &Point, c: f64) -> f64 {
        let d = match self {
            BoundaryGeometry::Interval(iv) => (x.x - iv.a1).abs().max((x.x - iv.a2).abs()),
            BoundaryGeometry::Curve(cv) => match cv.shape() {
                CurveShape::Polyline(p) => p.iter().map(|q| (q - x).norm()).fold(0.0, f64::max),
                _ => cv.extremal_distance(x, true).1,
            },
            BoundaryGeometry::Surface(s) => s.vertices().iter().map(|q| (q - x).norm()).fold(0.0, f64::max),
        };
        d / c
    }

    /// Clips `S` to `S_t(x) = {y ∈ S : |x - y| < ct}`.
    pub fn truncate_boundary(&self, x: &Point, ct: f64) -> RetardedBoundary {
        let mut pieces = Vec::new();
        match self {
            BoundaryGeometry::Interval(iv) => {
                for k in 0..2 {
                    if (x.x - iv.endpoint(k)).abs() < ct {
                        pieces.push(ClippedPiece::Endpoint { index: k });
                    }
                }
            }
            BoundaryGeometry::Curve(c) => {
                for e in 0..c.element_count() {
                    for (s0, s1) in clip_element(c, e, x, ct) {
                        pieces.push(ClippedPiece::Arc { element: e, s0, s1 });
                    }
                }
            }
            BoundaryGeometry::Surface(s) => {
                for t in 0..s.triangles().len() {
                    let frame = FacetFrame::new(&s.corners(t), &s.normal(t), x);
                    let h2 = frame.height * frame.height;
                    if ct * ct <= h2 {
                        continue;
                    }
                    let rho_c = (ct * ct - h2).sqrt();
                    if s.triangle_distance(t, x) < ct {
                        pieces.push(ClippedPiece::Facet { triangle: t, disk_radius: rho_c });
                    }
                }
            }
        }
        RetardedBoundary { x: *x, ct, pieces }
    }

    /// Cells of `grid` covering `S_t⁻(x) = {y ∈ S⁻ : |x - y| < ct}`.
    pub fn truncate_domain(&self, grid: &VolumeGrid, x: &Point, ct: f64) -> Result<Vec<Cell>> {
        grid.check_covers(self)?;
        if ct <= 0.0 {
            return Ok(Vec::new());
        }
        let inside = |p: &Point| (p - x).norm() < ct && self.characteristic_function(p) > 0.75;
        Ok(grid.cells_where(self.dimension(), &inside))
    }
}

fn max_pairwise(p: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            d = d.max((p[i] - p[j]).norm());
        }
    }
    d
}

/// Parameter sub-intervals of element `e` where `|y(s) - x| < ct`.
pub fn clip_element(c: &Curve, e: usize, x: &Point, ct: f64) -> Vec<(f64, f64)> {
    if ct <= 0.0 {
        return Vec::new();
    }
    let (s0, s1) = c.element_range(e);
    let mut cuts = vec![s0];
    cuts.extend(c.radius_crossings(e, x, ct));
    cuts.push(s1);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 0.0 {
            continue;
        }
        let mid = c.element_position(e, 0.5 * (a + b));
        if (mid - x).norm() < ct {
            match out.last_mut() {
                Some((_, hi)) if *hi == a => *hi = b,
                _ => out.push((a, b)),
            }
        }
    }
    out
}

/// Wave speed and uniform time steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub c: f64,
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(c: f64, dt: f64, steps: usize) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(WaveError::InvalidGrid(format!("wave speed c must be positive, got {c}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(WaveError::InvalidGrid(format!("time step dt must be positive, got {dt}")));
        }
        if steps < 1 {
            return Err(WaveError::InvalidGrid("number of steps must be at least 1".into()));
        }
        Ok(TimeGrid { c, dt, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.dt * k as f64
    }
}

/// One clipped piece of `S_t(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClippedPiece {
    Endpoint { index: usize },
    Arc { element: usize, s0: f64, s1: f64 },
    /// Triangle intersected with the in-plane disk of the given radius
    /// about the foot of `x`.
    Facet { triangle: usize, disk_radius: f64 },
}

/// `S_t(x)` as a list of clipped boundary pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct RetardedBoundary {
    pub x: Point,
    pub ct: f64,
    pub pieces: Vec<ClippedPiece>,
}

impl RetardedBoundary {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Measure of the clipped boundary.
    pub fn measure(&self, geom: &BoundaryGeometry) -> f64 {
        let q = crate::quadrature::GaussLegendre::new(16);
        self.pieces
            .iter()
            .map(|p| match (p, geom) {
                (ClippedPiece::Endpoint { .. }, _) => 1.0,
                (ClippedPiece::Arc { s0, s1, .. }, BoundaryGeometry::Curve(c)) => {
                    q.integrate(*s0, *s1, |s| c.jacobian(s))
                }
                (ClippedPiece::Facet { triangle, disk_radius }, BoundaryGeometry::Surface(s)) => {
                    let frame = FacetFrame::new(&s.corners(*triangle), &s.normal(*triangle), &self.x);
                    frame
                        .sectors(&[*disk_radius])
                        .iter()
                        .map(|sec| {
                            q.integrate(sec.psi0, sec.psi1, |psi| {
                                let (a, b) = sec.rho_range(psi);
                                let (a, b) = (a.min(*disk_radius), b.min(*disk_radius));
                                0.5 * (b * b - a * a)
                            })
                        })
                        .sum()
                }
                _ => 0.0,
            })
            .sum()
    }
}

/// Background Cartesian cell grid used for volume integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeGrid {
    pub origin: Point,
    pub spacing: f64,
    pub counts: [usize; 3],
    /// Subdivision depth for cells cut by the region boundary.
    pub cut_depth: usize,
}

/// A (sub)cell of the volume grid: centre and measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub center: Point,
    pub size: f64,
    pub measure: f64,
}

impl VolumeGrid {
    /// Grid of `n` cells per unit length covering the bounding box of `geom`.
    pub fn covering(geom: &BoundaryGeometry, cells_per_unit: f64) -> Self {
        let (lo, hi) = geom.bounding_box();
        let dim = geom.dimension();
        let spacing = 1.0 / cells_per_unit;
        let mut counts = [1usize; 3];
        for k in 0..dim {
            counts[k] = ((hi[k] - lo[k]) / spacing).ceil() as usize + 2;
        }
        let mut origin = lo - Point::repeat(spacing);
        for k in dim..3 {
            origin[k] = 0.0;
        }
        VolumeGrid { origin, spacing, counts, cut_depth: 4 }
    }

    fn check_covers(&self, geom: &BoundaryGeometry) -> Result<()> {
        let (lo, hi) = geom.bounding_box();
        for k in 0..geom.dimension() {
            let top = self.origin[k] + self.spacing * self.counts[k] as f64;
            if lo[k] < self.origin[k] - 1e-12 || hi[k] > top + 1e-12 {
                return Err(WaveError::Coverage(format!("volume grid does not cover the domain along axis {k}")));
            }
        }
        Ok(())
    }

    /// Cells (and sub-cells of cut cells) whose centres satisfy `pred`.
    pub fn cells_where(&self, dim: usize, pred: &dyn Fn(&Point) -> bool) -> Vec<Cell> {
        let mut out = Vec::new();
        let h = self.spacing;
        for i in 0..self.counts[0] {
            for j in 0..self.counts[1] {
                for k in 0..self.counts[2] {
                    let lo = self.origin + Point::new(i as f64 * h, j as f64 * h, k as f64 * h);
                    self.classify(dim, lo, h, self.cut_depth, pred, &mut out);
                }
            }
        }
        out
    }

    fn classify(&self, dim: usize, lo: Point, h: f64, depth: usize, pred: &dyn Fn(&Point) -> bool, out: &mut Vec<Cell>) {
        let corners = 1usize << dim;
        let mut count = 0;
        for m in 0..corners {
            let mut p = lo;
            for d in 0..dim {
                if m >> d & 1 == 1 {
                    p[d] += h;
                }
            }
            if pred(&p) {
                count += 1;
            }
        }
        let mut center = lo;
        for d in 0..dim {
            center[d] += 0.5 * h;
        }
        let measure = h.powi(dim as i32);
        if count == corners {
            out.push(Cell { center, size: h, measure });
        } else if count == 0 && !pred(&center) {
            // fully outside by corner sampling
        } else if depth == 0 {
            if pred(&center) {
                out.push(Cell { center, size: h, measure });
            }
        } else {
            let hh = 0.5 * h;
            for m in 0..corners {
                let mut p = lo;
                for d in 0..dim {
                    if m >> d & 1 == 1 {
                        p[d] += hh;
                    }
                }
                self.classify(dim, p, hh, depth - 1, pred, out);
            }
        }
    }
}

#[cfg(test)]
mod tests;
