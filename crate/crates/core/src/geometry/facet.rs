//! Polar decomposition of a flat triangle about the foot of a field point.
//!
//! Integrals over `triangle ∩ {r < R}` are written as `∫ dψ ∫ f r dr` around
//! the orthogonal projection of the field point onto the facet plane. Sector
//! boundaries are placed at vertex directions and wherever an edge crosses
//! one of the requested spheres, so every radial range is smooth in `ψ`.

use std::f64::consts::PI;

use crate::geometry::Point;

#[derive(Debug, Clone, Copy)]
struct EdgeLine {
    p: [f64; 2],
    d: [f64; 2],
}

impl EdgeLine {
    /// Distance along direction `psi` from the origin to the edge line.
    fn rho(&self, psi: f64) -> f64 {
        let w = [psi.cos(), psi.sin()];
        let den = w[0] * self.d[1] - w[1] * self.d[0];
        if den.abs() < 1e-300 {
            return 0.0;
        }
        (self.p[0] * self.d[1] - self.p[1] * self.d[0]) / den
    }

    /// Distance from origin to the line and the angle of the foot point.
    fn foot(&self) -> (f64, f64) {
        let len = (self.d[0] * self.d[0] + self.d[1] * self.d[1]).sqrt();
        let nx = self.d[1] / len;
        let ny = -self.d[0] / len;
        let dist = self.p[0] * nx + self.p[1] * ny;
        if dist < 0.0 {
            (-dist, (-ny).atan2(-nx))
        } else {
            (dist, ny.atan2(nx))
        }
    }
}

/// One angular sector with smooth inner/outer radial bounds.
#[derive(Debug, Clone, Copy)]
pub struct Sector {
    pub psi0: f64,
    pub psi1: f64,
    inner: Option<EdgeLine>,
    outer: EdgeLine,
}

impl Sector {
    /// In-plane radial bounds along direction `psi`.
    pub fn rho_range(&self, psi: f64) -> (f64, f64) {
        let a = self.inner.map_or(0.0, |e| e.rho(psi).max(0.0));
        let b = self.outer.rho(psi).max(a);
        (a, b)
    }
}

/// Local in-plane frame of a facet for a given field point.
#[derive(Debug, Clone)]
pub struct FacetFrame {
    pub foot: Point,
    pub e1: Point,
    pub e2: Point,
    /// Signed height `(x - foot) · n`.
    pub height: f64,
    verts: [[f64; 2]; 3],
}

impl FacetFrame {
    pub fn new(corners: &[Point; 3], normal: &Point, x: &Point) -> Self {
        let mut height = (x - corners[0]).dot(normal);
        let scale = (corners[1] - corners[0]).norm() + (corners[2] - corners[0]).norm();
        // points of the facet's own plane get an exact zero
        if height.abs() <= 1e-13 * scale {
            height = 0.0;
        }
        let foot = x - normal * height;
        let e1 = (corners[1] - corners[0]).normalize();
        let e2 = normal.cross(&e1);
        let verts = [0, 1, 2].map(|k| {
            let v = corners[k] - foot;
            [v.dot(&e1), v.dot(&e2)]
        });
        FacetFrame { foot, e1, e2, height, verts }
    }

    /// `(y - x) · n` for every `y` in the facet plane.
    pub fn normal_offset(&self) -> f64 {
        -self.height
    }

    pub fn point(&self, rho: f64, psi: f64) -> Point {
        self.foot + self.e1 * (rho * psi.cos()) + self.e2 * (rho * psi.sin())
    }

    fn edges(&self) -> [EdgeLine; 3] {
        [0, 1, 2].map(|k| {
            let p = self.verts[k];
            let q = self.verts[(k + 1) % 3];
            EdgeLine { p, d: [q[0] - p[0], q[1] - p[1]] }
        })
    }

    fn contains_foot(&self) -> bool {
        let v = &self.verts;
        let area = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
        let total = area([v[1][0] - v[0][0], v[1][1] - v[0][1]], [v[2][0] - v[0][0], v[2][1] - v[0][1]]);
        let tol = -1e-12 * total.abs();
        (0..3).all(|k| area(v[k], v[(k + 1) % 3]) * total.signum() >= tol)
    }

    /// Sectors for the region `triangle ∩ {ρ < rho_max}`, split at every
    /// in-plane radius in `radii`.
    pub fn sectors(&self, radii: &[f64]) -> Vec<Sector> {
        let edges = self.edges();
        let mut angles = Vec::new();
        let scale = self
            .verts
            .iter()
            .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
            .fold(0.0, f64::max);
        for v in &self.verts {
            if (v[0] * v[0] + v[1] * v[1]).sqrt() > 1e-13 * scale.max(1e-300) {
                angles.push(v[1].atan2(v[0]));
            }
        }
        for e in &edges {
            let (dist, psi_n) = e.foot();
            for &r in radii {
                if r > dist {
                    let a = (dist / r).acos();
                    angles.push(psi_n + a);
                    angles.push(psi_n - a);
                }
            }
        }
        let mut angles: Vec<f64> = angles.into_iter().map(|a| a.rem_euclid(2.0 * PI)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        if angles.is_empty() {
            angles.push(0.0);
        }
        let inside = self.contains_foot();
        let mut out = Vec::new();
        let n = angles.len();
        for k in 0..n {
            let a = angles[k];
            let b = if k + 1 < n { angles[k + 1] } else { angles[0] + 2.0 * PI };
            if b - a < 1e-15 {
                continue;
            }
            let mid = 0.5 * (a + b);
            let w = [mid.cos(), mid.sin()];
            let mut hits: Vec<(f64, EdgeLine)> = Vec::new();
            for e in &edges {
                let den = w[0] * e.d[1] - w[1] * e.d[0];
                if den.abs() < 1e-300 {
                    continue;
                }
                let rho = (e.p[0] * e.d[1] - e.p[1] * e.d[0]) / den;
                let lam = (e.p[0] * w[1] - e.p[1] * w[0]) / den;
                if (-1e-12..=1.0 + 1e-12).contains(&lam) && rho >= -1e-12 * scale {
                    hits.push((rho, *e));
                }
            }
            hits.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
            let sector = if inside {
                hits.last().map(|h| Sector { psi0: a, psi1: b, inner: None, outer: h.1 })
            } else if hits.len() >= 2 {
                Some(Sector { psi0: a, psi1: b, inner: Some(hits[0].1), outer: hits[hits.len() - 1].1 })
            } else {
                None
            };
            if let Some(s) = sector {
                if s.rho_range(mid).1 > 1e-14 * scale {
                    out.push(s);
                }
            }
        }
        out
    }
}
