//! Closed triangulated surfaces (N = 3 boundaries).

use std::collections::HashMap;

use crate::error::{Result, WaveError};
use crate::geometry::Point;

/// Closed, consistently oriented triangle mesh with outward normals.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Point>,
    areas: Vec<f64>,
}

impl Surface {
    /// Builds a surface, checking closure and orientation. Inward-oriented
    /// meshes are flipped.
    pub fn new(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.len() < 4 {
            return Err(WaveError::InvalidGeometry("a closed surface needs at least 4 triangles".into()));
        }
        for (k, t) in triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= vertices.len()) {
                return Err(WaveError::InvalidGeometry(format!("triangle {k} references a missing vertex")));
            }
        }
        let mut edges: HashMap<(usize, usize), i32> = HashMap::new();
        for t in &triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a, b)).or_insert(0) += 1;
            }
        }
        for (&(a, b), &n) in &edges {
            if n != 1 || edges.get(&(b, a)).copied() != Some(1) {
                return Err(WaveError::InvalidGeometry(format!(
                    "edge ({a}, {b}) is not shared by exactly two consistently oriented triangles"
                )));
            }
        }
        let volume: f64 = triangles
            .iter()
            .map(|t| vertices[t[0]].dot(&vertices[t[1]].cross(&vertices[t[2]])) / 6.0)
            .sum();
        if volume.abs() < 1e-14 {
            return Err(WaveError::InvalidGeometry("surface encloses zero volume".into()));
        }
        if volume < 0.0 {
            for t in triangles.iter_mut() {
                t.swap(1, 2);
            }
        }
        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        for (k, t) in triangles.iter().enumerate() {
            let c = (vertices[t[1]] - vertices[t[0]]).cross(&(vertices[t[2]] - vertices[t[0]]));
            let a2 = c.norm();
            if a2 < 1e-15 {
                return Err(WaveError::InvalidGeometry(format!("triangle {k} has zero area")));
            }
            normals.push(c / a2);
            areas.push(0.5 * a2);
        }
        Ok(Surface { vertices, triangles, normals, areas })
    }

    /// Geodesic sphere from a subdivided icosahedron: `20 * 4^level`
    /// triangles with vertices projected onto the sphere.
    pub fn icosphere(center: Point, radius: f64, level: usize) -> Result<Self> {
        if radius <= 0.0 {
            return Err(WaveError::InvalidGeometry(format!("sphere radius must be positive, got {radius}")));
        }
        let p = (1.0 + 5f64.sqrt()) / 2.0;
        let mut verts: Vec<Point> = [
            [-1.0, p, 0.0], [1.0, p, 0.0], [-1.0, -p, 0.0], [1.0, -p, 0.0],
            [0.0, -1.0, p], [0.0, 1.0, p], [0.0, -1.0, -p], [0.0, 1.0, -p],
            [p, 0.0, -1.0], [p, 0.0, 1.0], [-p, 0.0, -1.0], [-p, 0.0, 1.0],
        ]
        .iter()
        .map(|v| Point::new(v[0], v[1], v[2]).normalize())
        .collect();
        let mut tris: Vec<[usize; 3]> = vec![
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ];
        for _ in 0..level {
            let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
            let mut mid = |a: usize, b: usize, verts: &mut Vec<Point>| -> usize {
                let key = if a < b { (a, b) } else { (b, a) };
                *cache.entry(key).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                    verts.len() - 1
                })
            };
            let mut next = Vec::with_capacity(tris.len() * 4);
            for t in &tris {
                let ab = mid(t[0], t[1], &mut verts);
                let bc = mid(t[1], t[2], &mut verts);
                let ca = mid(t[2], t[0], &mut verts);
                next.push([t[0], ab, ca]);
                next.push([t[1], bc, ab]);
                next.push([t[2], ca, bc]);
                next.push([ab, bc, ca]);
            }
            tris = next;
        }
        let verts = verts.into_iter().map(|v| center + v * radius).collect();
        Surface::new(verts, tris)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn normal(&self, t: usize) -> Point {
        self.normals[t]
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Longest edge of triangle `t`.
    pub fn triangle_size(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        (a - b).norm().max((b - c).norm()).max((c - a).norm())
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Signed solid angle subtended by triangle `t` at `x`
    /// (positive when `x` lies on the inner side).
    pub fn triangle_solid_angle(&self, t: usize, x: &Point) -> f64 {
        let [a, b, c] = self.corners(t);
        let (ra, rb, rc) = (a - x, b - x, c - x);
        let (la, lb, lc) = (ra.norm(), rb.norm(), rc.norm());
        let num = ra.dot(&rb.cross(&rc));
        let den = la * lb * lc + ra.dot(&rb) * lc + rb.dot(&rc) * la + rc.dot(&ra) * lb;
        2.0 * num.atan2(den)
    }

    /// Total signed solid angle: 4π inside, 0 outside, the interior solid
    /// angle of the surface at `x` when `x` lies on it.
    pub fn solid_angle(&self, x: &Point) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_solid_angle(t, x)).sum()
    }

    pub fn triangle_distance(&self, t: usize, x: &Point) -> f64 {
        let [a, b, c] = self.corners(t);
        (closest_point_on_triangle(x, &a, &b, &c) - x).norm()
    }

    pub fn distance(&self, x: &Point) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_distance(t, x)).fold(f64::INFINITY, f64::min)
    }

    /// Sorted ray crossings with exit (+1) / entry (-1) tags, `rho > tol`.
    pub fn ray_crossings(&self, x: &Point, dir: &Point, tol: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for (k, t) in self.triangles.iter().enumerate() {
            let (a, b, c) = (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]);
            let e1 = b - a;
            let e2 = c - a;
            let pv = dir.cross(&e2);
            let det = e1.dot(&pv);
            if det.abs() < 1e-300 {
                continue;
            }
            let inv = 1.0 / det;
            let tv = x - a;
            let u = tv.dot(&pv) * inv;
            if !(0.0..=1.0).contains(&u) {
                continue;
            }
            let qv = tv.cross(&e1);
            let v = dir.dot(&qv) * inv;
            if v < 0.0 || u + v > 1.0 {
                continue;
            }
            let rho = e2.dot(&qv) * inv;
            if rho > tol {
                out.push((rho, self.normals[k].dot(dir).signum()));
            }
        }
        out.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
        // a ray through a shared edge or vertex hits several triangles at the
        // same distance with the same orientation
        out.dedup_by(|u, v| (u.0 - v.0).abs() < 1e-12 * (1.0 + v.0) && u.1 == v.1);
        out
    }
}

/// Closest point of triangle `abc` to `p` (Ericson's region test).
pub fn closest_point_on_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Point {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}
