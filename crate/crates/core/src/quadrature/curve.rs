//! Clipped, split element pieces on closed curves.

use crate::geometry::{Curve, Point};
use crate::quadrature::GaussLegendre;

/// A parameter sub-range of one element, smooth for the integrands in use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePiece {
    pub element: usize,
    pub a: f64,
    pub b: f64,
}

/// Parameter of `x` on element `e` if `x` lies on it.
pub fn locate_on_element(c: &Curve, e: usize, x: &Point, tol: f64) -> Option<f64> {
    let (s0, s1) = c.element_range(e);
    for k in [c.element_nodes(e).0, c.element_nodes(e).1] {
        if (c.node_point(k) - x).norm() <= tol {
            return Some(if k == c.element_nodes(e).0 { s0 } else { s1 });
        }
    }
    // interior points: project by golden search on |y(s) - x|
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |s: f64| (c.element_position(e, s) - x).norm();
    let (mut lo, mut hi) = (s0, s1);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let s = 0.5 * (lo + hi);
    (f(s) <= tol && s > s0 && s < s1).then_some(s)
}

/// Field point for boundary integrals, with its curve parameter when it
/// lies on the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub x: Point,
    pub param: Option<f64>,
}

impl Anchor {
    pub fn new(c: &Curve, x: &Point, on_curve_tol: Option<f64>) -> Self {
        let param = on_curve_tol.and_then(|tol| (0..c.element_count()).find_map(|e| locate_on_element(c, e, x, tol)));
        Anchor { x: *x, param }
    }

    pub fn offset(&self, c: &Curve, e: usize, s: f64) -> Point {
        match self.param {
            Some(sigma) => c.chord(e, s, sigma),
            None => c.element_position(e, s) - self.x,
        }
    }
}

/// Pieces of `S ∩ {r < r_max}` cut at every radius in `radii` and at the
/// anchor parameter.
pub fn curve_pieces(c: &Curve, anchor: &Anchor, r_max: f64, radii: &[f64]) -> Vec<CurvePiece> {
    let x = &anchor.x;
    let mut out = Vec::new();
    if r_max <= 0.0 {
        return out;
    }
    for e in 0..c.element_count() {
        let (s0, s1) = c.element_range(e);
        let mut cuts = vec![s0, s1];
        cuts.extend(c.radius_crossings(e, x, r_max));
        for &r in radii {
            if r > 0.0 && r < r_max {
                cuts.extend(c.radius_crossings(e, x, r));
            }
        }
        if let Some(sigma) = anchor.param {
            let p = c.period();
            for cand in [sigma, sigma + p] {
                if cand > s0 && cand < s1 {
                    cuts.push(cand);
                }
            }
        }
        cuts.sort_by(|u, v| u.partial_cmp(v).unwrap());
        cuts.dedup_by(|u, v| (*u - *v).abs() <= 1e-12 * (s1 - s0));
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            if anchor.offset(c, e, 0.5 * (a + b)).norm() < r_max {
                out.push(CurvePiece { element: e, a, b });
            }
        }
    }
    out
}

/// Graded Gauss–Legendre over each piece; `f(element, s, y, y - x, w)`
/// receives the arc-length weight `w = ω |y'(s)|`.
pub fn integrate_pieces(
    c: &Curve,
    anchor: &Anchor,
    pieces: &[CurvePiece],
    rule: &GaussLegendre,
    mut f: impl FnMut(usize, f64, &Point, &Point, f64),
) {
    let mut stack = Vec::new();
    for p in pieces {
        stack.push((p.a, p.b, 0));
        while let Some((a, b, depth)) = stack.pop() {
            // bisect panels that are long compared with their distance to x
            let touches = anchor.param.is_some_and(|sg| {
                let per = c.period();
                [sg, sg + per].iter().any(|v| (v - a).abs() < 1e-12 || (v - b).abs() < 1e-12)
            });
            let len = (c.element_position(p.element, b) - c.element_position(p.element, a)).norm();
            let dist = anchor.offset(c, p.element, 0.5 * (a + b)).norm();
            if !touches && depth < 12 && len > dist {
                let m = 0.5 * (a + b);
                stack.push((a, m, depth + 1));
                stack.push((m, b, depth + 1));
                continue;
            }
            for (s, w) in rule.graded(a, b) {
                let y = c.element_position(p.element, s);
                let d = anchor.offset(c, p.element, s);
                f(p.element, s, &y, &d, w * c.jacobian(s));
            }
        }
    }
}

/// Hat-function weights of element `e` at parameter `s`: `(node_a, 1-ξ),
/// (node_b, ξ)`.
pub fn element_hats(c: &Curve, e: usize, s: f64) -> [(usize, f64); 2] {
    let (s0, s1) = c.element_range(e);
    let xi = (s - s0) / (s1 - s0);
    let (a, b) = c.element_nodes(e);
    [(a, 1.0 - xi), (b, xi)]
}
