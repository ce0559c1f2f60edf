//! Polar quadrature on flat triangles, split at retarded-time spheres.

use crate::geometry::{FacetFrame, Point};
use crate::quadrature::GaussLegendre;

/// Barycentric coordinates of `y` (assumed in the triangle's plane).
pub fn barycentric(c: &[Point; 3], y: &Point) -> [f64; 3] {
    let e0 = c[1] - c[0];
    let e1 = c[2] - c[0];
    let w = y - c[0];
    let d00 = e0.dot(&e0);
    let d01 = e0.dot(&e1);
    let d11 = e1.dot(&e1);
    let d20 = w.dot(&e0);
    let d21 = w.dot(&e1);
    let den = d00 * d11 - d01 * d01;
    let l1 = (d11 * d20 - d01 * d21) / den;
    let l2 = (d00 * d21 - d01 * d20) / den;
    [1.0 - l1 - l2, l1, l2]
}

/// Angular and radial rules for a triangle at distance `dist` from the
/// field point: the full rules nearby, low orders once the triangle is
/// well separated.
pub fn facet_rules<'a>(near: &'a (GaussLegendre, GaussLegendre), far: &'a (GaussLegendre, GaussLegendre), dist: f64, size: f64) -> (&'a GaussLegendre, &'a GaussLegendre) {
    let r = if dist > 2.0 * size { far } else { near };
    (&r.0, &r.1)
}

/// Integrates over `triangle ∩ {r_min < r < r_max}` in polar coordinates
/// about the foot of the field point, with radial cuts wherever `r` crosses
/// one of `radii`. `f(y, r, w)` gets the area weight `w`.
pub fn integrate_facet(
    frame: &FacetFrame,
    radii: &[f64],
    r_min: f64,
    r_max: f64,
    psi_rule: &GaussLegendre,
    rho_rule: &GaussLegendre,
    mut f: impl FnMut(&Point, f64, f64),
) {
    let h = frame.height.abs();
    let in_plane = |r: f64| if r > h { Some(((r - h) * (r + h)).sqrt()) } else { None };
    let Some(rho_max) = in_plane(r_max) else { return };
    let rho_min = in_plane(r_min).unwrap_or(0.0);
    let mut planar: Vec<f64> = radii.iter().filter(|&&r| r < r_max).filter_map(|&r| in_plane(r)).collect();
    planar.push(rho_max);
    if rho_min > 0.0 {
        planar.push(rho_min);
    }
    planar.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut cuts: Vec<f64> = Vec::new();
    for sector in frame.sectors(&planar) {
        for (psi, wpsi) in psi_rule.mapped(sector.psi0, sector.psi1) {
            let (a, b) = sector.rho_range(psi);
            let (a, b) = (a.max(rho_min), b.min(rho_max));
            if b <= a {
                continue;
            }
            cuts.clear();
            cuts.push(a);
            cuts.extend(planar.iter().copied().filter(|&p| p > a && p < b));
            if h > 0.0 && a < 4.0 * h {
                // geometric grading towards the near-singular foot
                let mut g = 0.25 * h;
                while g < b {
                    if g > a {
                        cuts.push(g);
                    }
                    g *= 2.0;
                }
            }
            cuts.push(b);
            cuts.sort_by(|u, v| u.partial_cmp(v).unwrap());
            for k in 0..cuts.len() - 1 {
                let (lo, hi) = (cuts[k], cuts[k + 1]);
                if hi - lo <= 1e-15 * b {
                    continue;
                }
                for (rho, wrho) in rho_rule.mapped(lo, hi) {
                    let y = frame.point(rho, psi);
                    let r = (rho * rho + h * h).sqrt();
                    f(&y, r, wpsi * wrho * rho);
                }
            }
        }
    }
}
