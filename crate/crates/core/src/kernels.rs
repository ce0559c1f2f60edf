//! Fundamental solution `U` of `□_c = Δ - c⁻²∂²_t`, its time antiderivative
//! `W = ∫₀ᵗ U`, and the double-layer kernel `H = ∂W/∂m`, for N = 1, 2, 3.
//!
//! In N = 3 `U` and part of `H` are retarded impulses; they come back as
//! [`Impulse`] descriptors instead of point values.

use std::f64::consts::PI;

use crate::error::{Result, WaveError};
use crate::geometry::Point;

/// Relative width of the excluded band at the N = 2 front.
pub const FRONT_GUARD: f64 = 1e-14;

/// Kernel arguments: offset `x = x_field - y_source`, time, speed and an
/// optional unit direction for `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub dim: usize,
    pub x: Point,
    pub t: f64,
    pub c: f64,
    pub m: Option<Point>,
}

impl KernelQuery {
    pub fn new(dim: usize, x: Point, t: f64, c: f64) -> Self {
        KernelQuery { dim, x, t, c, m: None }
    }

    pub fn with_direction(mut self, m: Point) -> Self {
        self.m = Some(m);
        self
    }

    fn radius(&self) -> f64 {
        match self.dim {
            1 => self.x.x.abs(),
            2 => self.x.xy().norm(),
            _ => self.x.norm(),
        }
    }

    fn check(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(WaveError::Domain(format!("dimension must be 1, 2 or 3, got {}", self.dim)));
        }
        if !(self.c > 0.0) {
            return Err(WaveError::Domain(format!("wave speed must be positive, got {}", self.c)));
        }
        if let Some(m) = self.m {
            if (m.norm() - 1.0).abs() > 1e-10 {
                return Err(WaveError::Domain("direction m must be a unit vector".into()));
            }
        }
        Ok(())
    }

    fn direction_cosine(&self) -> Result<f64> {
        let m = self.m.ok_or_else(|| WaveError::Misuse("H needs a direction m".into()))?;
        Ok(match self.dim {
            1 => self.x.x * m.x,
            2 => self.x.x * m.x + self.x.y * m.y,
            _ => self.x.dot(&m),
        })
    }
}

/// `weight * δ(t - delay)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse {
    pub weight: f64,
    pub delay: f64,
}

/// Regular part plus an optional retarded impulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub regular: f64,
    pub impulse: Option<Impulse>,
}

impl KernelValue {
    fn regular(v: f64) -> Self {
        KernelValue { regular: v, impulse: None }
    }
}

fn heaviside_open(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn front_guard(r: f64, ct: f64) -> Result<f64> {
    let d = ct * ct - r * r;
    if d.abs() < FRONT_GUARD * ct * ct {
        return Err(WaveError::FrontSingularity { r, ct });
    }
    Ok(d)
}

pub fn eval_u(q: &KernelQuery) -> Result<KernelValue> {
    q.check()?;
    let r = q.radius();
    let ct = q.c * q.t;
    Ok(match q.dim {
        1 => KernelValue::regular(-0.5 * q.c * heaviside_open(ct - r)),
        2 => {
            if ct <= 0.0 {
                return Ok(KernelValue::regular(0.0));
            }
            let d = front_guard(r, ct)?;
            if d < 0.0 {
                KernelValue::regular(0.0)
            } else {
                KernelValue::regular(-q.c / (2.0 * PI * d.sqrt()))
            }
        }
        _ => {
            if r == 0.0 {
                return Err(WaveError::SingularOrigin);
            }
            KernelValue { regular: 0.0, impulse: Some(Impulse { weight: -1.0 / (4.0 * PI * r), delay: r / q.c }) }
        }
    })
}

pub fn eval_w(q: &KernelQuery) -> Result<f64> {
    q.check()?;
    let r = q.radius();
    let ct = q.c * q.t;
    match q.dim {
        1 => Ok(-0.5 * (ct - r) * heaviside_open(ct - r)),
        2 => {
            if r == 0.0 {
                return Err(WaveError::SingularOrigin);
            }
            if ct <= r {
                return Ok(0.0);
            }
            Ok(-(ct / r).acosh() / (2.0 * PI))
        }
        _ => {
            if r == 0.0 {
                return Err(WaveError::SingularOrigin);
            }
            Ok(-heaviside_open(ct - r) / (4.0 * PI * r))
        }
    }
}

pub fn eval_h(q: &KernelQuery) -> Result<KernelValue> {
    q.check()?;
    let r = q.radius();
    let ct = q.c * q.t;
    let xm = q.direction_cosine()?;
    match q.dim {
        1 => Ok(KernelValue::regular(0.5 * xm.signum() * (xm != 0.0) as u8 as f64 * heaviside_open(ct - r))),
        2 => {
            if r == 0.0 {
                return Err(WaveError::SingularOrigin);
            }
            if ct <= 0.0 {
                return Ok(KernelValue::regular(0.0));
            }
            let d = front_guard(r, ct)?;
            if d < 0.0 {
                return Ok(KernelValue::regular(0.0));
            }
            Ok(KernelValue::regular(ct * xm / (2.0 * PI * r * r * d.sqrt())))
        }
        _ => {
            if r == 0.0 {
                return Err(WaveError::SingularOrigin);
            }
            let g = xm / (r * r);
            Ok(KernelValue {
                regular: g * heaviside_open(ct - r) / (4.0 * PI * r),
                impulse: Some(Impulse { weight: g / (4.0 * PI * q.c), delay: r / q.c }),
            })
        }
    }
}

/// `I0 = ∫ dτ/√(c²τ²-r²)` and `I1 = ∫ τ dτ/√(c²τ²-r²)` over
/// `[max(τ0, r/c), τ1]`.
pub fn time_kernel_integrals(r: f64, c: f64, tau0: f64, tau1: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(WaveError::Domain(format!("time kernel integrals need r > 0, got {r}")));
    }
    let arrival = r / c;
    let a = tau0.max(arrival);
    if tau1 <= a {
        return Ok((0.0, 0.0));
    }
    let root = |tau: f64| ((c * tau - r) * (c * tau + r)).max(0.0).sqrt();
    let f0 = |tau: f64| ((c * tau + root(tau)) / r).ln() / c;
    let f1 = |tau: f64| root(tau) / (c * c);
    // the lower limit at arrival is exactly zero; evaluating it would cost
    // half the digits through the square root
    let (g0, g1) = if tau0 <= arrival { (0.0, 0.0) } else { (f0(a), f1(a)) };
    Ok((f0(tau1) - g0, f1(tau1) - g1))
}

/// `∫ (α + βτ)/√(c²τ²-r²) dτ` over `[τ0, τ1]` for `r ≥ 0`; the `r = 0`
/// case is the limit `∫ (α + βτ)/(cτ)` and needs `α = 0` or `τ0 > 0`.
pub fn linear_time_weight(r: f64, c: f64, tau0: f64, tau1: f64, alpha: f64, beta: f64) -> f64 {
    if r > 0.0 {
        let (i0, i1) = time_kernel_integrals(r, c, tau0, tau1).unwrap_or((0.0, 0.0));
        alpha * i0 + beta * i1
    } else {
        let a = tau0.max(0.0);
        if tau1 <= a {
            return 0.0;
        }
        let log_part = if alpha != 0.0 { alpha * (tau1 / a).ln() } else { 0.0 };
        (log_part + beta * (tau1 - a)) / c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q2(r: f64, t: f64) -> KernelQuery {
        KernelQuery::new(2, Point::new(r, 0.0, 0.0), t, 1.0)
    }

    #[test]
    fn examples_u() {
        let v = eval_u(&q2(0.6, 1.0)).unwrap().regular;
        assert!((v + 1.0 / (2.0 * PI * 0.8)).abs() < 1e-15);
        assert!((v + 0.198944).abs() < 1e-6);
        assert_eq!(eval_u(&q2(1.2, 1.0)).unwrap().regular, 0.0);
        let q1 = KernelQuery::new(1, Point::new(1.0, 0.0, 0.0), 1.0, 2.0);
        assert_eq!(eval_u(&q1).unwrap().regular, -1.0);
        assert!(matches!(eval_u(&q2(1.0, 1.0)), Err(WaveError::FrontSingularity { .. })));
        let d = eval_u(&KernelQuery::new(3, Point::new(0.5, 0.0, 0.0), 1.0, 1.0)).unwrap().impulse.unwrap();
        assert!((d.weight + 1.0 / (2.0 * PI)).abs() < 1e-15 && d.delay == 0.5);
    }

    #[test]
    fn examples_w() {
        // ∂W/∂t = U < 0 fixes the sign: W = -acosh(ct/R)/(2π)
        let w = eval_w(&q2(0.6, 1.0)).unwrap();
        assert!((w + 3f64.ln() / (2.0 * PI)).abs() < 1e-14);
        assert!((w + 0.174850).abs() < 1e-6);
        let w1 = eval_w(&KernelQuery::new(1, Point::new(0.5, 0.0, 0.0), 1.0, 1.0)).unwrap();
        assert!((w1 + 0.25).abs() < 1e-15);
        let w3 = eval_w(&KernelQuery::new(3, Point::new(0.5, 0.0, 0.0), 1.0, 1.0)).unwrap();
        assert!((w3 + 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(matches!(eval_w(&q2(0.0, 1.0)), Err(WaveError::SingularOrigin)));
    }

    #[test]
    fn examples_h() {
        let e1 = Point::new(1.0, 0.0, 0.0);
        let h3 = eval_h(&KernelQuery::new(3, e1, 2.0, 1.0).with_direction(e1)).unwrap();
        assert!((h3.regular - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((h3.regular - 0.079577).abs() < 1e-6);
        let h2 = eval_h(&q2(1.2, 1.0).with_direction(Point::new(0.6, 0.8, 0.0))).unwrap();
        assert_eq!(h2.regular, 0.0);
        let h1 = eval_h(&KernelQuery::new(1, Point::zeros(), 0.7, 1.0).with_direction(e1)).unwrap();
        assert_eq!(h1.regular, 0.0);
    }

    #[test]
    fn time_integral_examples() {
        let (i0, i1) = time_kernel_integrals(0.5, 1.0, 0.5, 1.0).unwrap();
        let f0 = |t: f64| 1.0 / (t * t - 0.25).sqrt();
        let f1 = |t: f64| t / (t * t - 0.25).sqrt();
        // substitution τ = r cosh(v) removes the arrival singularity for the oracle
        let g0 = |v: f64| f0(0.5 * v.cosh()) * 0.5 * v.sinh();
        let g1 = |v: f64| f1(0.5 * v.cosh()) * 0.5 * v.sinh();
        let vmax = 2f64.acosh();
        assert!((i0 - adaptive(&g0, 0.0, vmax, 1e-13)).abs() < 1e-10);
        assert!((i1 - adaptive(&g1, 0.0, vmax, 1e-13)).abs() < 1e-10);
        assert!((i0 - 1.316958).abs() < 1e-6);
        assert!((i1 - 0.866025).abs() < 1e-6);
        assert_eq!(time_kernel_integrals(0.5, 1.0, 0.0, 0.4).unwrap(), (0.0, 0.0));
        assert!(time_kernel_integrals(0.0, 1.0, 0.0, 1.0).is_err());
    }

    fn random_query(rng: &mut ChaCha8Rng, dim: usize) -> KernelQuery {
        let mut x = Point::zeros();
        for k in 0..dim {
            x[k] = rng.gen_range(-2.0..2.0);
        }
        KernelQuery::new(dim, x, rng.gen_range(0.01..3.0), rng.gen_range(0.5..2.0))
    }

    #[test]
    fn causality_outside_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 10_000 {
            let dim = 1 + checked % 3;
            let mut q = random_query(&mut rng, dim);
            if q.radius() <= q.c * q.t * (1.0 + 1e-6) {
                q.t = 0.5 * q.radius() / q.c;
            }
            let mut m = Point::zeros();
            m[0] = 1.0;
            let q = q.with_direction(m);
            let u = eval_u(&q).unwrap();
            let h = eval_h(&q).unwrap();
            assert_eq!(u.regular, 0.0);
            assert_eq!(eval_w(&q).unwrap(), 0.0);
            assert_eq!(h.regular, 0.0);
            if dim == 3 {
                assert!(u.impulse.unwrap().delay > q.t && h.impulse.unwrap().delay > q.t);
            }
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn time_integrals_match_quadrature(r in 0.05f64..2.0, c in 0.3f64..3.0, a in 0.0f64..3.0, len in 0.0f64..3.0) {
            let (i0, i1) = time_kernel_integrals(r, c, a, a + len).unwrap();
            // τ = (r/c) cosh v
            let lo = (c * a / r).max(1.0).acosh();
            let hi = (c * (a + len) / r).max(1.0).acosh();
            let g0 = |v: f64| 1.0 / c + 0.0 * v;
            let g1 = |v: f64| r * v.cosh() / (c * c);
            let o0 = if hi > lo { adaptive(&g0, lo, hi, 1e-13) } else { 0.0 };
            let o1 = if hi > lo { adaptive(&g1, lo, hi, 1e-13) } else { 0.0 };
            prop_assert!((i0 - o0).abs() < 1e-10 * (1.0 + o0.abs()));
            prop_assert!((i1 - o1).abs() < 1e-10 * (1.0 + o1.abs()));
        }

        #[test]
        fn linear_weight_limit_at_origin(c in 0.5f64..2.0, a in 0.1f64..1.0, len in 0.1f64..1.0) {
            let r = 1e-9;
            let near = linear_time_weight(r, c, a, a + len, 0.7, -0.3);
            let at = linear_time_weight(0.0, c, a, a + len, 0.7, -0.3);
            prop_assert!((near - at).abs() < 1e-8);
        }
    }
    proptest! {
        #[test]
        fn w_is_time_antiderivative_of_u(dim in 1usize..3, x0 in -1.5f64..1.5, x1 in -1.5f64..1.5, frac in 0.05f64..0.95, c in 0.5f64..2.0) {
            let x = if dim == 1 { Point::new(x0, 0.0, 0.0) } else { Point::new(x0, x1, 0.0) };
            let q = KernelQuery::new(dim, x, 1.0, c);
            let r = q.radius();
            prop_assume!(r > 1e-3);
            // interior of the cone, away from the front
            let t = r / (c * frac);
            let h = 1e-5 * t;
            let w = |s: f64| eval_w(&KernelQuery { t: s, ..q }).unwrap();
            let du = (w(t + h) - w(t - h)) / (2.0 * h);
            let u = eval_u(&KernelQuery { t, ..q }).unwrap().regular;
            prop_assert!((du - u).abs() <= 1e-6 * u.abs(), "{} vs {}", du, u);
        }

        #[test]
        fn symmetry_relations(dim in 1usize..4, a in prop::array::uniform3(-1.0f64..1.0), b in prop::array::uniform3(-1.0f64..1.0), t in 0.1f64..3.0, th in 0.0f64..6.28) {
            let mut x = Point::from(a) - Point::from(b);
            for k in dim..3 { x[k] = 0.0; }
            prop_assume!(x.norm() > 1e-3);
            let mut m = Point::new(th.cos(), th.sin(), 0.0);
            if dim == 1 { m = Point::new(1.0, 0.0, 0.0); }
            let fwd = KernelQuery::new(dim, x, t, 1.3).with_direction(m);
            let rev = KernelQuery::new(dim, -x, t, 1.3).with_direction(m);
            let flip = KernelQuery::new(dim, x, t, 1.3).with_direction(-m);
            if let (Ok(u1), Ok(u2)) = (eval_u(&fwd), eval_u(&rev)) {
                prop_assert_eq!(u1.regular, u2.regular);
            }
            prop_assert_eq!(eval_w(&fwd).unwrap(), eval_w(&rev).unwrap());
            if let (Ok(h1), Ok(h2), Ok(h3)) = (eval_h(&fwd), eval_h(&rev), eval_h(&flip)) {
                prop_assert!((h1.regular + h2.regular).abs() <= 1e-12 * h1.regular.abs());
                prop_assert!((h1.regular + h3.regular).abs() <= 1e-12 * h1.regular.abs());
            }
        }
    }
}
