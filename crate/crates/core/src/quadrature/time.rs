//! Exact time integrals of the retarded kernels against the time basis.

use crate::kernels::linear_time_weight;

/// `∫_{r/c}^{t} ρ(t - τ) dτ / √(c²τ² - r²)` for `ρ` linear between the
/// samples `sample(m)` at `t_m = mΔt` (and zero before `t = 0`).
pub fn single_layer_2d(r: f64, c: f64, t: f64, dt: f64, sample: &dyn Fn(usize) -> f64) -> f64 {
    let s_max = t - r / c;
    if s_max <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut m = 0;
    loop {
        let tm = m as f64 * dt;
        if tm >= s_max {
            break;
        }
        let hi = ((m + 1) as f64 * dt).min(t);
        let (a, b) = (sample(m), sample(m + 1));
        let slope = (b - a) / dt;
        // ρ = a + slope (t - τ - t_m) on τ ∈ [t - hi, t - t_m]
        let alpha = a + slope * (t - tm);
        acc += linear_time_weight(r, c, t - hi, t - tm, alpha, -slope);
        m += 1;
    }
    acc
}

/// `∫_{r/c}^{t} τ u̇(t - τ) dτ / √(c²τ² - r²)` with `u̇` constant on each
/// step, `rate(m)` on `(t_{m-1}, t_m)` for `m ≥ 1`.
pub fn double_layer_2d(r: f64, c: f64, t: f64, dt: f64, rate: &dyn Fn(usize) -> f64) -> f64 {
    let s_max = t - r / c;
    if s_max <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut m = 1;
    loop {
        let lo = (m - 1) as f64 * dt;
        if lo >= s_max {
            break;
        }
        let hi = (m as f64 * dt).min(t);
        acc += linear_time_weight(r, c, t - hi, t - lo, 0.0, rate(m));
        m += 1;
    }
    acc
}

/// Weights of the rising (`left`) and falling (`right`) halves of the time
/// hat centred at lag `ℓΔt`, against `1/√(c²τ² - r²)`.
pub fn hat_weights_2d(r: f64, c: f64, dt: f64, lag: usize) -> (f64, f64) {
    let l = lag as f64;
    let left = if lag == 0 {
        0.0
    } else {
        // (τ - (ℓ-1)Δt)/Δt on [(ℓ-1)Δt, ℓΔt]
        linear_time_weight(r, c, (l - 1.0) * dt, l * dt, -(l - 1.0), 1.0 / dt)
    };
    // ((ℓ+1)Δt - τ)/Δt on [ℓΔt, (ℓ+1)Δt]
    let right = linear_time_weight(r, c, l * dt, (l + 1.0) * dt, l + 1.0, -1.0 / dt);
    (left, right)
}

/// `∫ τ dτ / √(c²τ² - r²)` over `[ℓΔt, (ℓ+1)Δt]`.
pub fn rate_weight_2d(r: f64, c: f64, dt: f64, lag: usize) -> f64 {
    let l = lag as f64;
    linear_time_weight(r, c, l * dt, (l + 1.0) * dt, 0.0, 1.0)
}

/// Linear hat weights of a retarded sample at delay `τ`: lag `ℓ` and
/// fraction `θ` such that `f(t_k - τ) = (1-θ) f_{k-ℓ} + θ f_{k-ℓ-1}`.
pub fn retarded_lag(tau: f64, dt: f64) -> (usize, f64) {
    let s = tau / dt;
    let l = s.floor();
    (l as usize, s - l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive;
    use proptest::prelude::*;

    // τ = (r/c) cosh v removes the arrival singularity for the oracle
    fn oracle(r: f64, c: f64, t: f64, dt: f64, f: &dyn Fn(f64) -> f64) -> f64 {
        let vmax = (c * t / r).max(1.0).acosh();
        let g = |v: f64| f((r / c) * v.cosh()) / c;
        // breaks where t - τ crosses a grid time
        let mut cuts: Vec<f64> = (0..=((t / dt) as usize))
            .map(|m| t - m as f64 * dt)
            .filter(|tau| c * tau > r)
            .map(|tau| (c * tau / r).acosh())
            .collect();
        cuts.extend((0..=64).map(|k| vmax * k as f64 / 64.0));
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| adaptive(&g, w[0], w[1], 1e-14)).sum()
    }

    proptest! {
        #[test]
        fn single_layer_matches_oracle(r in 0.05f64..1.5, c in 0.5f64..2.0, t in 0.1f64..2.5, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let dt = 0.13;
            let sample = |m: usize| a * (m as f64 * 0.7).sin() + b * m as f64;
            let interp = |s: f64| {
                let k = (s / dt).floor() as usize;
                let th = s / dt - k as f64;
                (1.0 - th) * sample(k) + th * sample(k + 1)
            };
            let v = single_layer_2d(r, c, t, dt, &sample);
            let o = oracle(r, c, t, dt, &|tau| interp(t - tau));
            prop_assert!((v - o).abs() < 1e-7 * (1.0 + o.abs()), "{} vs {}", v, o);
        }

        #[test]
        fn double_layer_matches_oracle(r in 0.05f64..1.5, c in 0.5f64..2.0, t in 0.1f64..2.5, a in -1.0f64..1.0) {
            let dt = 0.11;
            let rate = |m: usize| a + (m as f64).cos();
            let v = double_layer_2d(r, c, t, dt, &rate);
            let o = oracle(r, c, t, dt, &|tau| tau * rate(((t - tau) / dt).floor() as usize + 1));
            prop_assert!((v - o).abs() < 1e-7 * (1.0 + o.abs()), "{} vs {}", v, o);
        }

        #[test]
        fn hats_reassemble_the_series(r in 0.05f64..1.5, k in 1usize..20) {
            let (c, dt) = (1.0, 0.1);
            let t = k as f64 * dt;
            let sample = |m: usize| 1.0 + 0.3 * m as f64 - 0.01 * (m * m) as f64;
            let direct = single_layer_2d(r, c, t, dt, &sample);
            let mut via = 0.0;
            for m in 0..=k {
                let (left, right) = hat_weights_2d(r, c, dt, k - m);
                via += sample(m) * if m == 0 { left } else { left + right };
            }
            prop_assert!((direct - via).abs() < 1e-12 * (1.0 + direct.abs()));
        }
    }
}
