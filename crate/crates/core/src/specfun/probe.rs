//! Alternating finite differences as a falsifier for complete monotonicity.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Default probe step at x0.
pub fn default_probe_step(x0: f64) -> f64 {
    (1e-2 * x0).max(1e-3)
}

/// Signs of (−Δ_h)^n f(x0) for n = 0..=max_order (max_order is capped at 8).
///
/// A difference whose magnitude is below the rounding level of the
/// contributing samples is reported as `Zero`.
pub fn alternating_fd_probe<F: Fn(f64) -> f64>(f: F, x0: f64, h: f64, max_order: usize) -> Vec<Sign> {
    let order = max_order.min(8);
    let vals: Vec<f64> = (0..=order).map(|k| f(x0 + k as f64 * h)).collect();
    let mut out = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut binom = 1.0;
        let mut acc = 0.0;
        let mut scale = 0.0f64;
        for (k, v) in vals.iter().take(n + 1).enumerate() {
            let term = binom * v;
            acc += if k % 2 == 0 { term } else { -term };
            scale = scale.max(v.abs());
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        let noise = (1u64 << n) as f64 * 64.0 * f64::EPSILON * scale;
        out.push(if acc.is_nan() || acc.abs() <= noise {
            Sign::Zero
        } else if acc > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        });
    }
    out
}
