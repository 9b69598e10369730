//! Exp-sinh quadrature on (0, ∞).

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of step halvings allowed after the unit-step level.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 10 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be strictly positive".into()));
        }
        if max_subdivisions < 10 {
            return Err(Error::InvalidConfig(format!(
                "max_subdivisions must be at least 10, got {max_subdivisions}"
            )));
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions })
    }

    /// Tighter tolerances, used where an integral is differenced against a constant.
    pub fn tight() -> Self {
        Self { abs_tol: 1e-15, rel_tol: 1e-13, max_subdivisions: 12 }
    }
}

/// Result of a quadrature with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

// x = exp(π/2 sinh t); t = ±6.75 spans roughly e^{±670}
const T_MAX: f64 = 6.75;
const TRUNCATION: f64 = 1e-20;

fn weighted_sample<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let u = FRAC_PI_2 * t.sinh();
    let x = u.exp();
    if x == 0.0 || !x.is_finite() {
        return Ok(0.0);
    }
    let w = x * FRAC_PI_2 * t.cosh();
    let v = f(x) * w;
    if v.is_finite() {
        Ok(v)
    } else if t.abs() > 3.0 {
        // overflow or 0·∞ at the extreme ends of the substitution
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("integrand is not finite at x = {x}")))
    }
}

/// Integral over (0, ∞) with its error estimate; never fails on tolerance.
pub fn integrate_semiinf_estimate<F: Fn(f64) -> f64>(f: F, cfg: &QuadratureConfig) -> Result<QuadEstimate> {
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut h = 1.0;
    let n0 = (T_MAX / h).ceil() as i64;
    let mut sum = 0.0;
    for j in -n0..=n0 {
        let t = j as f64 * h;
        let v = weighted_sample(&f, t)?;
        samples.push((t, v));
        sum += v;
    }
    let mut estimate = h * sum;
    let mut lo = -T_MAX;
    let mut hi = T_MAX;
    let mut error = f64::INFINITY;
    for level in 1..=cfg.max_subdivisions {
        // once the shape is resolved, drop the far ends where the weighted integrand is negligible
        if level >= 3 {
            let peak = samples.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let sig: Vec<f64> = samples
                .iter()
                .filter(|(_, v)| v.abs() > TRUNCATION * peak)
                .map(|(t, _)| *t)
                .collect();
            if let (Some(a), Some(b)) = (sig.first(), sig.last()) {
                lo = lo.max(a - 2.0 * h);
                hi = hi.min(b + 2.0 * h);
            }
        }
        h *= 0.5;
        let mut added = 0.0;
        let n = (T_MAX / h).ceil() as i64;
        let mut j = -n + if n % 2 == 0 { 1 } else { 0 };
        while j <= n {
            let t = j as f64 * h;
            if t >= lo && t <= hi {
                let v = weighted_sample(&f, t)?;
                samples.push((t, v));
                added += v;
            }
            j += 2;
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let next = 0.5 * estimate + h * added;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error <= cfg.abs_tol.max(cfg.rel_tol * estimate.abs()) {
            return Ok(QuadEstimate { value: estimate, error, evaluations: samples.len(), converged: true });
        }
    }
    Ok(QuadEstimate { value: estimate, error, evaluations: samples.len(), converged: false })
}

/// ∫₀^∞ f(x) dx to within max(abs_tol, rel_tol·|value|).
pub fn integrate_semiinf<F: Fn(f64) -> f64>(f: F, cfg: &QuadratureConfig) -> Result<f64> {
    let est = integrate_semiinf_estimate(f, cfg)?;
    if est.converged {
        Ok(est.value)
    } else {
        Err(Error::Quadrature { estimate: est.value, error_bound: est.error })
    }
}
