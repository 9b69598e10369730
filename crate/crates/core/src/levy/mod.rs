//! The Lévy side of β^{-s}: the spectral function ρ_{a,b,s} and its derivative,
//! tail regimes, the Laplace exponent Ψ, the killing rate, the jump measure ν
//! and the Gamma-side spectral data m_{a,s}, c_{a,s}.

mod measure;

pub use measure::{hyperexp_nu_integer_b, hyperexp_nu_integer_s, jump_measure, ExpTerm, HyperExpMixture, JumpMeasure};

use serde::Serialize;

use crate::betapower::Params;
use crate::classify::natural_number;
use crate::error::{Error, Result};
use crate::specfun::{
    hyp2f1_dz_log, hyp2f1_log, integrate_semiinf, ln_gamma_ratio, ln_gamma_signed, log_gamma, QuadratureConfig,
    SeriesPolicy, SignedLog,
};

fn check_nonneg(x: f64) -> Result<()> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!("x must be non-negative and finite, got {x}")));
    }
    Ok(())
}

/// ρ(x) as a signed logarithm.
pub fn rho_log(p: Params, x: f64) -> Result<SignedLog> {
    check_nonneg(x)?;
    let (a, b, s) = (p.a(), p.b(), p.s());
    let pre = (b * s).ln() - (a + b) * x;
    if x == 0.0 {
        return Ok(SignedLog { sign: 1.0, ln_abs: pre });
    }
    let z = -(-x).exp_m1();
    let f = hyp2f1_log(1.0 + b, 1.0 - s, 2.0, z, -x, &SeriesPolicy::default())?;
    Ok(f.scale_ln(pre))
}

/// ρ_{a,b,s}(x) = bs e^{−(a+b)x} ₂F₁(1+b, 1−s; 2; 1−e^{−x}).
pub fn rho(p: Params, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(p.b() * p.s());
    }
    Ok(rho_log(p, x)?.value())
}

/// ρ′(x) as a signed logarithm, from the product rule and the contiguous derivative.
pub fn rho_prime_log(p: Params, x: f64) -> Result<SignedLog> {
    check_nonneg(x)?;
    let (a, b, s) = (p.a(), p.b(), p.s());
    let pre = (b * s).ln() - (a + b) * x;
    let policy = SeriesPolicy::default();
    let (f, fz) = if x == 0.0 {
        (SignedLog::ONE, SignedLog::from_value((1.0 + b) * (1.0 - s) / 2.0))
    } else {
        let z = -(-x).exp_m1();
        (
            hyp2f1_log(1.0 + b, 1.0 - s, 2.0, z, -x, &policy)?,
            hyp2f1_dz_log(1.0 + b, 1.0 - s, 2.0, z, -x, &policy)?,
        )
    };
    let combo = SignedLog::weighted_sum(&[(-(a + b), f), (1.0, fz.scale_ln(-x))]);
    Ok(combo.scale_ln(pre))
}

/// ρ′_{a,b,s}(x).
pub fn rho_prime(p: Params, x: f64) -> Result<f64> {
    Ok(rho_prime_log(p, x)?.value())
}

/// ρ′(0) = −(bs/2)(2a + b + bs + s − 1).
pub fn rho_prime_at_zero(p: Params) -> f64 {
    -(p.b() * p.s() / 2.0) * (p.sd_index() - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailKind {
    Constant,
    LinearInX,
    Zero,
}

/// Limit of ₂F₁(1+m, 1−M; 2; 1−e^{−x}) as x → ∞ with m = b∧s, M = b∨s.
/// For `LinearInX` the value is the slope of the linear growth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailConstant {
    pub kind: TailKind,
    pub value: f64,
}

fn gamma_sl(x: f64) -> SignedLog {
    match ln_gamma_signed(x) {
        Some((l, s)) => SignedLog { sign: s, ln_abs: l },
        None => SignedLog { sign: 1.0, ln_abs: f64::INFINITY },
    }
}

fn rgamma_sl(x: f64) -> SignedLog {
    match ln_gamma_signed(x) {
        Some((l, s)) => SignedLog { sign: s, ln_abs: -l },
        None => SignedLog::ZERO,
    }
}

pub fn tail_constant(p: Params) -> TailConstant {
    let m = p.b().min(p.s());
    let big = p.b().max(p.s());
    if (big - m).abs() <= 1e-12 * m.max(1.0) {
        if let Some(n) = natural_number(m) {
            let v = if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            return TailConstant { kind: TailKind::Constant, value: v };
        }
        let slope = rgamma_sl(1.0 + m).mul(rgamma_sl(1.0 - m)).value();
        return TailConstant { kind: TailKind::LinearInX, value: slope };
    }
    let v = gamma_sl(big - m).mul(rgamma_sl(1.0 + big)).mul(rgamma_sl(1.0 - m)).value();
    if v == 0.0 {
        TailConstant { kind: TailKind::Zero, value: 0.0 }
    } else {
        TailConstant { kind: TailKind::Constant, value: v }
    }
}

/// Leading large-x behaviour of ρ implied by the tail constant.
pub fn rho_tail_asymptotic(p: Params, x: f64) -> f64 {
    let t = tail_constant(p);
    let m = p.b().min(p.s());
    let base = p.b() * p.s() * (-(p.a() + m) * x).exp();
    match t.kind {
        TailKind::Constant => base * t.value,
        TailKind::LinearInX => base * t.value * x,
        TailKind::Zero => 0.0,
    }
}

/// Ψ(u) = u Γ(a+s+u)Γ(a+b+u) / (Γ(a+b+s+u)Γ(a+u)).
pub fn psi_exact(p: Params, u: f64) -> Result<f64> {
    if !(u.is_finite() && u >= 0.0) {
        return Err(Error::Domain(format!("u must be non-negative, got {u}")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    Ok(u * killed_bernstein(p, u)?)
}

/// Γ(a+b+λ)Γ(a+s+λ)/(Γ(a+λ)Γ(a+b+s+λ)) = κ + ∫(1−e^{−λx})ρ(x)dx.
pub fn killed_bernstein(p: Params, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
    }
    let (a, b, s) = (p.a(), p.b(), p.s());
    let l = ln_gamma_ratio(a + s + lambda, a + b + s + lambda)? + ln_gamma_ratio(a + b + lambda, a + lambda)?;
    Ok(l.exp())
}

/// Ψ(u) = u − u∫e^{−ux}ρ(x)dx for an arbitrary spectral function.
pub fn psi_quadrature_with<R: Fn(f64) -> Result<f64>>(rho_fn: R, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(u.is_finite() && u >= 0.0) {
        return Err(Error::Domain(format!("u must be non-negative, got {u}")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let i = integrate_semiinf(|x| rho_fn(x).map_or(f64::NAN, |r| (-u * x).exp() * r), cfg)?;
    Ok(u - u * i)
}

/// Ψ(u) by quadrature of the spectral function.
pub fn psi_quadrature(p: Params, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    psi_quadrature_with(|x| rho(p, x), u, cfg)
}

/// κ = Γ(a+b)Γ(a+s)/(Γ(a)Γ(a+b+s)).
pub fn killing_rate(p: Params) -> f64 {
    killed_bernstein(p, 0.0).expect("valid parameters")
}

/// Ψ_{a,b,s}(λ) = b^s λ (1 − s^{−1}∫e^{−λx}ρ(x/s)dx) by quadrature.
pub fn rescaled_exponent(p: Params, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    rescaled_exponent_with(|x| rho(p, x), p, lambda, cfg)
}

pub fn rescaled_exponent_with<R: Fn(f64) -> Result<f64>>(
    rho_fn: R,
    p: Params,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let s = p.s();
    let i = integrate_semiinf(|x| rho_fn(x / s).map_or(f64::NAN, |r| (-lambda * x).exp() * r), cfg)? / s;
    Ok(p.b().powf(s) * lambda * (1.0 - i))
}

/// Ψ_{a,b,s}(λ) = b^s Ψ(sλ)/s from the Gamma-ratio form.
pub fn rescaled_exponent_exact(p: Params, lambda: f64) -> Result<f64> {
    Ok(p.b().powf(p.s()) * psi_exact(p, p.s() * lambda)? / p.s())
}

/// λ Γ(a+s+sλ)/Γ(a+sλ), the Lévy exponent attached to γ_a^{-s}.
pub fn gamma_power_exponent(a: f64, s: f64, lambda: f64) -> Result<f64> {
    Ok(lambda * ln_gamma_ratio(a + s + s * lambda, a + s * lambda)?.exp())
}

/// e^{−t} − 1 + t, accurate for small t.
pub fn exp_m1_plus(t: f64) -> f64 {
    if t.abs() < 0.1 {
        let mut term = t * t / 2.0;
        let mut acc = term;
        for k in 3..12 {
            term *= -t / k as f64;
            acc += term;
        }
        acc
    } else {
        (-t).exp_m1() + t
    }
}

/// The b → ∞ limit exponent for s < 1:
/// λΓ(a+s)/Γ(a) + ∫₀^∞ (e^{−λy} − 1 + λy) e^{−(1+a/s)y} (s + e^{−y/s} + a(1 − e^{−y/s}))
/// / (sΓ(1−s)(1 − e^{−y/s})^{2+s}) dy.
pub fn gamma_power_limit_exponent(a: f64, s: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("the limit exponent needs 0 < s < 1, got {s}")));
    }
    let norm = s * log_gamma(1.0 - s)?.exp();
    let integrand = |y: f64| {
        let e = (-y / s).exp();
        let one_minus = -(-y / s).exp_m1();
        exp_m1_plus(lambda * y) * (-(1.0 + a / s) * y).exp() * (s + e + a * one_minus)
            / (norm * ((2.0 + s) * one_minus.ln()).exp())
    };
    let drift = lambda * ln_gamma_ratio(a + s, a)?.exp();
    Ok(drift + integrate_semiinf(integrand, cfg)?)
}

/// m_{a,s}(x) = e^{−ax/s}/(1 − e^{−x/s}).
pub fn gamma_spectral_m(a: f64, s: f64, x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    Ok((-a * x / s).exp() / -(-x / s).exp_m1())
}

/// c_{a,s} = s∫₀^∞ (e^{−x}/x − e^{−ax}/(1 − e^{−x})) dx.
pub fn gamma_drift_c(a: f64, s: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let t = 1.0 - a;
    let b2 = t * t - t + 1.0 / 6.0;
    let b3 = t * t * t - 1.5 * t * t + 0.5 * t;
    let cut = 1e-4 / a.max(1.0);
    let integrand = |x: f64| {
        if x < cut {
            (a - 1.5) + x * (1.0 - b2) / 2.0 - x * x * (1.0 + b3) / 6.0
        } else {
            (-x).exp() / x - (-a * x).exp() / -(-x).exp_m1()
        }
    };
    Ok(s * integrate_semiinf(integrand, cfg)?)
}

/// Locations of strict sign changes of f on a geometric grid over (x_lo, x_hi),
/// each refined by bisection. Values with |f| < 1e-12 are treated as zero plateaus.
pub fn sign_change_locations<F: Fn(f64) -> f64>(f: F, x_lo: f64, x_hi: f64, grid_points: usize) -> Vec<f64> {
    const PLATEAU: f64 = 1e-12;
    let n = grid_points.max(1000);
    let start = if x_lo > 0.0 { x_lo } else { x_hi * 1e-9 };
    let ratio = (x_hi / start).powf(1.0 / (n - 1) as f64);
    let mut roots = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for i in 0..n {
        let x = if i == n - 1 { x_hi } else { start * ratio.powi(i as i32) };
        let v = f(x);
        if !v.is_finite() || v.abs() < PLATEAU {
            continue;
        }
        if let Some((xp, vp)) = last {
            if vp.signum() != v.signum() {
                let (mut lo, mut hi, s_lo) = (xp, x, vp.signum());
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm.is_finite() && fm.signum() == s_lo && fm != 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-14 * hi {
                        break;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        last = Some((x, v));
    }
    roots
}

/// Number of strict sign changes of f on (x_lo, x_hi); `grid_points` is at least 1000.
pub fn count_sign_changes<F: Fn(f64) -> f64>(f: F, x_lo: f64, x_hi: f64, grid_points: usize) -> usize {
    sign_change_locations(f, x_lo, x_hi, grid_points).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64, s: f64) -> Params {
        Params::new(a, b, s).unwrap()
    }

    #[test]
    fn rho_examples() {
        let q = p(0.7, 2.2, 0.4);
        assert_eq!(rho(q, 0.0).unwrap(), 2.2 * 0.4);
        let v = rho(p(1.0, 1.0, 0.5), 2f64.ln()).unwrap();
        assert!((v - 0.5 * 2f64.powf(-1.5)).abs() < 1e-15);
        let v = rho(p(1.0, 2.0, 1.0), 1.0).unwrap();
        assert!((v - 2.0 * (-3.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rho_prime_examples() {
        assert!((rho_prime(p(1.0, 2.0, 0.5), 0.0).unwrap() + 2.25).abs() < 1e-14);
        let q = p(1.0, 2.0, 1.0);
        assert!((rho_prime(q, 0.0).unwrap() + 6.0).abs() < 1e-14);
        for &x in &[0.3f64, 2.0, 25.0] {
            let want = -6.0 * (-3.0 * x).exp();
            assert!((rho_prime(q, x).unwrap() - want).abs() <= 1e-14 * want.abs());
        }
    }

    #[test]
    fn rho_decays_at_large_x() {
        for q in [p(1.0, 0.5, 0.5), p(1.0, 2.5, 0.3), p(0.2, 3.0, 3.0)] {
            assert!(rho(q, 200.0).unwrap().abs() < 1e-60);
            assert!(rho(q, 2000.0).unwrap().abs() == 0.0 || rho(q, 2000.0).unwrap().abs() < 1e-300);
        }
    }

    #[test]
    fn tail_constant_cases() {
        let t = tail_constant(p(1.0, 1.0, 2.0));
        assert_eq!(t.kind, TailKind::Zero);
        let t = tail_constant(p(1.0, 1.0, 1.0));
        assert_eq!(t.kind, TailKind::Constant);
        assert!((t.value - 1.0).abs() < 1e-15);
        let t = tail_constant(p(1.0, 2.0, 2.0));
        assert!((t.value + 0.5).abs() < 1e-15);
        let t = tail_constant(p(1.0, 0.5, 0.5));
        assert_eq!(t.kind, TailKind::LinearInX);
        assert!((t.value - std::f64::consts::FRAC_2_PI).abs() < 1e-14);
        let t = tail_constant(p(1.0, 0.5, 2.0));
        // Γ(1.5)/(Γ(3)Γ(0.5)) = 1/4
        assert!((t.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tail_constant_matches_direct_evaluation() {
        for q in [p(1.0, 0.5, 2.0), p(0.3, 1.7, 0.6), p(1.0, 2.0, 2.0), p(1.0, 3.0, 3.0), p(2.0, 0.5, 0.5), p(1.0, 1.0, 1.0)] {
            let x = 40.0;
            let direct = rho(q, x).unwrap();
            let asym = rho_tail_asymptotic(q, x);
            let rel = (direct - asym).abs() / asym.abs();
            // next-order corrections are O(e^{-x}) or O(1/x) in the linear regime
            let tol = if tail_constant(q).kind == TailKind::LinearInX { 0.05 } else { 1e-9 };
            assert!(rel < tol, "{q}: {direct} vs {asym}");
        }
    }

    #[test]
    fn psi_examples() {
        assert!((psi_exact(p(1.0, 1.0, 1.0), 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(psi_exact(p(0.3, 2.0, 0.4), 0.0).unwrap(), 0.0);
        let q = p(0.7, 2.0, 0.4);
        for &u in &[0.5, 1.0, 5.0] {
            let e = psi_exact(q, u).unwrap();
            assert!((psi_exact(q.swapped(), u).unwrap() - e).abs() < 1e-14 * e);
            let quad = psi_quadrature(q, u, &QuadratureConfig::tight()).unwrap();
            assert!(((quad - e) / e).abs() < 1e-8, "u={u}: {quad} vs {e}");
        }
        assert_eq!(psi_quadrature(q, 0.0, &QuadratureConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn killing_rate_examples() {
        assert!((killing_rate(p(1.0, 1.0, 1.0)) - 0.5).abs() < 1e-15);
        assert!((killing_rate(p(2.0, 1.0, 1.0)) - 2.0 / 3.0).abs() < 1e-14);
        let q = p(0.6, 0.8, 2.5);
        let i = integrate_semiinf(|x| rho(q, x).unwrap(), &QuadratureConfig::tight()).unwrap();
        assert!((killing_rate(q) - (1.0 - i)).abs() < 1e-8);
    }

    #[test]
    fn spectral_m_examples() {
        for &x in &[0.1f64, 1.0, 4.0] {
            let want = 1.0 / x.exp_m1();
            assert!((gamma_spectral_m(1.0, 1.0, x).unwrap() - want).abs() < 1e-15 * want.max(1.0));
        }
        assert!((gamma_spectral_m(1.0, 1.0, 1e-6).unwrap() / 1e6 - 1.0).abs() < 1e-3);
        let v = gamma_spectral_m(2.0, 0.5, 1.0).unwrap();
        assert!((v - 0.021_182_359_513_052_96).abs() < 1e-16);
        assert!(gamma_spectral_m(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn drift_examples() {
        let cfg = QuadratureConfig::default();
        let g = crate::specfun::EULER_MASCHERONI;
        assert!((gamma_drift_c(1.0, 1.0, &cfg).unwrap() + g).abs() < 1e-8);
        assert!((gamma_drift_c(2.0, 1.0, &cfg).unwrap() - (1.0 - g)).abs() < 1e-8);
        let c = gamma_drift_c(1.7, 0.3, &cfg).unwrap();
        assert!((c - 0.3 * gamma_drift_c(1.7, 1.0, &cfg).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn exp_m1_plus_branches_meet() {
        let cases = [
            (0.0999999, 0.004_837_408_519_705_901),
            (0.1, 0.004_837_418_035_959_574),
            (1e-8, 4.999_999_983_333_334e-17),
            (3.0, 2.049_787_068_367_864),
        ];
        for (t, want) in cases {
            assert!((exp_m1_plus(t) / want - 1.0).abs() < 1e-14, "t={t}");
        }
    }

    #[test]
    fn sign_changes_of_simple_functions() {
        assert_eq!(count_sign_changes(|x| (x - 1.0) * (x - 3.0), 0.0, 10.0, 1000), 2);
        let r = sign_change_locations(|x| x - 2.5, 0.0, 10.0, 1000);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.5).abs() < 1e-12);
        assert_eq!(count_sign_changes(|x| (-x).exp(), 0.0, 10.0, 1000), 0);
    }
}
