use serde::Serialize;

use super::{rho, rho_prime};
use crate::betapower::Params;
use crate::classify::{in_elp_region, natural_number};
use crate::error::{Error, Result};
use crate::specfun::{integrate_semiinf, QuadratureConfig};

/// One term w·e^{−r x} of a hyper-exponential density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpTerm {
    pub weight: f64,
    pub rate: f64,
}

/// Σ w_k e^{−r_k x}; weights may be negative, rates are distinct and positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperExpMixture {
    terms: Vec<ExpTerm>,
}

impl HyperExpMixture {
    pub fn new(terms: Vec<ExpTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("a mixture needs at least one term".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if !(t.rate.is_finite() && t.rate > 0.0 && t.weight.is_finite()) {
                return Err(Error::Domain(format!("invalid term {t:?}")));
            }
            if terms[..i].iter().any(|u| u.rate == t.rate) {
                return Err(Error::Domain(format!("repeated rate {}", t.rate)));
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn density(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.weight * (-t.rate * x).exp()).sum()
    }

    /// ∫₀^∞ Σ w_k e^{−r_k x} dx.
    pub fn total_mass(&self) -> f64 {
        self.terms.iter().map(|t| t.weight / t.rate).sum()
    }

    /// Mean of the normalized density.
    pub fn mean(&self) -> f64 {
        self.terms.iter().map(|t| t.weight / (t.rate * t.rate)).sum::<f64>() / self.total_mass()
    }

    pub fn all_weights_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.weight >= 0.0)
    }
}

fn c_coefficient(k: u64, n: u64, s: f64) -> f64 {
    (0..n).filter(|&p| p != k).map(|p| 1.0 - s / (p as f64 - k as f64)).product()
}

/// ν_{a,n,s} = Σ_k (1+(a+k)/s) c_{k,n,s} e^{−(1+(a+k)/s)x}, c_{k,n,s} = ∏_{p≠k}(1 − s/(p−k)).
/// With `allow_negative` an s > 1 is accepted (the density then takes negative values).
pub fn hyperexp_nu_integer_b(a: f64, n: u64, s: f64, allow_negative: bool) -> Result<HyperExpMixture> {
    if !(a > 0.0 && a.is_finite() && s > 0.0 && s.is_finite()) || n == 0 {
        return Err(Error::Domain(format!("need a > 0, s > 0, n >= 1; got a={a}, n={n}, s={s}")));
    }
    if s > 1.0 && n > 1 {
        if !allow_negative {
            return Err(Error::Domain(format!("s = {s} > 1 gives a signed density for n = {n}")));
        }
        log::warn!("hyper-exponential density with n={n}, s={s} > 1 takes negative values");
    }
    let terms = (0..n)
        .map(|k| {
            let rate = 1.0 + (a + k as f64) / s;
            ExpTerm { weight: rate * c_coefficient(k, n, s), rate }
        })
        .collect();
    HyperExpMixture::new(terms)
}

/// ν_{a,b,n} = Σ_k b n^{−2}(a+b+k) c_{k,n,b} e^{−(a+b+k)x/n}.
pub fn hyperexp_nu_integer_s(a: f64, b: f64, n: u64, allow_negative: bool) -> Result<HyperExpMixture> {
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) || n == 0 {
        return Err(Error::Domain(format!("need a > 0, b > 0, n >= 1; got a={a}, b={b}, n={n}")));
    }
    if b > 1.0 && n > 1 {
        if !allow_negative {
            return Err(Error::Domain(format!("b = {b} > 1 gives a signed density for n = {n}")));
        }
        log::warn!("hyper-exponential density with n={n}, b={b} > 1 takes negative values");
    }
    let nf = n as f64;
    let terms = (0..n)
        .map(|k| {
            let r = a + b + k as f64;
            ExpTerm { weight: b * r * c_coefficient(k, n, b) / (nf * nf), rate: r / nf }
        })
        .collect();
    HyperExpMixture::new(terms)
}

/// The Lévy measure ν(dx) = −s^{−2}ρ′(x/s)dx of the compound Poisson process
/// whose perpetuity is β^{-s} − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpMeasure {
    params: Params,
    closed_form: Option<HyperExpMixture>,
}

pub fn jump_measure(p: Params) -> Result<JumpMeasure> {
    if !in_elp_region(p) {
        return Err(Error::NotInElp { a: p.a(), b: p.b(), s: p.s() });
    }
    let closed_form = if let Some(n) = natural_number(p.b()) {
        Some(hyperexp_nu_integer_b(p.a(), n, p.s(), false)?)
    } else if let Some(n) = natural_number(p.s()) {
        Some(hyperexp_nu_integer_s(p.a(), p.b(), n, false)?)
    } else {
        None
    };
    Ok(JumpMeasure { params: p, closed_form })
}

impl JumpMeasure {
    pub fn params(&self) -> Params {
        self.params
    }

    /// Jumps per unit time: ρ(0)/s = b.
    pub fn total_rate(&self) -> f64 {
        self.params.b()
    }

    pub fn closed_form(&self) -> Option<&HyperExpMixture> {
        self.closed_form.as_ref()
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!("x must be non-negative, got {x}")));
        }
        match &self.closed_form {
            Some(m) => Ok(m.density(x)),
            None => self.series_density(x),
        }
    }

    /// −s^{−2}ρ′(x/s) from the hypergeometric representation, ignoring any closed form.
    pub fn series_density(&self, x: f64) -> Result<f64> {
        let s = self.params.s();
        Ok(-rho_prime(self.params, x / s)? / (s * s))
    }

    /// ν((x, ∞))/b = ρ(x/s)/(bs), the survival function of a single jump.
    pub fn survival(&self, x: f64) -> Result<f64> {
        let p = self.params;
        Ok(rho(p, x / p.s())? / (p.b() * p.s()))
    }

    /// ∫ν by quadrature of the density.
    pub fn total_rate_quadrature(&self, cfg: &QuadratureConfig) -> Result<f64> {
        integrate_semiinf(|x| self.density(x).unwrap_or(f64::NAN), cfg)
    }

    /// Mean jump size, ∫S(x)dx = (bs)^{−1}∫ρ(x/s)dx.
    pub fn mean_jump(&self, cfg: &QuadratureConfig) -> Result<f64> {
        integrate_semiinf(|x| self.survival(x).unwrap_or(f64::NAN), cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64, s: f64) -> Params {
        Params::new(a, b, s).unwrap()
    }

    #[test]
    fn integer_b_examples() {
        let m = hyperexp_nu_integer_b(1.0, 2, 0.5, false).unwrap();
        assert_eq!(m.terms().len(), 2);
        assert_eq!(m.terms()[0], ExpTerm { weight: 1.5, rate: 3.0 });
        assert_eq!(m.terms()[1], ExpTerm { weight: 7.5, rate: 5.0 });
        assert!((m.density(0.0) - 9.0).abs() < 1e-14);
        let m = hyperexp_nu_integer_b(0.7, 1, 3.0, false).unwrap();
        assert_eq!(m.terms().len(), 1);
        assert!((m.terms()[0].rate - (1.0 + 0.7 / 3.0)).abs() < 1e-15);
        assert!(hyperexp_nu_integer_b(1.0, 2, 1.5, false).is_err());
        let signed = hyperexp_nu_integer_b(1.0, 2, 1.5, true).unwrap();
        let neg = (0..2000).map(|i| i as f64 * 0.01).any(|x| signed.density(x) < 0.0);
        assert!(neg);
    }

    #[test]
    fn integer_s_examples() {
        let m = hyperexp_nu_integer_s(1.3, 0.4, 1, false).unwrap();
        assert!((m.density(0.2) - 0.4 * 1.7 * (-1.7f64 * 0.2).exp()).abs() < 1e-15);
        for (a, b, n) in [(1.0, 0.5, 2), (0.4, 0.9, 3), (2.0, 0.2, 5)] {
            let m = hyperexp_nu_integer_s(a, b, n, false).unwrap();
            assert!((m.total_mass() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_forms_match_series() {
        for q in [p(1.0, 2.0, 0.5), p(0.3, 3.0, 0.8), p(1.0, 0.5, 2.0), p(0.6, 0.9, 3.0), p(1.0, 1.0, 2.5)] {
            let jm = jump_measure(q).unwrap();
            assert!(jm.closed_form().is_some());
            for i in 0..200 {
                let x = 0.05 * i as f64;
                let c = jm.density(x).unwrap();
                let s = jm.series_density(x).unwrap();
                assert!((c - s).abs() < 1e-8, "{q} x={x}: {c} vs {s}");
            }
        }
    }

    #[test]
    fn jump_measure_examples() {
        let jm = jump_measure(p(0.8, 1.7, 1.0)).unwrap();
        for &x in &[0.0f64, 0.4, 3.0] {
            let want = 1.7 * 2.5 * (-2.5 * x).exp();
            assert!((jm.density(x).unwrap() - want).abs() < 1e-13);
        }
        let jm = jump_measure(p(1.0, 2.0, 0.5)).unwrap();
        assert_eq!(jm.total_rate(), 2.0);
        let q = jm.total_rate_quadrature(&QuadratureConfig::default()).unwrap();
        assert!((q - 2.0).abs() < 1e-6);
        let jm = jump_measure(p(0.4, 0.7, 0.45)).unwrap();
        assert!(jm.closed_form().is_none());
        let q = jm.total_rate_quadrature(&QuadratureConfig::default()).unwrap();
        assert!((q - 0.7).abs() < 1e-6);
        assert!(matches!(jump_measure(p(1.0, 2.0, 3.0)), Err(Error::NotInElp { .. })));
        assert!(matches!(jump_measure(p(0.01, 0.2, 0.3)), Err(Error::NotInElp { .. })));
    }
}
