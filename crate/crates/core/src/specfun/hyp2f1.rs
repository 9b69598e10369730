//! Gauss hypergeometric function ₂F₁(α, β; γ; z) on 0 <= z <= 1.
//!
//! Values are carried as sign and log-magnitude so that large parameters
//! (β^{-s} with b in the thousands) neither overflow nor underflow.

use super::gamma::ln_gamma_signed;
use crate::error::{Error, Result};

/// Controls the raw power series and the switch to the 1−z transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    pub rel_term_tol: f64,
    pub max_terms: usize,
    pub z_switch: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self { rel_term_tol: 1e-16, max_terms: 1_000_000, z_switch: 0.9 }
    }
}

impl SeriesPolicy {
    pub fn new(rel_term_tol: f64, max_terms: usize, z_switch: f64) -> Result<Self> {
        if !(rel_term_tol > 0.0 && rel_term_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("rel_term_tol must lie in (0,1), got {rel_term_tol}")));
        }
        if max_terms < 100 {
            return Err(Error::InvalidConfig(format!("max_terms must be at least 100, got {max_terms}")));
        }
        if !(0.5..1.0).contains(&z_switch) {
            return Err(Error::InvalidConfig(format!("z_switch must lie in [0.5,1), got {z_switch}")));
        }
        Ok(Self { rel_term_tol, max_terms, z_switch })
    }
}

/// A real number stored as sign * exp(ln_abs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0.0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1.0, ln_abs: 0.0 };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self { sign: v.signum(), ln_abs: v.abs().ln() }
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn mul(self, other: SignedLog) -> SignedLog {
        if self.sign == 0.0 || other.sign == 0.0 {
            return Self::ZERO;
        }
        SignedLog { sign: self.sign * other.sign, ln_abs: self.ln_abs + other.ln_abs }
    }

    pub fn scale_ln(self, ln_factor: f64) -> SignedLog {
        if self.sign == 0.0 {
            return self;
        }
        SignedLog { sign: self.sign, ln_abs: self.ln_abs + ln_factor }
    }

    pub fn scale(self, factor: f64) -> SignedLog {
        self.mul(SignedLog::from_value(factor))
    }

    pub fn add(self, other: SignedLog) -> SignedLog {
        Self::sum(&[self, other])
    }

    /// Weighted sum Σ w_k x_k evaluated relative to the largest magnitude.
    pub fn weighted_sum(terms: &[(f64, SignedLog)]) -> SignedLog {
        let top = terms
            .iter()
            .filter(|(w, x)| *w != 0.0 && x.sign != 0.0)
            .map(|(_, x)| x.ln_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let mut acc = 0.0;
        for (w, x) in terms {
            if x.sign != 0.0 {
                acc += w * x.sign * (x.ln_abs - top).exp();
            }
        }
        SignedLog::from_value(acc).scale_ln(top)
    }

    pub fn sum(terms: &[SignedLog]) -> SignedLog {
        let weighted: Vec<(f64, SignedLog)> = terms.iter().map(|t| (1.0, *t)).collect();
        Self::weighted_sum(&weighted)
    }
}

fn nonpositive_integer(v: f64) -> Option<u64> {
    if v > 0.0 {
        return None;
    }
    let r = v.round();
    if (v - r).abs() <= 1e-12 * v.abs().max(1.0) {
        Some((-r) as u64)
    } else {
        None
    }
}

fn reciprocal_gamma(x: f64) -> SignedLog {
    match ln_gamma_signed(x) {
        Some((l, s)) => SignedLog { sign: s, ln_abs: -l },
        None => SignedLog::ZERO,
    }
}

fn gamma_signed(x: f64) -> Result<SignedLog> {
    match ln_gamma_signed(x) {
        Some((l, s)) => Ok(SignedLog { sign: s, ln_abs: l }),
        None => Err(Error::Degenerate(format!("Gamma pole at {x}"))),
    }
}

const RESCALE: f64 = 1e280;

/// Power series with compensated summation. `terminating` disables the stop rule.
fn power_series(a: f64, b: f64, c: f64, z: f64, policy: &SeriesPolicy, terminating: bool) -> Result<SignedLog> {
    let ln_rescale = RESCALE.ln();
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut scale = 0.0f64;
    let mut small = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        if term == 0.0 {
            return Ok(SignedLog::from_value(sum).scale_ln(scale));
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() > RESCALE || sum.abs() > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            comp /= RESCALE;
            scale += ln_rescale;
        }
        if !terminating {
            if term.abs() < policy.rel_term_tol * sum.abs() {
                small += 1;
                if small >= 3 {
                    return Ok(SignedLog::from_value(sum).scale_ln(scale));
                }
            } else {
                small = 0;
            }
        }
    }
    Err(Error::NonConvergence {
        terms: policy.max_terms,
        estimate: SignedLog::from_value(sum).scale_ln(scale).value(),
    })
}

/// Half-width of the window around integer γ−α−β inside which the
/// connection formula is replaced by interpolation in β.
const DEGENERATE_GAP: f64 = 1e-4;
const INTERP_STEP: f64 = 2e-4;

/// ₂F₁ as a signed logarithm. `ln_w` must equal ln(1−z); passing it separately
/// keeps full precision when 1−z is known exactly (e.g. e^{-x}).
pub fn hyp2f1_log(a: f64, b: f64, c: f64, z: f64, ln_w: f64, policy: &SeriesPolicy) -> Result<SignedLog> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::Domain("hyp2f1 requires finite arguments".into()));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("hyp2f1 argument must lie in [0,1], got {z}")));
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::Domain(format!("gamma = {c} is a non-positive integer")));
    }
    if z == 0.0 {
        return Ok(SignedLog::ONE);
    }
    let ta = nonpositive_integer(a);
    let tb = nonpositive_integer(b);
    if ta.is_some() || tb.is_some() {
        let (m, other) = match (ta, tb) {
            (Some(ma), Some(mb)) if mb < ma => (mb, a),
            (Some(ma), _) => (ma, b),
            (None, Some(mb)) => (mb, a),
            _ => unreachable!(),
        };
        let mut pol = *policy;
        pol.max_terms = pol.max_terms.max(m as usize + 2);
        return power_series(-(m as f64), other, c, z, &pol, true);
    }
    if ln_w == f64::NEG_INFINITY {
        let m = c - a - b;
        if m <= 0.0 {
            return Err(Error::Domain(format!("hyp2f1 diverges at z = 1 when gamma-alpha-beta = {m} <= 0")));
        }
        return gauss_sum(a, b, c);
    }
    if z < policy.z_switch {
        return power_series(a, b, c, z, policy, false);
    }
    let m = c - a - b;
    let e = m - m.round();
    if e.abs() >= DEGENERATE_GAP {
        return connection(a, b, c, z, ln_w, policy);
    }
    // integer gap with a terminating F(γ−α, γ−β; γ; z): Euler's transformation
    if nonpositive_integer(c - a).is_some() || nonpositive_integer(c - b).is_some() {
        let inner = hyp2f1_log(c - a, c - b, c, z, ln_w, policy)?;
        return Ok(inner.scale_ln(m * ln_w));
    }
    // cubic interpolation in β across the degenerate point
    let k = m.round();
    let nodes = [-2.0 * INTERP_STEP, -INTERP_STEP, INTERP_STEP, 2.0 * INTERP_STEP];
    let mut vals = [SignedLog::ZERO; 4];
    for (v, t) in vals.iter_mut().zip(nodes) {
        let bk = c - a - (k + t);
        *v = connection(a, bk, c, z, ln_w, policy)?;
    }
    let mut weighted = Vec::with_capacity(4);
    for i in 0..4 {
        let mut w = 1.0;
        for j in 0..4 {
            if i != j {
                w *= (e - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        weighted.push((w, vals[i]));
    }
    Ok(SignedLog::weighted_sum(&weighted))
}

fn gauss_sum(a: f64, b: f64, c: f64) -> Result<SignedLog> {
    let num = gamma_signed(c)?.mul(gamma_signed(c - a - b)?);
    Ok(num.mul(reciprocal_gamma(c - a)).mul(reciprocal_gamma(c - b)))
}

/// The 1−z connection formula, valid when γ−α−β is not an integer.
fn connection(a: f64, b: f64, c: f64, z: f64, ln_w: f64, policy: &SeriesPolicy) -> Result<SignedLog> {
    let m = c - a - b;
    let w = ln_w.exp();
    let ln_z = z.ln();
    let gc = gamma_signed(c)?;
    let first = gc
        .mul(gamma_signed(m)?)
        .mul(reciprocal_gamma(c - a))
        .mul(reciprocal_gamma(c - b));
    let first = if first.sign == 0.0 {
        SignedLog::ZERO
    } else {
        first.mul(hyp2f1_log(a, b, 1.0 - m, w, ln_z, policy)?)
    };
    let second = gc
        .mul(gamma_signed(-m)?)
        .mul(reciprocal_gamma(a))
        .mul(reciprocal_gamma(b));
    let second = if second.sign == 0.0 {
        SignedLog::ZERO
    } else {
        second
            .scale_ln(m * ln_w)
            .mul(hyp2f1_log(c - a, c - b, m + 1.0, w, ln_z, policy)?)
    };
    Ok(first.add(second))
}

fn finite_value(v: SignedLog) -> Result<f64> {
    let x = v.value();
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Overflow { ln_abs: v.ln_abs })
    }
}

/// ₂F₁(α, β; γ; z) with the default series policy.
pub fn hyp2f1(alpha: f64, beta: f64, gamma: f64, z: f64) -> Result<f64> {
    hyp2f1_with(alpha, beta, gamma, z, &SeriesPolicy::default())
}

pub fn hyp2f1_with(alpha: f64, beta: f64, gamma: f64, z: f64, policy: &SeriesPolicy) -> Result<f64> {
    finite_value(hyp2f1_log(alpha, beta, gamma, z, (-z).ln_1p(), policy)?)
}

/// d/dz ₂F₁(α, β; γ; z) = (αβ/γ) ₂F₁(α+1, β+1; γ+1; z), as a signed logarithm.
pub fn hyp2f1_dz_log(a: f64, b: f64, c: f64, z: f64, ln_w: f64, policy: &SeriesPolicy) -> Result<SignedLog> {
    let k = a * b / c;
    if k == 0.0 {
        return Ok(SignedLog::ZERO);
    }
    Ok(hyp2f1_log(a + 1.0, b + 1.0, c + 1.0, z, ln_w, policy)?.scale(k))
}

/// d/dz ₂F₁(α, β; γ; z).
pub fn hyp2f1_dz(alpha: f64, beta: f64, gamma: f64, z: f64) -> Result<f64> {
    let policy = SeriesPolicy::default();
    finite_value(hyp2f1_dz_log(alpha, beta, gamma, z, (-z).ln_1p(), &policy)?)
}
