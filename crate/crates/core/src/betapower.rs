//! Closed-form objects attached to β_{a,b}^{-s}: the density of β^{-s} − 1,
//! the auxiliary functions g and G′, Mellin moments, the Laplace transform
//! and the GB2 density.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{integrate_semiinf, ln_gamma_ratio, log_gamma, QuadratureConfig};

/// The triple (a, b, s) of β_{a,b}^{-s}; all strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    a: f64,
    b: f64,
    s: f64,
}

impl Params {
    pub fn new(a: f64, b: f64, s: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("s", s)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("parameter {name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { a, b, s })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// The triple with b and s exchanged.
    pub fn swapped(&self) -> Params {
        Params { a: self.a, b: self.s, s: self.b }
    }

    /// 2a + b + s + bs, the quantity compared with 1 in the self-decomposability test.
    pub fn sd_index(&self) -> f64 {
        2.0 * self.a + self.b + self.s + self.b * self.s
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(a={}, b={}, s={})", self.a, self.b, self.s)
    }
}

/// A point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// The point r·e^{iθ} − 1.
    pub fn from_polar_shifted(r: f64, theta: f64) -> Self {
        Self { re: r * theta.cos() - 1.0, im: r * theta.sin() }
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(z: ComplexPoint) -> Self {
        Complex64::new(z.re, z.im)
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    Ok(())
}

/// ln(e^y − 1) for y > 0 without overflow.
pub(crate) fn ln_expm1(y: f64) -> f64 {
    if y > 36.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

/// ln(1 + e^y).
pub(crate) fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

/// ln of Γ(a+b)/(sΓ(a)Γ(b)).
fn ln_norm(p: &Params) -> f64 {
    ln_gamma_ratio(p.a + p.b, p.a).expect("positive") - log_gamma(p.b).expect("positive") - p.s.ln()
}

/// ln f(x) for the density f of β^{-s} − 1.
pub fn ln_density_f(p: Params, x: f64) -> Result<f64> {
    check_x(x)?;
    let l1 = x.ln_1p();
    let y = l1 / p.s;
    Ok(ln_norm(&p) + ((1.0 - p.a - p.b) / p.s - 1.0) * l1 + (p.b - 1.0) * ln_expm1(y))
}

/// Density of β_{a,b}^{-s} − 1 on (0, ∞).
pub fn density_f(p: Params, x: f64) -> Result<f64> {
    Ok(ln_density_f(p, x)?.exp())
}

/// (ln f)′(x) = ((b−1)/((x+1)^{1/s} − 1) − a − s) / (s(x+1)).
pub fn log_density_slope(p: Params, x: f64) -> Result<f64> {
    check_x(x)?;
    let em = (x.ln_1p() / p.s).exp_m1();
    Ok(((p.b - 1.0) / em - p.a - p.s) / (p.s * (1.0 + x)))
}

/// g(x) = (sΓ(a)Γ(b)/Γ(a+b)) (x/s)^{1−b} f(x), normalized so that g(0+) = 1.
pub fn g_eval(p: Params, x: f64) -> Result<f64> {
    check_x(x)?;
    let l1 = x.ln_1p();
    let y = l1 / p.s;
    let singular = if p.b == 1.0 { 0.0 } else { (p.b - 1.0) * (ln_expm1(y) - (x / p.s).ln()) };
    Ok((singular + ((1.0 - p.a - p.b) / p.s - 1.0) * l1).exp())
}

/// Taylor coefficients at 0 of h(x) = 1/x − 1/(s(x+1)((x+1)^{1/s} − 1)).
fn h_series_coefficients(s: f64) -> [f64; 4] {
    let s2 = s * s;
    [
        (s + 1.0) / (2.0 * s),
        -(s + 1.0) * (5.0 * s + 1.0) / (12.0 * s2),
        (s + 1.0) * (3.0 * s + 1.0) / (8.0 * s2),
        -(s + 1.0) * (251.0 * s2 * s + 109.0 * s2 + s - 1.0) / (720.0 * s2 * s2),
    ]
}

/// Radius below which h is evaluated from its Taylor polynomial.
fn h_series_radius(s: f64) -> f64 {
    // poles of h sit at distance 2 sin(πs) from 0 when s < 1/2
    let r = if s < 0.5 { 2.0 * (std::f64::consts::PI * s).sin() } else { 1.0 };
    1e-3 * r
}

/// e^u − 1 for complex u without cancellation near 0.
fn cexpm1(u: Complex64) -> Complex64 {
    let (sin, cos) = u.im.sin_cos();
    let half = (0.5 * u.im).sin();
    let cos_m1 = -2.0 * half * half;
    Complex64::new(u.re.exp_m1() * cos + cos_m1, u.re.exp() * sin)
}

/// ln(1 + x) on the principal branch, accurate near x = 0.
fn cln1p(x: Complex64) -> Complex64 {
    let modulus = 0.5 * (2.0 * x.re + x.re * x.re + x.im * x.im).ln_1p();
    Complex64::new(modulus, x.im.atan2(1.0 + x.re))
}

fn h_complex(s: f64, x: Complex64) -> Complex64 {
    if x.norm() < h_series_radius(s) {
        let c = h_series_coefficients(s);
        return ((Complex64::from(c[3]) * x + c[2]) * x + c[1]) * x + c[0];
    }
    let em = cexpm1(cln1p(x) / s);
    x.inv() - (s * (Complex64::from(1.0) + x) * em).inv()
}

/// G′(x) for real x > −1 (the derivative of −ln g).
pub fn g_prime_real(p: Params, x: f64) -> Result<f64> {
    if !(x.is_finite() && x > -1.0) {
        return Err(Error::Domain(format!("G' requires x > -1, got {x}")));
    }
    let lead = (p.a + p.s) / (p.s * (1.0 + x));
    if p.b == 1.0 {
        return Ok(lead);
    }
    let h = if x.abs() < h_series_radius(p.s) {
        let c = h_series_coefficients(p.s);
        ((c[3] * x + c[2]) * x + c[1]) * x + c[0]
    } else {
        let em = (x.ln_1p() / p.s).exp_m1();
        1.0 / x - 1.0 / (p.s * (1.0 + x) * em)
    };
    Ok(lead + (p.b - 1.0) * h)
}

/// −G′(z) = (ln g)′(z) continued analytically to ℂ ∖ (−∞, −1].
pub fn g_prime_over_g(p: Params, z: ComplexPoint) -> Result<ComplexPoint> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("complex argument must be finite".into()));
    }
    if z.im == 0.0 && z.re <= -1.0 {
        return Err(Error::BranchCut { re: z.re, im: z.im });
    }
    let x = Complex64::from(z);
    let lead = Complex64::from(p.a + p.s) / (p.s * (Complex64::from(1.0) + x));
    let gp = if p.b == 1.0 { lead } else { lead + (p.b - 1.0) * h_complex(p.s, x) };
    Ok(ComplexPoint::from(-gp))
}

/// G′(0) = (s+a)/s + (b−1)(s+1)/(2s).
pub fn g_prime_at_zero(p: Params) -> f64 {
    (p.s + p.a) / p.s + (p.b - 1.0) * (p.s + 1.0) / (2.0 * p.s)
}

/// E[β_{a,b}^λ] = Γ(a+λ)Γ(a+b)/(Γ(a)Γ(a+b+λ)) for λ > −a.
pub fn mellin_moment(p: Params, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > -p.a) {
        return Err(Error::Domain(format!("Mellin moment requires lambda > -a = {}, got {lambda}", -p.a)));
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let l = ln_gamma_ratio(p.a + lambda, p.a)? + ln_gamma_ratio(p.a + p.b, p.a + p.b + lambda)?;
    Ok(l.exp())
}

/// Φ(λ) = E[exp(−λ(β^{-s} − 1))] by quadrature.
pub fn laplace_phi(p: Params, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let norm = ln_norm(&p);
    integrate_semiinf(|x| ln_density_with(&p, norm, x).map_or(f64::NAN, |l| (l - lambda * x).exp()), cfg)
}

/// Φ′(λ) = −∫ x e^{−λx} f(x) dx by quadrature.
pub fn laplace_phi_derivative(p: Params, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
    }
    let norm = ln_norm(&p);
    let v = integrate_semiinf(
        |x| ln_density_with(&p, norm, x).map_or(f64::NAN, |l| (l + x.ln() - lambda * x).exp()),
        cfg,
    )?;
    Ok(-v)
}

fn ln_density_with(p: &Params, norm: f64, x: f64) -> Option<f64> {
    if !(x > 0.0) {
        return None;
    }
    let l1 = x.ln_1p();
    Some(norm + ((1.0 - p.a - p.b) / p.s - 1.0) * l1 + (p.b - 1.0) * ln_expm1(l1 / p.s))
}

/// Density of the GB2 law of (β^{-1} − 1)^s.
pub fn gb2_density(p: Params, x: f64) -> Result<f64> {
    check_x(x)?;
    let lx = x.ln();
    Ok((ln_norm(&p) - (p.a + p.b) * softplus(lx / p.s) + (p.b / p.s - 1.0) * lx).exp())
}
