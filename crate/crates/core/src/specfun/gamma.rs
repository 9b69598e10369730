//! Log-Gamma, Gamma ratios and digamma for real arguments.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Below this argument the Stirling series is not used directly.
const STIRLING_MIN: f64 = 12.0;

// zeta(k) - 1 for k = 2..=30
const ZETA_MINUS_ONE: [f64; 29] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
];

// B_{2k} / (2k (2k-1)), k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k), k = 1..=7
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("{what} requires a positive finite argument, got {x}")));
    }
    Ok(())
}

/// ln Γ(1+t) for |t| <= 1/2 from the zeta series.
fn ln_gamma_1p(t: f64) -> f64 {
    let mut sum = 0.0;
    // tk runs through (-t)^k
    let mut tk = -t;
    for (i, z) in ZETA_MINUS_ONE.iter().enumerate() {
        tk *= -t;
        sum += z * tk / (i + 2) as f64;
    }
    -t.ln_1p() + t * (1.0 - EULER_GAMMA) + sum
}

fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

/// Shift `x` upward until it reaches the Stirling range.
/// Returns the shifted argument and ln of the product x(x+1)...(x+n-1).
fn shift_up(x: f64) -> (f64, f64) {
    let mut y = x;
    let mut prod = 1.0;
    while y < STIRLING_MIN {
        prod *= y;
        y += 1.0;
    }
    (y, prod.ln())
}

/// Natural log of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x, "log_gamma")?;
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_1p(x) - x.ln()
    } else if x <= 1.5 {
        ln_gamma_1p(x - 1.0)
    } else if x <= 2.5 {
        let t = x - 2.0;
        t.ln_1p() + ln_gamma_1p(t)
    } else if x < STIRLING_MIN {
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        let t = y - 2.0;
        prod.ln() + t.ln_1p() + ln_gamma_1p(t)
    } else {
        (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x)
    }
}

/// ln Γ(p) − ln Γ(q), computed without forming either log-Gamma when both are large.
pub fn ln_gamma_ratio(p: f64, q: f64) -> Result<f64> {
    check_positive(p, "gamma_ratio")?;
    check_positive(q, "gamma_ratio")?;
    if p == q {
        return Ok(0.0);
    }
    let (ps, lp) = shift_up(p);
    let (qs, lq) = shift_up(q);
    let d = ps - qs;
    let main = d * ps.ln() + (qs - 0.5) * (d / qs).ln_1p() - d;
    Ok(main + stirling_tail(ps) - stirling_tail(qs) - lp + lq)
}

/// Γ(p)/Γ(q).
pub fn gamma_ratio(p: f64, q: f64) -> Result<f64> {
    let l = ln_gamma_ratio(p, q)?;
    let v = l.exp();
    if !v.is_finite() {
        return Err(Error::Overflow { ln_abs: l });
    }
    Ok(v)
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let v = (std::f64::consts::PI * r).sin();
    if (n as i64).rem_euclid(2) == 0 {
        v
    } else {
        -v
    }
}

/// ln|Γ(x)| and the sign of Γ(x) for any real x; `None` at the poles.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if !x.is_finite() {
        return None;
    }
    if x > 0.0 {
        return Some((log_gamma_unchecked(x), 1.0));
    }
    if x == x.round() {
        return None;
    }
    let sp = sin_pi(x);
    let lg = LN_PI - sp.abs().ln() - log_gamma_unchecked(1.0 - x);
    Some((lg, sp.signum()))
}

/// Digamma ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma")?;
    let mut y = x;
    let mut acc = 0.0;
    while y < STIRLING_MIN {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let r2 = 1.0 / (y * y);
    let mut tail = 0.0;
    for c in DIGAMMA_ASYMPTOTIC.iter().rev() {
        tail = tail * r2 + c;
    }
    Ok(acc + y.ln() - 0.5 / y - tail * r2)
}

/// Euler's constant, exposed for the Malmstén checks.
pub const EULER_MASCHERONI: f64 = EULER_GAMMA;
