//! Monte-Carlo engines: direct draws of β^{-s}, jump draws from ν, the
//! perpetuity ∫₀^∞ e^{−(t − N_t)} dt integrated exactly between jumps, the
//! positive-jump perpetuity for s = 1, and a two-sample Kolmogorov–Smirnov test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use rayon::prelude::*;
use serde::Serialize;

use crate::betapower::Params;
use crate::error::{Error, Result};
use crate::levy::{jump_measure, rho_log, JumpMeasure};
use crate::specfun::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Paths stop once the exponent first exceeds this level; the neglected tail
    /// contributes a relative bias of at most e^{−stop_level}.
    pub stop_level: f64,
    pub max_events: u64,
}

impl SimConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, stop_level: 30.0, max_events: 1_000_000 }
    }

    pub fn with_stop_level(mut self, stop_level: f64) -> Self {
        self.stop_level = stop_level;
        self
    }

    pub fn with_max_events(mut self, max_events: u64) -> Self {
        self.max_events = max_events;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be positive".into()));
        }
        if !(self.stop_level.is_finite() && self.stop_level >= 10.0) {
            return Err(Error::InvalidConfig(format!("stop_level must be at least 10, got {}", self.stop_level)));
        }
        if self.max_events == 0 {
            return Err(Error::InvalidConfig("max_events must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    /// e^{−stop_level} times the empirical mean; zero for exact samplers.
    pub truncation_bias_bound: f64,
    pub generator_label: String,
    pub seed: u64,
}

impl SampleBatch {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        let n = self.values.len() as f64;
        let m = self.mean();
        let var = self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

fn replicate_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn run_replicates<F>(cfg: &SimConfig, draw: F) -> Result<Vec<f64>>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    cfg.validate()?;
    (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| draw(i, &mut replicate_rng(cfg.seed, i)))
        .collect()
}

/// β_{a,b}^{-s} from β = γ_a/(γ_a + γ_b).
pub fn sample_direct(p: Params, cfg: &SimConfig) -> Result<SampleBatch> {
    let ga = Gamma::new(p.a(), 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    let gb = Gamma::new(p.b(), 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    let values = run_replicates(cfg, |_, rng| {
        let x: f64 = ga.sample(rng);
        let y: f64 = gb.sample(rng);
        Ok((p.s() * (y / x).ln_1p()).exp())
    })?;
    Ok(SampleBatch { values, truncation_bias_bound: 0.0, generator_label: "direct".into(), seed: cfg.seed })
}

/// γ_a^{-s} for a Gamma(a, 1) variable γ_a.
pub fn sample_gamma_power(a: f64, s: f64, cfg: &SimConfig) -> Result<SampleBatch> {
    let ga = Gamma::new(a, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let values = run_replicates(cfg, |_, rng| {
        let x: f64 = ga.sample(rng);
        Ok((-s * x.ln()).exp())
    })?;
    Ok(SampleBatch { values, truncation_bias_bound: 0.0, generator_label: "gamma-power".into(), seed: cfg.seed })
}

const ENVELOPE: f64 = 1.05;
const TABLE_POINTS: usize = 2048;
const TABLE_DEPTH: f64 = 45.0;

/// Inverse of the cumulative hazard T(x) = −ln S(x) of the normalized jump law,
/// stored as a monotone cubic Hermite interpolant x(T) on a geometric x-grid.
#[derive(Debug, Clone)]
pub struct TabulatedJumps {
    jm: JumpMeasure,
    t: Vec<f64>,
    x: Vec<f64>,
    dxdt: Vec<f64>,
    squeeze: Vec<f64>,
}

impl TabulatedJumps {
    pub fn new(jm: &JumpMeasure) -> Result<Self> {
        let p = jm.params();
        let ln_bs = (p.b() * p.s()).ln();
        let hazard = |x: f64| -> Result<f64> { Ok(ln_bs - rho_log(p, x / p.s())?.ln_abs) };
        let mut x_hi = 40.0 * p.s() / (p.a() + p.b().min(p.s()));
        while hazard(x_hi)? < TABLE_DEPTH {
            x_hi *= 2.0;
        }
        let x_lo = x_hi * 1e-9;
        let ratio = (x_hi / x_lo).powf(1.0 / (TABLE_POINTS - 1) as f64);
        let mut t = Vec::with_capacity(TABLE_POINTS);
        let mut x = Vec::with_capacity(TABLE_POINTS);
        let mut dxdt = Vec::with_capacity(TABLE_POINTS);
        for i in 0..TABLE_POINTS {
            let xi = if i == TABLE_POINTS - 1 { x_hi } else { x_lo * ratio.powi(i as i32) };
            let ti = hazard(xi)?;
            let nu = jm.density(xi)?;
            if !(nu > 0.0) {
                return Err(Error::SamplerValidation(format!("jump density is not positive at x = {xi}")));
            }
            if let Some(&prev) = t.last() {
                if ti <= prev {
                    return Err(Error::SamplerValidation(format!("cumulative hazard is not increasing at x = {xi}")));
                }
            }
            // dx/dT = S/f with f = ν/b
            dxdt.push(p.b() * (-ti).exp() / nu);
            t.push(ti);
            x.push(xi);
        }
        // Fritsch–Carlson limiter
        for k in 0..TABLE_POINTS - 1 {
            let delta = (x[k + 1] - x[k]) / (t[k + 1] - t[k]);
            let (al, be) = (dxdt[k] / delta, dxdt[k + 1] / delta);
            let r = al * al + be * be;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                dxdt[k] = tau * al * delta;
                dxdt[k + 1] = tau * be * delta;
            }
        }
        let mut tab = Self { jm: jm.clone(), t, x, dxdt, squeeze: vec![0.0; TABLE_POINTS - 1] };
        for k in 0..TABLE_POINTS - 1 {
            let mut lo = f64::INFINITY;
            for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let tt = tab.t[k] + frac * (tab.t[k + 1] - tab.t[k]);
                let r = tab.acceptance_ratio(tt)?;
                if r > ENVELOPE {
                    return Err(Error::SamplerValidation(format!(
                        "target/proposal ratio {r} exceeds the envelope {ENVELOPE} at T = {tt}"
                    )));
                }
                lo = lo.min(r);
            }
            tab.squeeze[k] = lo - 1e-2;
        }
        Ok(tab)
    }

    /// x(T) and dx/dT of the proposal.
    fn interpolate(&self, tt: f64) -> (f64, f64, Option<usize>) {
        let n = self.t.len();
        if tt <= self.t[0] {
            let slope = self.x[0] / self.t[0];
            return (tt * slope, slope, None);
        }
        if tt >= self.t[n - 1] {
            let slope = self.dxdt[n - 1];
            return (self.x[n - 1] + (tt - self.t[n - 1]) * slope, slope, None);
        }
        let k = self.t.partition_point(|&v| v <= tt) - 1;
        let h = self.t[k + 1] - self.t[k];
        let u = (tt - self.t[k]) / h;
        let (x0, x1, m0, m1) = (self.x[k], self.x[k + 1], self.dxdt[k] * h, self.dxdt[k + 1] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        let val = (2.0 * u3 - 3.0 * u2 + 1.0) * x0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * x1 + (u3 - u2) * m1;
        let der = ((6.0 * u2 - 6.0 * u) * x0 + (3.0 * u2 - 4.0 * u + 1.0) * m0 + (-6.0 * u2 + 6.0 * u) * x1 + (3.0 * u2 - 2.0 * u) * m1) / h;
        (val, der, Some(k))
    }

    /// f(x(T))/q(x(T)) where q is the proposal density of x(T) with T ~ Exp(1).
    fn acceptance_ratio(&self, tt: f64) -> Result<f64> {
        let (x, der, _) = self.interpolate(tt);
        let nu = self.jm.density(x)?;
        Ok(nu / self.jm.total_rate() * der * tt.exp())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        loop {
            let tt = exp1(rng);
            let u: f64 = rng.random();
            let (x, _, cell) = self.interpolate(tt);
            if let Some(k) = cell {
                if u * ENVELOPE <= self.squeeze[k] {
                    return Ok(x);
                }
            }
            if u * ENVELOPE <= self.acceptance_ratio(tt)? {
                return Ok(x);
            }
        }
    }
}

/// Draws from the normalized jump law ν/ν(ℝ⁺).
#[derive(Debug, Clone)]
pub enum JumpSampler {
    Exponential { rate: f64 },
    /// Mixture of exponentials with probabilities (cumulative) and rates.
    HyperExp { cumulative: Vec<f64>, rates: Vec<f64> },
    Tabulated(Box<TabulatedJumps>),
}

impl JumpSampler {
    /// Closed form when ν is a non-negative mixture of exponentials, otherwise a tabulated inverse.
    pub fn new(jm: &JumpMeasure) -> Result<Self> {
        if let Some(mix) = jm.closed_form() {
            if mix.all_weights_nonnegative() {
                let live: Vec<_> = mix.terms().iter().filter(|t| t.weight > 0.0).collect();
                if live.len() == 1 {
                    return Ok(JumpSampler::Exponential { rate: live[0].rate });
                }
                let total: f64 = live.iter().map(|t| t.weight / t.rate).sum();
                let mut acc = 0.0;
                let cumulative = live
                    .iter()
                    .map(|t| {
                        acc += t.weight / t.rate / total;
                        acc
                    })
                    .collect();
                let rates = live.iter().map(|t| t.rate).collect();
                return Ok(JumpSampler::HyperExp { cumulative, rates });
            }
        }
        Self::tabulated(jm)
    }

    pub fn tabulated(jm: &JumpMeasure) -> Result<Self> {
        Ok(JumpSampler::Tabulated(Box::new(TabulatedJumps::new(jm)?)))
    }

    pub fn label(&self) -> &'static str {
        match self {
            JumpSampler::Exponential { .. } => "exponential",
            JumpSampler::HyperExp { .. } => "hyperexponential",
            JumpSampler::Tabulated(_) => "tabulated",
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match self {
            JumpSampler::Exponential { rate } => Ok(exp1(rng) / rate),
            JumpSampler::HyperExp { cumulative, rates } => {
                let u: f64 = rng.random();
                let k = cumulative.partition_point(|&c| c < u).min(rates.len() - 1);
                Ok(exp1(rng) / rates[k])
            }
            JumpSampler::Tabulated(tab) => tab.sample(rng),
        }
    }

    /// Compares the mean of 10⁴ draws with the quadrature mean of the jump law;
    /// fails beyond 5 standard errors.
    pub fn self_check(&self, jm: &JumpMeasure, seed: u64) -> Result<()> {
        const N: usize = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws = (0..N).map(|_| self.sample(&mut rng)).collect::<Result<Vec<_>>>()?;
        let m = draws.iter().sum::<f64>() / N as f64;
        let sd = (draws.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (N - 1) as f64).sqrt();
        let want = jm.mean_jump(&QuadratureConfig::default())?;
        let z = (m - want) / (sd / (N as f64).sqrt());
        if z.abs() > 5.0 {
            return Err(Error::SamplerValidation(format!(
                "{} sampler mean {m} differs from {want} by {z:.2} standard errors",
                self.label()
            )));
        }
        Ok(())
    }
}

/// One draw from the normalized jump law. Builds the sampler on every call;
/// hold a [`JumpSampler`] when drawing repeatedly.
pub fn sample_jump<R: Rng + ?Sized>(jm: &JumpMeasure, rng: &mut R) -> Result<f64> {
    JumpSampler::new(jm)?.sample(rng)
}

/// ∫₀^∞ e^{−(t − N_t)} dt with N compound Poisson of rate b and jump law ν/b.
pub fn simulate_perpetuity(p: Params, cfg: &SimConfig) -> Result<SampleBatch> {
    let jm = jump_measure(p)?;
    let sampler = JumpSampler::new(&jm)?;
    if let JumpSampler::Tabulated(_) = sampler {
        sampler.self_check(&jm, cfg.seed)?;
    }
    simulate_perpetuity_with(p, &sampler, cfg)
}

/// As [`simulate_perpetuity`] with a caller-supplied jump sampler.
pub fn simulate_perpetuity_with(p: Params, sampler: &JumpSampler, cfg: &SimConfig) -> Result<SampleBatch> {
    let rate = p.b();
    let level = cfg.stop_level;
    let values = run_replicates(cfg, |i, rng| {
        let mut z = 0.0f64;
        let mut integral = 0.0;
        let mut events = 0u64;
        loop {
            let gap = exp1(rng) / rate;
            if z + gap >= level {
                integral += (-z).exp() - (-level).exp();
                return Ok(integral);
            }
            integral += (-z).exp() * -(-gap).exp_m1();
            z += gap - sampler.sample(rng)?;
            events += 1;
            if events >= cfg.max_events {
                return Err(Error::MaxEvents { replicate: i, max_events: cfg.max_events });
            }
        }
    })?;
    let label = format!("perpetuity:{}", sampler.label());
    Ok(finish_truncated(values, label, cfg))
}

fn finish_truncated(values: Vec<f64>, generator_label: String, cfg: &SimConfig) -> SampleBatch {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    SampleBatch { truncation_bias_bound: (-cfg.stop_level).exp() * mean, values, generator_label, seed: cfg.seed }
}

/// 1 + ∫₀^∞ e^{−(N_t − t)} dt with N compound Poisson of rate a+b−1 and Exp(b−1) jumps,
/// which has the law of β_{a,b}^{-1}.
pub fn simulate_gp_perpetuity(a: f64, b: f64, cfg: &SimConfig) -> Result<SampleBatch> {
    if !(a > 0.0 && a.is_finite()) || !(b > 1.0 && b.is_finite()) {
        return Err(Error::Domain(format!("need a > 0 and b > 1, got a={a}, b={b}")));
    }
    let rate = a + b - 1.0;
    let jump_rate = b - 1.0;
    let level = cfg.stop_level;
    let values = run_replicates(cfg, |i, rng| {
        let mut z = 0.0f64;
        let mut integral = 0.0;
        let mut events = 0u64;
        loop {
            let gap = exp1(rng) / rate;
            integral += (-z).exp() * gap.exp_m1();
            z += exp1(rng) / jump_rate - gap;
            events += 1;
            if z >= level {
                return Ok(1.0 + integral);
            }
            if events >= cfg.max_events {
                return Err(Error::MaxEvents { replicate: i, max_events: cfg.max_events });
            }
        }
    })?;
    Ok(finish_truncated(values, "gp-perpetuity".into(), cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n1: usize,
    pub n2: usize,
    /// 1% critical value 1.628·sqrt((n1+n2)/(n1·n2)).
    pub critical_001: f64,
}

impl KsResult {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_001
    }
}

/// Sup-distance between the empirical distribution functions of two samples.
pub fn ks_statistic(x: &[f64], y: &[f64]) -> f64 {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    d
}

pub fn ks_two_sample(x: &SampleBatch, y: &SampleBatch) -> Result<KsResult> {
    let (n1, n2) = (x.values.len(), y.values.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::Domain("KS test needs two non-empty samples".into()));
    }
    let critical_001 = 1.628 * ((n1 + n2) as f64 / (n1 as f64 * n2 as f64)).sqrt();
    Ok(KsResult { statistic: ks_statistic(&x.values, &y.values), n1, n2, critical_001 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64, s: f64) -> Params {
        Params::new(a, b, s).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(10, 1).validate().is_ok());
        assert!(SimConfig::new(0, 1).validate().is_err());
        assert!(SimConfig::new(10, 1).with_stop_level(5.0).validate().is_err());
    }

    #[test]
    fn direct_samples_exceed_one_and_are_reproducible() {
        let cfg = SimConfig::new(2000, 11);
        let b1 = sample_direct(p(1.0, 1.0, 0.5), &cfg).unwrap();
        let b2 = sample_direct(p(1.0, 1.0, 0.5), &cfg).unwrap();
        assert_eq!(b1, b2);
        assert!(b1.values.iter().all(|&v| v >= 1.0));
    }

    #[test]
    fn zero_jump_path_is_exact() {
        // a jump law concentrated near zero leaves 1 − e^{−L}
        let cfg = SimConfig::new(1, 3).with_stop_level(12.0);
        let sampler = JumpSampler::Exponential { rate: 1e300 };
        let batch = simulate_perpetuity_with(p(1.0, 1e-300, 1.0), &sampler, &cfg).unwrap();
        assert_eq!(batch.values[0], 1.0 - (-12.0f64).exp());
    }

    #[test]
    fn max_events_is_reported() {
        let cfg = SimConfig::new(4, 3).with_max_events(2);
        let jm = jump_measure(p(1.0, 2.0, 1.0)).unwrap();
        let sampler = JumpSampler::new(&jm).unwrap();
        assert!(matches!(simulate_perpetuity_with(p(1.0, 2.0, 1.0), &sampler, &cfg), Err(Error::MaxEvents { .. })));
        assert!(matches!(simulate_gp_perpetuity(1.0, 2.0, &cfg), Err(Error::MaxEvents { .. })));
    }

    #[test]
    fn sampler_kinds() {
        let jm = jump_measure(p(1.0, 2.0, 1.0)).unwrap();
        assert!(matches!(JumpSampler::new(&jm).unwrap(), JumpSampler::Exponential { rate } if rate == 3.0));
        let jm = jump_measure(p(0.5, 1.0, 0.3)).unwrap();
        assert_eq!(JumpSampler::new(&jm).unwrap().label(), "exponential");
        let jm = jump_measure(p(1.0, 2.0, 0.5)).unwrap();
        assert_eq!(JumpSampler::new(&jm).unwrap().label(), "hyperexponential");
        let jm = jump_measure(p(1.0, 0.5, 0.5)).unwrap();
        assert_eq!(JumpSampler::new(&jm).unwrap().label(), "tabulated");
    }

    #[test]
    fn ks_basics() {
        let x = SampleBatch { values: vec![1.0, 2.0, 3.0], truncation_bias_bound: 0.0, generator_label: "t".into(), seed: 0 };
        let r = ks_two_sample(&x, &x).unwrap();
        assert_eq!(r.statistic, 0.0);
        let y = SampleBatch { values: vec![4.0, 5.0], ..x.clone() };
        assert_eq!(ks_two_sample(&x, &y).unwrap().statistic, 1.0);
        assert!((r.critical_001 - 1.628 * (6.0f64 / 9.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tabulated_sampler_matches_survival() {
        for q in [p(1.0, 2.0, 0.5), p(1.0, 0.5, 0.5), p(0.3, 0.6, 0.9)] {
            let jm = jump_measure(q).unwrap();
            let sampler = JumpSampler::tabulated(&jm).unwrap();
            sampler.self_check(&jm, 5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let mut draws: Vec<f64> = (0..20_000).map(|_| sampler.sample(&mut rng).unwrap()).collect();
            draws.sort_by(f64::total_cmp);
            for k in 1..=10 {
                let x = draws[k * draws.len() / 11];
                let cdf = 1.0 - jm.survival(x).unwrap();
                assert!((cdf - k as f64 / 11.0).abs() < 0.01, "{q}: x={x} cdf={cdf}");
            }
        }
    }
}
