//! Identity and limit checks: each pair of independently computable quantities
//! that should agree becomes a named case with a measured discrepancy and a tolerance.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::betapower::{g_prime_over_g, laplace_phi, laplace_phi_derivative, ln_density_f, mellin_moment, ComplexPoint, Params};
use crate::classify::{classify, natural_number, Status};
use crate::error::Result;
use crate::levy::{
    exp_m1_plus, gamma_drift_c, gamma_power_exponent, gamma_power_limit_exponent, gamma_spectral_m, psi_exact,
    psi_quadrature_with, rescaled_exponent_with, rho,
};
use crate::sim::{ks_two_sample, sample_direct, sample_gamma_power, SampleBatch, SimConfig};
use crate::specfun::{alternating_fd_probe, default_probe_step, digamma, integrate_semiinf, log_gamma, QuadratureConfig, Sign};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseResult {
    pub fn new(label: impl Into<String>, discrepancy: f64, tolerance: f64) -> Self {
        // NaN never passes
        let passed = discrepancy <= tolerance;
        Self { label: label.into(), discrepancy, tolerance, passed, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn failed(label: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self { label: label.into(), discrepancy: f64::INFINITY, tolerance: 0.0, passed: false, note: Some(err.to_string()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub params: Vec<Params>,
}

impl VerificationReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.into(), cases: Vec::new(), params: Vec::new() }
    }

    /// True iff there is at least one case and every case passed.
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, case: CaseResult) {
        self.cases.push(case);
    }

    fn push_result(&mut self, label: String, r: Result<CaseResult>) {
        self.cases.push(r.unwrap_or_else(|e| CaseResult::failed(label, e)));
    }

    fn add_params(&mut self, p: Params) {
        if !self.params.contains(&p) {
            self.params.push(p);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub quadrature: QuadratureConfig,
    pub seed: u64,
    pub n_samples: usize,
    /// Relative distortion applied to ρ wherever a suite integrates it; zero for real runs.
    pub rho_perturbation: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { quadrature: QuadratureConfig::tight(), seed: 20240917, n_samples: 100_000, rho_perturbation: 0.0 }
    }
}

impl VerifyConfig {
    fn rho(&self, p: Params) -> impl Fn(f64) -> Result<f64> + '_ {
        move |x| Ok(rho(p, x)? * (1.0 + self.rho_perturbation))
    }
}

pub const SUITES: [&str; 7] = ["psi", "symmetry", "malmsten", "limits", "stieltjes", "thorin", "probes"];

fn p(a: f64, b: f64, s: f64) -> Params {
    Params::new(a, b, s).expect("fixed parameters are valid")
}

/// 30 reproducible triples with b ∧ s ≤ 1.
pub fn psi_parameter_grid(seed: u64) -> Vec<Params> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_uniform = |lo: f64, hi: f64| (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp();
    (0..30)
        .map(|i| {
            let a = log_uniform(0.1, 5.0);
            let small = log_uniform(0.1, 1.0);
            let large = log_uniform(0.1, 5.0);
            if i % 2 == 0 {
                p(a, small, large)
            } else {
                p(a, large, small)
            }
        })
        .collect()
}

pub fn verify_psi(params: &[Params], us: &[f64], cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("psi");
    let cases: Vec<(String, Result<CaseResult>)> = params
        .par_iter()
        .flat_map_iter(|&q| us.iter().map(move |&u| (q, u)))
        .map(|(q, u)| {
            let label = format!("psi {q} u={u}");
            let r = (|| {
                let exact = psi_exact(q, u)?;
                let quad = psi_quadrature_with(cfg.rho(q), u, &cfg.quadrature)?;
                let d = if exact == 0.0 { quad.abs() } else { ((exact - quad) / exact).abs() };
                Ok(CaseResult::new(label.clone(), d, 1e-8))
            })();
            (label, r)
        })
        .collect();
    for (label, r) in cases {
        rep.push_result(label, r);
    }
    for &q in params {
        rep.add_params(q);
    }
    rep
}

pub fn symmetry_pairs() -> Vec<Params> {
    vec![
        p(1.0, 0.5, 2.0),
        p(0.3, 0.7, 1.3),
        p(2.0, 1.5, 0.4),
        p(0.5, 3.0, 0.7),
        p(1.0, 0.2, 5.0),
        p(0.1, 2.5, 1.7),
        p(1.2, 0.9, 0.9),
        p(0.7, 4.0, 2.2),
        p(3.0, 0.35, 1.1),
        p(0.05, 1.8, 0.6),
    ]
}

pub fn verify_symmetry(params: &[Params], xs: &[f64], cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("symmetry");
    for &q in params {
        let label = format!("rho symmetry {q}");
        let r = (|| {
            let mut worst = 0.0f64;
            for &x in xs {
                let left = cfg.rho(q)(x)?;
                let right = rho(q.swapped(), x)?;
                worst = worst.max((left - right).abs() / (1.0 + left.abs()));
            }
            Ok(CaseResult::new(label.clone(), worst, 1e-10))
        })();
        rep.push_result(label, r);
        rep.add_params(q);
    }
    rep
}

/// ln Γ(a+sλ) − ln Γ(a) against c_{a,s}λ − ∫(1−e^{−λx}−λx) m_{a,s}(x)/x dx.
pub fn malmsten_gamma_sides(a: f64, s: f64, lambda: f64, quad: &QuadratureConfig) -> Result<(f64, f64)> {
    let lhs = log_gamma(a + s * lambda)? - log_gamma(a)?;
    let c = gamma_drift_c(a, s, quad)?;
    let integral = integrate_semiinf(
        |x| gamma_spectral_m(a, s, x).map_or(f64::NAN, |m| -exp_m1_plus(lambda * x) * m / x),
        quad,
    )?;
    Ok((lhs, c * lambda - integral))
}

/// ln E[β^λ] against −∫(1−e^{−λx})(e^{−ax}−e^{−(a+b)x})/(x(1−e^{−x})) dx.
pub fn malmsten_beta_sides(a: f64, b: f64, lambda: f64, quad: &QuadratureConfig) -> Result<(f64, f64)> {
    let lhs = mellin_moment(p(a, b, 1.0), lambda)?.ln();
    let integral = integrate_semiinf(
        |x| {
            if x < 1e-8 {
                return lambda * b;
            }
            -(-lambda * x).exp_m1() * (-a * x).exp() * -(-b * x).exp_m1() / (x * -(-x).exp_m1())
        },
        quad,
    )?;
    Ok((lhs, -integral))
}

pub fn verify_malmsten(gamma_grid: &[(f64, f64)], beta_grid: &[(f64, f64)], lambdas: &[f64], cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("malmsten");
    for &(a, s) in gamma_grid {
        for &l in lambdas {
            let label = format!("gamma a={a} s={s} lambda={l}");
            let r = malmsten_gamma_sides(a, s, l, &cfg.quadrature).map(|(x, y)| CaseResult::new(label.clone(), (x - y).abs(), 1e-6));
            rep.push_result(label, r);
        }
    }
    for &(a, b) in beta_grid {
        for &l in lambdas {
            let label = format!("beta a={a} b={b} lambda={l}");
            let r = malmsten_beta_sides(a, b, l, &cfg.quadrature).map(|(x, y)| CaseResult::new(label.clone(), (x - y).abs(), 1e-6));
            rep.push_result(label, r);
        }
        rep.add_params(p(a, b, 1.0));
    }
    // the drift constant against the digamma relation c_{a,s} = sψ(a)
    for &(a, s) in gamma_grid {
        let label = format!("drift c a={a} s={s}");
        let r = (|| Ok(CaseResult::new(label.clone(), (gamma_drift_c(a, s, &cfg.quadrature)? - s * digamma(a)?).abs(), 1e-8)))();
        rep.push_result(label, r);
    }
    rep
}

fn trend_violations(errors: &[f64]) -> f64 {
    errors.windows(2).filter(|w| !(w[1] < w[0])).count() as f64
}

fn ks_case(label: &str, x: &SampleBatch, y: &SampleBatch) -> Result<CaseResult> {
    let ks = ks_two_sample(x, y)?;
    Ok(CaseResult::new(label, ks.statistic, ks.critical_001))
}

pub fn verify_limits(cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("limits");
    let n = cfg.n_samples;

    // s^{-1}(β^{-s} − 1) → −ln β as s → 0
    let label = "logB s=1e-3 (a,b)=(1,1)".to_string();
    let r = (|| {
        let s = 1e-3;
        let mut scaled = sample_direct(p(1.0, 1.0, s), &SimConfig::new(n, cfg.seed))?;
        scaled.values.iter_mut().for_each(|v| *v = (*v - 1.0) / s);
        let mut neg_log = sample_direct(p(1.0, 1.0, 1.0), &SimConfig::new(n, cfg.seed ^ 0x5eed))?;
        neg_log.values.iter_mut().for_each(|v| *v = v.ln());
        ks_case(&label, &scaled, &neg_log)
    })();
    rep.push_result(label, r);
    rep.add_params(p(1.0, 1.0, 1e-3));

    // b^{-s} β_{a,b}^{-s} → γ_a^{-s} as b → ∞
    let label = "BG b=1e3 (a,s)=(1,0.5)".to_string();
    let r = (|| {
        let (a, b, s) = (1.0, 1e3, 0.5);
        let mut scaled = sample_direct(p(a, b, s), &SimConfig::new(n, cfg.seed))?;
        scaled.values.iter_mut().for_each(|v| *v *= b.powf(-s));
        let gp = sample_gamma_power(a, s, &SimConfig::new(n, cfg.seed ^ 0xbeef))?;
        ks_case(&label, &scaled, &gp)
    })();
    rep.push_result(label, r);
    rep.add_params(p(1.0, 1e3, 0.5));

    let bs = [10.0, 100.0, 1000.0];
    let a = 1.0;
    // Ψ_{a,b,1}(λ) → λ(a+λ)
    for &l in &[0.5, 1.0, 2.0] {
        let label = format!("Dufresne lambda={l}");
        let r = (|| {
            let errs = bs
                .iter()
                .map(|&b| Ok((rescaled_exponent_with(cfg.rho(p(a, b, 1.0)), p(a, b, 1.0), l, &cfg.quadrature)? / (l * (a + l)) - 1.0).abs()))
                .collect::<Result<Vec<f64>>>()?;
            let trend = trend_violations(&errs);
            Ok(CaseResult::new(label.clone(), errs[2] + trend, 0.02).with_note(format!("errors along b: {errs:?}")))
        })();
        rep.push_result(label, r);
    }
    // s < 1: Ψ_{a,b,s}(λ) → the Gamma-power limit exponent
    let s = 0.5;
    for &l in &[0.5, 1.0, 2.0] {
        let label = format!("s<1 limit s={s} lambda={l}");
        let r = (|| {
            let target = gamma_power_limit_exponent(a, s, l, &cfg.quadrature)?;
            let errs = bs
                .iter()
                .map(|&b| Ok((rescaled_exponent_with(cfg.rho(p(a, b, s)), p(a, b, s), l, &cfg.quadrature)? / target - 1.0).abs()))
                .collect::<Result<Vec<f64>>>()?;
            let trend = trend_violations(&errs);
            Ok(CaseResult::new(label.clone(), errs[2] + trend, 0.02).with_note(format!("errors along b: {errs:?}")))
        })();
        rep.push_result(label, r);

        let label = format!("limit exponent closed form s={s} lambda={l}");
        let r = (|| {
            let quad = gamma_power_limit_exponent(a, s, l, &cfg.quadrature)?;
            let closed = gamma_power_exponent(a, s, l)?;
            Ok(CaseResult::new(label.clone(), ((quad - closed) / closed).abs(), 1e-6))
        })();
        rep.push_result(label, r);
    }
    // b^s(1 − ∫ρ) = Γ(a+s)Γ(a+b)b^s/(Γ(a)Γ(a+b+s)) at every b
    for &b in &bs {
        let q = p(a, b, s);
        let label = format!("drift identity {q}");
        let r = (|| {
            let integral = integrate_semiinf(|x| cfg.rho(q)(x).unwrap_or(f64::NAN), &cfg.quadrature)?;
            let quad = b.powf(s) * (1.0 - integral);
            let ln_exact = log_gamma(a + s)? + log_gamma(a + b)? - log_gamma(a)? - log_gamma(a + b + s)? + s * b.ln();
            Ok(CaseResult::new(label.clone(), (quad - ln_exact.exp()).abs(), 1e-6))
        })();
        rep.push_result(label, r);
        rep.add_params(q);
    }
    rep
}

pub fn hcm_region_triples() -> Vec<Params> {
    vec![
        p(1.0, 0.5, 0.5),
        p(1.0, 2.0, 3.0),
        p(1.0, 2.0, 2.0),
        p(0.3, 1.0, 0.7),
        p(0.5, 3.0, 1.0),
        p(0.1, 0.5, 0.6),
        p(2.0, 0.3, 0.9),
        p(0.05, 0.5, 0.5),
        p(1.0, 5.0, 1.2),
        p(0.2, 0.9, 0.55),
    ]
}

/// Largest Im G′(re^{iθ} − 1) over r geometric in [1e-2, 1e2] and θ = π(j + ½)/n.
pub fn max_im_g_prime(q: Params, n: usize) -> Result<(f64, ComplexPoint)> {
    let mut best = (f64::NEG_INFINITY, ComplexPoint::new(0.0, 0.0));
    for i in 0..n {
        let r = 1e-2 * 1e4f64.powf(i as f64 / (n - 1) as f64);
        for j in 0..n {
            let theta = PI * (j as f64 + 0.5) / n as f64;
            let z = ComplexPoint::from_polar_shifted(r, theta);
            let im = -g_prime_over_g(q, z)?.im;
            if im > best.0 {
                best = (im, z);
            }
        }
    }
    Ok(best)
}

pub fn stieltjes_sign_scan(q: Params, n: usize, expect_stieltjes: bool) -> CaseResult {
    let label = format!("stieltjes {q}");
    match max_im_g_prime(q, n) {
        Ok((m, z)) => {
            let note = format!("max Im G' = {m:e} at {} + {}i", z.re, z.im);
            if expect_stieltjes {
                CaseResult::new(label, m, 1e-9).with_note(note)
            } else {
                CaseResult::new(label, 1e-6 - m, 0.0).with_note(note)
            }
        }
        Err(e) => CaseResult::failed(label, e),
    }
}

pub fn verify_stieltjes(hcm: &[Params], witnesses: &[Params]) -> VerificationReport {
    let mut rep = VerificationReport::new("stieltjes");
    for &q in hcm {
        rep.push(stieltjes_sign_scan(q, 50, true));
        rep.add_params(q);
    }
    for &q in witnesses {
        rep.push(stieltjes_sign_scan(q, 50, false));
        rep.add_params(q);
    }
    rep
}

/// −λΦ′(λ)/Φ(λ) for the Laplace transform Φ of β^{-s} − 1.
pub fn thorin_ratio(q: Params, lambda: f64, quad: &QuadratureConfig) -> Result<f64> {
    Ok(-lambda * laplace_phi_derivative(q, lambda, quad)? / laplace_phi(q, lambda, quad)?)
}

pub fn thorin_mass_probe(q: Params, lambdas: &[f64], cfg: &VerifyConfig) -> Vec<CaseResult> {
    let b = q.b();
    let c = (1.0 - q.sd_index()) / (2.0 * q.s());
    let ks = match lambdas.iter().map(|&l| thorin_ratio(q, l, &cfg.quadrature)).collect::<Result<Vec<f64>>>() {
        Ok(v) => v,
        Err(e) => return vec![CaseResult::failed(format!("thorin {q}"), e)],
    };
    let errs: Vec<f64> = ks.iter().map(|k| (k - b).abs() / b).collect();
    let last = lambdas.len() - 1;
    let second = lambdas[last] * (ks[last] - b);
    vec![
        CaseResult::new(format!("thorin first order {q}"), errs[last], 0.05).with_note(format!("-lambda Phi'/Phi = {ks:?}")),
        CaseResult::new(format!("thorin trend {q}"), trend_violations(&errs), 0.0),
        CaseResult::new(format!("thorin second order {q}"), ((second - b * c) / (b * c)).abs(), 0.1)
            .with_note(format!("lambda(-lambda Phi'/Phi - b) = {second}, target {}", b * c)),
    ]
}

pub fn verify_thorin(params: &[Params], lambdas: &[f64], cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("thorin");
    for &q in params {
        for c in thorin_mass_probe(q, lambdas, cfg) {
            rep.push(c);
        }
        rep.add_params(q);
    }
    rep
}

/// First grid point where an alternating difference of order ≤ `order` is negative.
fn first_violation<F: Fn(f64) -> f64>(f: &F, x0s: &[f64], step: impl Fn(f64) -> f64, order: usize) -> Option<(f64, usize)> {
    x0s.iter().find_map(|&x0| {
        alternating_fd_probe(f, x0, step(x0), order).iter().position(|s| *s == Sign::Negative).map(|n| (x0, n))
    })
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// CM probe of the density f up to order 6 on 40 points of [1e-3, 50].
pub fn cm_probe(q: Params) -> Option<(f64, usize)> {
    let f = |x: f64| ln_density_f(q, x).map_or(f64::NAN, f64::exp);
    first_violation(&f, &geometric(1e-3, 50.0, 40), default_probe_step, 6)
}

/// HCM probe: w ↦ f(uv)f(u/v)/f(u)² with w = v + 1/v, up to order 4, for u ∈ {0.5, 1, 2}.
pub fn hcm_probe(q: Params) -> Option<(f64, usize)> {
    let w0s = geometric(2.0001, 200.0, 60);
    for &u in &[0.5, 1.0, 2.0] {
        let Ok(lu) = ln_density_f(q, u) else { return Some((f64::NAN, 0)) };
        let h = |w: f64| {
            let v = 0.5 * (w + (w * w - 4.0).sqrt());
            match (ln_density_f(q, u * v), ln_density_f(q, u / v)) {
                (Ok(x), Ok(y)) => (x + y - 2.0 * lu).exp(),
                _ => f64::NAN,
            }
        };
        if let Some(v) = first_violation(&h, &w0s, |w0| (1e-2 * (w0 - 2.0)).max(1e-3), 4) {
            return Some(v);
        }
    }
    None
}

/// (e^{−ax} − e^{−(a+b)x})/(1 − e^{−x}), completely monotone exactly when b is a positive integer.
pub fn integer_kernel(a: f64, b: f64, x: f64) -> f64 {
    (-a * x).exp() * -(-b * x).exp_m1() / -(-x).exp_m1()
}

pub fn kernel_probe(a: f64, b: f64) -> Option<(f64, usize)> {
    first_violation(&|x| integer_kernel(a, b, x), &geometric(1e-3, 50.0, 40), default_probe_step, 6)
}

fn probe_case(label: String, violation: Option<(f64, usize)>, expect_pass: bool) -> CaseResult {
    let found = violation.is_some();
    let note = match violation {
        Some((x, n)) => format!("negative difference of order {n} at {x}"),
        None => "no violation found (evidence, not proof)".to_string(),
    };
    let agree = found != expect_pass;
    CaseResult::new(label, if agree { 0.0 } else { 1.0 }, 0.0)
        .with_note(format!("expected {}; {note}", if expect_pass { "pass" } else { "violation" }))
}

pub fn cm_witnesses() -> Vec<Params> {
    vec![p(1.0, 0.5, 2.0), p(0.3, 1.0, 0.7), p(2.0, 0.2, 0.3), p(1.0, 2.0, 0.5), p(1.0, 1.2, 1.0), p(0.5, 3.0, 0.7)]
}

pub fn hcm_witnesses() -> Vec<Params> {
    vec![p(0.1, 0.2, 0.3), p(0.05, 0.2, 0.6)]
}

pub const KERNEL_BS: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];

pub fn monotonicity_probes(q: Params) -> Vec<CaseResult> {
    let r = classify(q);
    vec![
        probe_case(format!("cm {q}"), cm_probe(q), r.m_class.status == Status::Member),
        probe_case(format!("hcm {q}"), hcm_probe(q), r.hcm_class.status == Status::Member),
    ]
}

pub fn verify_probes() -> VerificationReport {
    let mut rep = VerificationReport::new("probes");
    for q in cm_witnesses() {
        rep.push(probe_case(format!("cm {q}"), cm_probe(q), classify(q).m_class.status == Status::Member));
        rep.add_params(q);
    }
    for q in hcm_region_triples().into_iter().chain(hcm_witnesses()) {
        rep.push(probe_case(format!("hcm {q}"), hcm_probe(q), classify(q).hcm_class.status == Status::Member));
        rep.add_params(q);
    }
    for b in KERNEL_BS {
        rep.push(probe_case(format!("integer kernel a=1 b={b}"), kernel_probe(1.0, b), natural_number(b).is_some()));
    }
    rep
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<VerificationReport> {
    let rep = match name {
        "psi" => verify_psi(&psi_parameter_grid(cfg.seed), &[0.25, 1.0, 4.0], cfg),
        "symmetry" => verify_symmetry(&symmetry_pairs(), &[0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0], cfg),
        "malmsten" => verify_malmsten(
            &[(1.0, 1.0), (1.0, 0.5), (2.0, 0.3), (0.5, 2.0)],
            &[(2.0, 1.0), (1.0, 1.0), (0.5, 2.5), (3.0, 0.4)],
            &[0.5, 1.0, 2.0],
            cfg,
        ),
        "limits" => verify_limits(cfg),
        "stieltjes" => verify_stieltjes(&hcm_region_triples(), &[p(0.1, 2.0, 0.3)]),
        "thorin" => verify_thorin(&[p(1.0, 1.0, 1.0), p(1.0, 2.0, 1.0)], &[1e2, 1e3, 1e4], cfg),
        "probes" => verify_probes(),
        _ => return None,
    };
    Some(rep)
}

/// Every suite, in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<VerificationReport> {
    SUITES.par_iter().map(|s| run_suite(s, cfg).expect("known suite")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        let cfg = VerifyConfig::default();
        let rep = verify_psi(&[p(1.0, 1.0, 1.0), p(0.7, 2.0, 0.4)], &[0.0, 1.0, 5.0], &cfg);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        assert_eq!(rep.cases.len(), 6);
    }

    #[test]
    fn perturbation_is_detected() {
        let cfg = VerifyConfig { rho_perturbation: 1e-4, ..VerifyConfig::default() };
        assert!(!verify_psi(&[p(1.0, 1.0, 1.0)], &[1.0], &cfg).passed());
        assert!(!verify_symmetry(&[p(1.0, 0.5, 2.0)], &[0.1, 1.0], &cfg).passed());
    }

    #[test]
    fn malmsten_examples() {
        let q = QuadratureConfig::tight();
        let (l, r) = malmsten_gamma_sides(1.0, 1.0, 1.0, &q).unwrap();
        assert!(l.abs() < 1e-15 && r.abs() < 1e-6);
        let (l, r) = malmsten_beta_sides(2.0, 1.0, 1.0, &q).unwrap();
        assert!((l - (2.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!((l - r).abs() < 1e-6);
        let (l, r) = malmsten_gamma_sides(1.0, 0.5, 2.0, &q).unwrap();
        assert!((l - r).abs() < 1e-6);
    }

    #[test]
    fn empty_report_does_not_pass() {
        assert!(!VerificationReport::new("x").passed());
        assert!(run_suite("nope", &VerifyConfig::default()).is_none());
    }

    #[test]
    fn nan_discrepancy_fails() {
        assert!(!CaseResult::new("x", f64::NAN, 1.0).passed);
    }
}
