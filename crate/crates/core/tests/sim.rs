use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use betadiv_core::betapower::mellin_moment;
use betadiv_core::levy::jump_measure;
use betadiv_core::sim::{
    ks_statistic, ks_two_sample, sample_direct, simulate_gp_perpetuity, simulate_perpetuity, simulate_perpetuity_with,
    JumpSampler, SampleBatch, SimConfig,
};
use betadiv_core::Params;

fn p(a: f64, b: f64, s: f64) -> Params {
    Params::new(a, b, s).unwrap()
}

fn within_3se(batch: &SampleBatch, want: f64) -> bool {
    ((batch.mean() - want) / batch.standard_error()).abs() < 3.0
}

#[test]
fn direct_means() {
    let b = sample_direct(p(2.0, 1.0, 1.0), &SimConfig::new(100_000, 1)).unwrap();
    assert!(within_3se(&b, 2.0), "{}", b.mean());
    let b = sample_direct(p(1.0, 1.0, 0.5), &SimConfig::new(100_000, 2)).unwrap();
    assert!(within_3se(&b, 2.0), "{}", b.mean());
    assert_eq!(b.generator_label, "direct");
    assert!(b.values.iter().all(|&v| v >= 1.0));
}

#[test]
fn gp_perpetuity_mean() {
    // E[β_{2,3}^{-1}] = (a+b−1)/(a−1)
    let b = simulate_gp_perpetuity(2.0, 3.0, &SimConfig::new(100_000, 3)).unwrap();
    assert!(within_3se(&b, 4.0), "{}", b.mean());
    assert!(simulate_gp_perpetuity(1.0, 0.5, &SimConfig::new(10, 3)).is_err());
}

#[test]
fn perpetuity_reproducible_per_seed() {
    let q = p(1.0, 2.0, 1.0);
    let x = simulate_perpetuity(q, &SimConfig::new(5_000, 42)).unwrap();
    let y = simulate_perpetuity(q, &SimConfig::new(5_000, 42)).unwrap();
    let z = simulate_perpetuity(q, &SimConfig::new(5_000, 43)).unwrap();
    assert_eq!(x.values, y.values);
    assert_ne!(x.values, z.values);
    assert_eq!(x.seed, 42);
    assert!(x.generator_label.starts_with("perpetuity"));
}

#[test]
fn perpetuity_samples_positive_with_small_truncation_bias() {
    let q = p(1.0, 1.0, 0.5);
    let x = simulate_perpetuity(q, &SimConfig::new(20_000, 5)).unwrap();
    assert!(x.values.iter().all(|&v| v > 0.0));
    assert!(x.truncation_bias_bound > 0.0 && x.truncation_bias_bound < 1e-6);
}

#[test]
fn stop_level_insensitive() {
    let q = p(0.5, 3.0, 0.7);
    let lo = simulate_perpetuity(q, &SimConfig::new(50_000, 6).with_stop_level(20.0)).unwrap();
    let hi = simulate_perpetuity(q, &SimConfig::new(50_000, 7).with_stop_level(40.0)).unwrap();
    let ks = ks_two_sample(&lo, &hi).unwrap();
    assert!(ks.passes(), "{ks:?}");
    assert!(lo.truncation_bias_bound > hi.truncation_bias_bound);
    assert!(simulate_perpetuity(q, &SimConfig::new(10, 7).with_stop_level(5.0)).is_err());
}

#[test]
fn tabulated_sampler_agrees_with_closed_form() {
    // b = 2 has a hyper-exponential closed form; force the tabulated path as well
    let q = p(1.0, 2.0, 0.5);
    let jm = jump_measure(q).unwrap();
    let closed = JumpSampler::new(&jm).unwrap();
    let tab = JumpSampler::tabulated(&jm).unwrap();
    assert_eq!(closed.label(), "hyperexponential");
    assert_eq!(tab.label(), "tabulated");
    tab.self_check(&jm, 1).unwrap();
    let cfg = SimConfig::new(60_000, 8);
    let x = simulate_perpetuity_with(q, &closed, &cfg).unwrap();
    let y = simulate_perpetuity_with(q, &tab, &SimConfig::new(60_000, 9)).unwrap();
    assert!(ks_two_sample(&x, &y).unwrap().passes());
    let direct = sample_direct(q, &SimConfig::new(60_000, 10)).unwrap();
    assert!(ks_two_sample(&y, &direct).unwrap().passes());
    assert!(within_3se(&y, mellin_moment(q, -0.5).unwrap()));
}

#[test]
fn jumps_with_unit_s_are_exponential() {
    for (a, b) in [(1.0, 2.0), (0.3, 0.4)] {
        let jm = jump_measure(p(a, b, 1.0)).unwrap();
        let sampler = JumpSampler::new(&jm).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let draws: Vec<f64> = (0..20_000).map(|_| sampler.sample(&mut rng).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let reference: Vec<f64> = (0..20_000).map(|_| -(1.0 - rng.random::<f64>()).ln() / (a + b)).collect();
        assert!(ks_statistic(&draws, &reference) < 1.628 * (2.0 / 20_000f64).sqrt());
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        assert!((mean * (a + b) - 1.0).abs() < 0.03, "mean {mean}");
    }
}

#[test]
fn ks_detects_different_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let e1: Vec<f64> = (0..20_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let e2: Vec<f64> = (0..20_000).map(|_| -(1.0 - rng.random::<f64>()).ln() / 2.0).collect();
    let crit = 1.628 * (2.0 / 20_000f64).sqrt();
    assert!(ks_statistic(&e1, &e2) > crit);
    let e3: Vec<f64> = (0..20_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    assert!(ks_statistic(&e1, &e3) < crit);
}
