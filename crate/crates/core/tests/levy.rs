use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use betadiv_core::classify::in_elp_region;
use betadiv_core::levy::{
    count_sign_changes, hyperexp_nu_integer_s, jump_measure, killing_rate, psi_exact, psi_quadrature, rescaled_exponent,
    rescaled_exponent_exact, rho, rho_prime, rho_prime_at_zero, rho_tail_asymptotic, tail_constant, TailKind,
};
use betadiv_core::specfun::{integrate_semiinf, QuadratureConfig};
use betadiv_core::Params;

fn p(a: f64, b: f64, s: f64) -> Params {
    Params::new(a, b, s).unwrap()
}

fn random_triples(seed: u64, n: usize) -> Vec<Params> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut d = || 10f64.powf(rng.random_range(-1.0..0.7));
            p(d(), d(), d())
        })
        .collect()
}

#[test]
fn rho_prime_matches_central_difference() {
    for q in random_triples(11, 25) {
        for x in [0.05, 0.4, 1.5, 4.0] {
            let h = 1e-5;
            let fd = (rho(q, x + h).unwrap() - rho(q, x - h).unwrap()) / (2.0 * h);
            let d = rho_prime(q, x).unwrap();
            assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "{q} x={x}: {d} vs {fd}");
        }
        assert_relative_eq!(rho_prime(q, 0.0).unwrap(), rho_prime_at_zero(q), max_relative = 1e-10, epsilon = 1e-12);
    }
}

#[test]
fn psi_identity_and_killing_rate() {
    let cfg = QuadratureConfig::tight();
    assert_relative_eq!(psi_exact(p(1.0, 1.0, 1.0), 1.0).unwrap(), 2.0 / 3.0, max_relative = 1e-14);
    for q in random_triples(12, 20).into_iter().filter(|q| q.b().min(q.s()) <= 1.0) {
        for u in [0.5, 3.0] {
            assert_relative_eq!(psi_quadrature(q, u, &cfg).unwrap(), psi_exact(q, u).unwrap(), max_relative = 1e-8);
        }
        let mass = integrate_semiinf(|x| rho(q, x).unwrap(), &cfg).unwrap();
        assert!((killing_rate(q) - (1.0 - mass)).abs() <= 1e-8, "{q}");
        assert!(killing_rate(q) > 0.0 && killing_rate(q) < 1.0);
    }
}

#[test]
fn rescaled_exponent_consistent() {
    let cfg = QuadratureConfig::tight();
    for q in [p(1.0, 2.0, 0.5), p(0.4, 0.7, 1.3), p(2.0, 10.0, 1.0)] {
        for l in [0.5, 2.0] {
            assert_relative_eq!(rescaled_exponent(q, l, &cfg).unwrap(), rescaled_exponent_exact(q, l).unwrap(), max_relative = 1e-8);
        }
    }
}

#[test]
fn nonnegative_spectral_function_when_min_at_most_one() {
    for q in random_triples(13, 40).into_iter().filter(|q| q.b().min(q.s()) <= 1.0) {
        assert_eq!(count_sign_changes(|x| rho(q, x).unwrap(), 1e-6, 40.0, 2000), 0, "{q}");
    }
}

#[test]
fn sign_changes_when_min_exceeds_one() {
    for q in [p(1.0, 2.0, 3.0), p(0.5, 1.5, 1.5), p(2.0, 4.0, 2.5), p(1.0, 3.0, 3.0)] {
        let c = count_sign_changes(|x| rho(q, x).unwrap(), 1e-6, 60.0, 4000);
        assert!(c >= 1, "{q}: {c}");
    }
}

#[test]
fn tail_behaviour() {
    for q in [p(1.0, 0.5, 2.0), p(0.7, 2.5, 0.3), p(1.0, 2.0, 2.0), p(1.0, 0.5, 0.5)] {
        let x = 40.0;
        let ratio = rho(q, x).unwrap() / rho_tail_asymptotic(q, x);
        assert!((ratio - 1.0).abs() < 0.05, "{q}: ratio {ratio}");
    }
    assert_eq!(tail_constant(p(1.0, 2.0, 2.0)).value, -0.5);
    assert_eq!(tail_constant(p(1.0, 0.5, 0.5)).kind, TailKind::LinearInX);
    assert_eq!(tail_constant(p(1.0, 1.0, 2.5)).kind, TailKind::Zero);
}

#[test]
fn jump_measure_is_a_positive_measure_of_mass_b() {
    let cfg = QuadratureConfig::tight();
    for q in random_triples(14, 40).into_iter().filter(|&q| in_elp_region(q)).take(12) {
        let jm = jump_measure(q).unwrap();
        assert!((jm.total_rate_quadrature(&cfg).unwrap() - q.b()).abs() <= 1e-8, "{q}");
        for i in 0..200 {
            let x = 1e-4 * 1.07f64.powi(i);
            assert!(jm.density(x).unwrap() >= 0.0, "{q} at {x}");
        }
        assert!(jm.survival(0.0).unwrap() == 1.0);
    }
    assert!(jump_measure(p(0.1, 0.2, 0.3)).is_err());
    assert!(jump_measure(p(1.0, 2.0, 3.0)).is_err());
}

#[test]
fn integer_s_mixture_matches_series() {
    let mix = hyperexp_nu_integer_s(1.0, 0.5, 2, false).unwrap();
    assert_eq!(mix.terms().len(), 2);
    assert!((mix.total_mass() - 0.5).abs() <= 1e-8);
    let jm = jump_measure(p(1.0, 0.5, 2.0)).unwrap();
    for i in 0..100 {
        let x = 0.03 * i as f64;
        assert!((mix.density(x) - jm.series_density(x).unwrap()).abs() <= 1e-8, "x={x}");
    }
}
