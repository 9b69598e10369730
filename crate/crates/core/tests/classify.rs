use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use betadiv_core::betapower::ln_density_f;
use betadiv_core::classify::{classify, in_elp_region, region_grid, Status};
use betadiv_core::levy::{count_sign_changes, jump_measure, rho};
use betadiv_core::Params;

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-2.0..2.0))
}

#[test]
fn lattice_holds_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let p = Params::new(log_uniform(&mut rng), log_uniform(&mut rng), log_uniform(&mut rng)).unwrap();
        let r = classify(p);
        assert!(r.lattice_violations().is_empty(), "{p}: {:?}", r.lattice_violations());
        for (k, v) in r.verdicts() {
            assert!(k == "ggc" || v.status != Status::Unknown, "{p} {k}");
            assert!(!v.reason.is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn log_convexity_matches_m_verdict(a in 0.05f64..5.0, b in 0.05f64..5.0, s in 0.05f64..5.0) {
        let p = Params::new(a, b, s).unwrap();
        let lf = |x: f64| ln_density_f(p, x).unwrap();
        let xs: Vec<f64> = (0..80).map(|i| 1e-3 * 1.15f64.powi(i)).collect();
        let min_second = xs
            .iter()
            .map(|&x| {
                let h = 1e-2 * x;
                (lf(x + h) - 2.0 * lf(x) + lf(x - h)) / (h * h)
            })
            .fold(f64::INFINITY, f64::min);
        let member = classify(p).m_class.status == Status::Member;
        if member {
            prop_assert!(min_second > -1e-4, "{} {}", p, min_second);
        } else {
            prop_assert!(min_second < 0.0, "{} {}", p, min_second);
        }
    }
}

#[test]
fn elp_members_have_nonnegative_jump_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut seen = 0;
    while seen < 30 {
        let p = Params::new(10f64.powf(rng.random_range(-1.0..0.7)), rng.random_range(0.05..3.0), rng.random_range(0.05..3.0)).unwrap();
        if !in_elp_region(p) {
            continue;
        }
        assert_eq!(classify(p).elp_class.status, Status::Member);
        let jm = jump_measure(p).unwrap();
        for i in 0..120 {
            let x = 1e-3 * 1.1f64.powi(i);
            assert!(jm.density(x).unwrap() >= 0.0, "{p} at {x}");
        }
        seen += 1;
    }
}

#[test]
fn min_above_one_gives_sign_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..15 {
        let p = Params::new(rng.random_range(0.2..3.0), rng.random_range(1.1..4.0), rng.random_range(1.1..4.0)).unwrap();
        assert_eq!(classify(p).elp_class.status, Status::NonMember);
        let c = count_sign_changes(|x| rho(p, x).unwrap(), 1e-6, 80.0, 4000);
        assert!(c >= 1, "{p}: {c}");
    }
}

#[test]
fn region_grid_layout() {
    let cells = region_grid(0.3, 3.0, 2.0, 16).unwrap();
    assert_eq!(cells.len(), 256);
    assert_eq!((cells[0].s, cells[0].b), (2.0 / 32.0, 3.0 / 32.0));
    assert_eq!((cells[1].s, cells[1].b), (2.0 / 32.0, 9.0 / 32.0));
    assert!(cells.iter().all(|c| c.report.lattice_violations().is_empty()));
    assert!(region_grid(-1.0, 3.0, 3.0, 16).is_err());
}
