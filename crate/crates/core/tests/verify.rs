use betadiv_core::verify::{run_all, run_suite, VerifyConfig, SUITES};

#[test]
fn suites_run_in_fixed_order() {
    let reports = run_all(&VerifyConfig::default());
    let names: Vec<&str> = reports.iter().map(|r| r.suite.as_str()).collect();
    assert_eq!(names, SUITES);
    for r in &reports {
        assert!(!r.cases.is_empty(), "{}", r.suite);
        if r.suite != "probes" {
            assert!(r.passed(), "{}: {:?}", r.suite, r.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn only_non_integer_kernel_probes_fail() {
    let rep = run_suite("probes", &VerifyConfig::default()).unwrap();
    let failed: Vec<&str> = rep.failures().map(|c| c.label.as_str()).collect();
    assert_eq!(failed, ["integer kernel a=1 b=1.5", "integer kernel a=1 b=2.5"]);
    assert!(!rep.passed());
}

#[test]
fn perturbed_spectral_function_is_detected() {
    let cfg = VerifyConfig { rho_perturbation: 1e-4, ..VerifyConfig::default() };
    assert!(run_suite("psi", &VerifyConfig::default()).unwrap().passed());
    let bad = run_suite("psi", &cfg).unwrap();
    assert!(bad.failures().count() > 0);
    assert!(!run_suite("limits", &cfg).unwrap().passed());
}

#[test]
fn unknown_suite() {
    assert!(run_suite("nonsense", &VerifyConfig::default()).is_none());
}

#[test]
fn report_serializes() {
    let rep = run_suite("thorin", &VerifyConfig::default()).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["suite"], "thorin");
    let case = &v["cases"][0];
    for key in ["label", "discrepancy", "tolerance", "passed"] {
        assert!(case.get(key).is_some(), "{key}");
    }
    assert_eq!(v["params"].as_array().unwrap().len(), 2);
}
