use alasso::montecarlo::{run_study, StudyConfig, Tuning};

#[test]
fn cross_validation_picks_smaller_tuning() {
    let cfg = StudyConfig { replications: 200, ..StudyConfig::canonical(0.0, Tuning::cross_validated(), 77) };
    let r = run_study(&cfg).unwrap();
    assert_eq!(r.failed_replications, 0);
    assert!(r.median_mu() < 100f64.powf(-1.0 / 3.0), "{}", r.median_mu());
}

#[test]
fn large_coefficients_are_never_zeroed() {
    let mu = 100f64.powf(-1.0 / 3.0);
    let cfg = StudyConfig { replications: 300, ..StudyConfig::canonical(2.0, Tuning::Fixed { mu }, 5) };
    let r = run_study(&cfg).unwrap();
    assert_eq!(r.summaries[0].zero_count, 0);
    assert_eq!(r.summaries[1].zero_count, 0);
    // atom of the small coefficients sits at -C_jj^{-1/2} θ_j ≈ -0.77γ, -0.87γ
    assert!((r.summaries[2].atom_location + 1.549).abs() < 1e-3);
    assert!((r.summaries[3].atom_location + 1.732).abs() < 1e-3);
}

#[test]
fn alternative_sample_sizes_run() {
    for n in [60, 200] {
        let mu = (n as f64).powf(-1.0 / 3.0);
        let cfg = StudyConfig { n, replications: 50, ..StudyConfig::canonical(1.0, Tuning::Fixed { mu }, 1) };
        let r = run_study(&cfg).unwrap();
        assert_eq!(r.replications.len(), 50);
    }
}
