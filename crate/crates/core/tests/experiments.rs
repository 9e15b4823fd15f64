use qdouble::experiments::*;
use qdouble::*;

#[test]
fn noiseless_memory_never_fails() {
    let config = SuppressionConfig { ls: vec![1, 2], p: 0.0, trials: 25, ..Default::default() };
    let r = run_error_suppression(&config, 5, Execution::default()).unwrap();
    for l in [1, 2] {
        let pt = r.point(l).unwrap();
        assert_eq!((pt.mean, pt.n), (0.0, 25));
    }
}

#[test]
fn certain_sign_flips_on_unit_strip() {
    // Every spin flipped: the stray Λ's cancel pairwise and the memory survives.
    let config = SuppressionConfig { ls: vec![1], p: 1.0, trials: 10, ..Default::default() };
    let r = run_error_suppression(&config, 5, Execution::default()).unwrap();
    assert!(r.point(1).unwrap().mean <= 1.0);
    assert_eq!(r.config["p"], 1.0);
}

#[test]
fn lambda_memory_is_rejected() {
    let config = SuppressionConfig { encoding: EncodingKind::LambdaOnly, ..Default::default() };
    assert!(matches!(run_error_suppression(&config, 0, Execution::default()), Err(Error::Unsupported(_))));
    let config = DistinguishConfig { encoding: EncodingKind::LambdaOnly, trials: 1 };
    assert!(run_distinguishability(&config, 0, Execution::default()).is_err());
}

#[test]
fn invalid_noise_is_rejected() {
    let config = SuppressionConfig { p: -0.1, ..Default::default() };
    assert!(matches!(run_error_suppression(&config, 0, Execution::default()), Err(Error::InvalidConfig(_))));
}

#[test]
fn report_round_trips_through_json() {
    let r = run_fusion_stats(&FusionConfig { trials: 50 }, 17, Execution::Sequential).unwrap();
    let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.config, serde_json::json!({ "trials": 50 }));
    assert_eq!(r.wall_ms, 0);
}

#[test]
fn csv_has_one_row_per_point() {
    let r = run_ground_state_check(&GroundStateConfig { rows: 2, cols: 2, boundary: Boundary::Open }, 0).unwrap();
    let csv = r.to_csv();
    assert_eq!(csv.lines().count(), r.points.len() + 1);
    assert!(csv.contains("energy,-5,0,1"));
}

#[test]
fn schedulers_agree() {
    let config = HadamardConfig { trials: 64, encoding: EncodingKind::LambdaOnly };
    let a = run_hadamard_stats(&config, 3, Execution::Sequential).unwrap();
    let b = run_hadamard_stats(&config, 3, Execution::Parallel).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn seeds_change_outcomes() {
    let a = run_fusion_stats(&FusionConfig { trials: 400 }, 1, Execution::default()).unwrap();
    let b = run_fusion_stats(&FusionConfig { trials: 400 }, 2, Execution::default()).unwrap();
    assert_ne!(a.points, b.points);
}

#[test]
fn point_statistics() {
    let p = Point::bernoulli("x", 3, 4);
    assert_eq!(p.mean, 0.75);
    assert!((p.stderr - (0.75f64 * 0.25 / 4.0).sqrt()).abs() < 1e-15);
    let s = Point::sample(1, &[1.0, 3.0]);
    assert_eq!((s.mean, s.n), (2.0, 2));
    assert!((s.stderr - 1.0).abs() < 1e-12);
}
