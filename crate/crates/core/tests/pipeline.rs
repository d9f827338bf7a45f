use ssf_core::oracles::{bound_states, circle_xi_oracle};
use ssf_core::ssf::{detect_jumps, validate_trace_formula, xi_at, xi_limit, xi_sweep, PointStatus};
use ssf_core::{c64, AlphaSpec, Curve2D, EpsSchedule, OracleGeometry, SsfError, SsfSetup, ValidateOptions, WeylMode};

const PAIR: WeylMode = WeylMode::PairWithC { c: 2.0 };

fn setup(n: usize, alpha: f64, mode: WeylMode) -> SsfSetup {
    SsfSetup::new(&Curve2D::circle(1.0), n, AlphaSpec::constant(alpha), mode).unwrap()
}

fn kappa_star() -> f64 {
    let states = bound_states(OracleGeometry::Circle { radius: 1.0 }, 1.0, 32).unwrap();
    assert_eq!(states.len(), 1);
    states[0].kappa
}

#[test]
fn zero_coupling_gives_zero() {
    let s = setup(64, 0.0, PAIR);
    assert_eq!(xi_at(1.0, 1e-2, &s).unwrap(), 0.0);
    let curve = xi_sweep(&[-1.0, 0.5, 2.0], &EpsSchedule::default(), &s).unwrap();
    assert!(curve.points.iter().all(|p| p.xi == 0.0 && p.converged()));
}

#[test]
fn empty_sweep_is_empty() {
    let curve = xi_sweep(&[], &EpsSchedule::default(), &setup(32, -2.0, WeylMode::AlphaNegative)).unwrap();
    assert!(curve.points.is_empty() && curve.jumps.is_empty());
}

#[test]
fn sweep_rejects_unsorted_grid() {
    let s = setup(32, -2.0, WeylMode::AlphaNegative);
    assert!(matches!(xi_sweep(&[1.0, 0.5], &EpsSchedule::default(), &s), Err(SsfError::InvalidInput(_))));
}

#[test]
fn off_axis_values_match_mode_sum() {
    for (alpha, mode, lambda) in [(-2.0, WeylMode::AlphaNegative, -1.0), (1.0, PAIR, 2.0)] {
        let got = xi_at(lambda, 1e-2, &setup(256, alpha, mode)).unwrap();
        let want = circle_xi_oracle(lambda, 1e-2, alpha, mode, 1.0, 64).unwrap();
        assert!((got - want.value).abs() < 1e-6, "α = {alpha}: {got} vs {want:?}");
    }
}

#[test]
fn negative_coupling_vanishes_below_zero() {
    let s = setup(128, -2.0, WeylMode::AlphaNegative);
    for lambda in [-5.0, -1.0, -0.5, -0.1] {
        let est = xi_limit(lambda, &EpsSchedule::default(), &s).unwrap();
        assert!(est.xi.abs() < 1e-6, "λ = {lambda}: {est:?}");
    }
}

#[test]
fn threshold_is_excluded() {
    let s = setup(32, -2.0, WeylMode::AlphaNegative);
    assert!(matches!(xi_limit(5e-4, &EpsSchedule::default(), &s), Err(SsfError::Excluded { .. })));
}

#[test]
fn pair_mode_has_one_negative_jump() {
    let k = kappa_star();
    let s = setup(128, 1.0, PAIR);
    let jumps = detect_jumps(&s, -3.0, 0.0).unwrap();
    assert_eq!(jumps.len(), 1);
    assert_eq!(jumps[0].size, -1);
    assert!((jumps[0].lambda + k * k).abs() < 1e-6, "{:?} vs {}", jumps[0], -k * k);
    let s = s.with_jumps(jumps);
    let below = xi_limit(-0.3, &EpsSchedule::default(), &s).unwrap();
    let inside = xi_limit(-0.15, &EpsSchedule::default(), &s).unwrap();
    assert!(below.xi.abs() < 5e-3, "{below:?}");
    assert!((inside.xi + 1.0).abs() < 5e-3, "{inside:?}");
}

#[test]
fn sweep_marks_points_near_jumps() {
    let k2 = kappa_star().powi(2);
    let s = setup(64, 1.0, PAIR);
    let curve = xi_sweep(&[-0.5, -k2 + 2e-4, -0.1], &EpsSchedule::default(), &s).unwrap();
    assert_eq!(curve.jumps.len(), 1);
    assert_eq!(curve.points[1].status, PointStatus::Excluded);
    assert!(curve.points[0].converged() && curve.points[2].converged());
}

#[test]
fn short_sweep_matches_oracle_on_rim() {
    let s = setup(128, -2.0, WeylMode::AlphaNegative);
    let lambdas = [0.5, 1.0, 3.0, 7.0, 12.0, 20.0];
    let curve = xi_sweep(&lambdas, &EpsSchedule::default(), &s).unwrap();
    for p in &curve.points {
        let want = circle_xi_oracle(p.lambda, 0.0, -2.0, WeylMode::AlphaNegative, 1.0, 63).unwrap();
        assert!(p.converged(), "{p:?}");
        assert!((p.xi - want.value).abs() < 1e-4, "{p:?} vs {want:?}");
    }
}

#[test]
fn refining_the_grid_barely_moves_xi() {
    let coarse = xi_limit(3.0, &EpsSchedule::default(), &setup(64, -2.0, WeylMode::AlphaNegative)).unwrap();
    let fine = xi_limit(3.0, &EpsSchedule::default(), &setup(128, -2.0, WeylMode::AlphaNegative)).unwrap();
    assert!((coarse.xi - fine.xi).abs() < 1e-6, "{coarse:?} vs {fine:?}");
}

#[test]
fn trace_formula_is_trivial_without_coupling() {
    let s = setup(32, 0.0, PAIR);
    let curve = xi_sweep(&[-1.0, 1.0, 10.0], &EpsSchedule::default(), &s).unwrap();
    let report = validate_trace_formula(&curve, &[c64::new(-1.0, 0.0)], &s, &ValidateOptions::default()).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.checks[0].lhs, [0.0, 0.0]);
    assert_eq!(report.checks[0].rhs, [0.0, 0.0]);
}

#[test]
fn truncated_range_is_a_coverage_error() {
    let s = setup(32, -2.0, WeylMode::AlphaNegative);
    let lambdas: Vec<f64> = (0..=10).map(|k| 0.01 + 0.099 * k as f64).collect();
    let curve = xi_sweep(&lambdas, &EpsSchedule::default(), &s).unwrap();
    let err = validate_trace_formula(&curve, &[c64::new(-0.1, 0.0)], &s, &ValidateOptions::default());
    assert!(matches!(err, Err(SsfError::Coverage { .. })), "{err:?}");
}

#[test]
fn validation_refuses_foreign_curve() {
    let s = setup(32, -2.0, WeylMode::AlphaNegative);
    let curve = xi_sweep(&[-1.0, 1.0], &EpsSchedule::default(), &s).unwrap();
    let other = setup(64, -2.0, WeylMode::AlphaNegative);
    let err = validate_trace_formula(&curve, &[c64::new(-1.0, 0.0)], &other, &ValidateOptions::default());
    assert!(matches!(err, Err(SsfError::InvalidInput(_))), "{err:?}");
}
