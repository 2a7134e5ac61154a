mod support;

use stalk_adapt::*;
use support::*;

#[test]
fn ivp_matches_fine_reference() {
    let theta = integrate_elastica_ivp(&load(0.445), 0.5, 1024).unwrap();
    let reference = rk38_reference(0.445, 0.5, 1023, 978);
    let sup = theta.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(sup <= 1e-8, "sup {sup}");
}

#[test]
fn ivp_trivial_cases() {
    let straight = integrate_elastica_ivp(&load(0.0), 0.0, 64).unwrap();
    assert!(straight.iter().all(|&t| t == 0.0));
    let arc = integrate_elastica_ivp(&load(0.0), 0.3, 65).unwrap();
    for (i, t) in arc.iter().enumerate() {
        assert!((t - 0.3 * i as f64 / 64.0).abs() < 1e-15);
    }
    assert!(integrate_elastica_ivp(&load(1.0), 0.1, 8).is_err());
}

#[test]
fn ivp_diverges_for_huge_slope() {
    assert!(matches!(integrate_elastica_ivp(&load(1.0), 100.0, 256), Err(SolveError::Diverged { .. })));
}

#[test]
fn table_loads_give_table_angles() {
    let cfg = SolverConfig::default();
    for (deg, alpha) in [(45.0f64, 1.03), (75.0, 1.467)] {
        let s = solve_shape_shooting(&load(alpha), &geom(0.5), &cfg).unwrap();
        assert!((s.tip_angle().to_degrees() - deg).abs() < 0.5, "{deg}: {}", s.tip_angle().to_degrees());
        assert_eq!(s.theta_samples()[0], 0.0);
        let slope = s.theta_samples()[cfg.grid_points - 1] - s.theta_samples()[cfg.grid_points - 2];
        assert!(slope > 0.0);
    }
}

#[test]
fn shooting_agrees_with_mesh_oracle() {
    let cfg = SolverConfig::default();
    for alpha in [0.1, 0.445, 1.03, 1.467, 2.0] {
        for ratio in [0.0, 0.25, 0.5, 1.0] {
            let a = solve_shape_shooting(&load(alpha), &geom(ratio), &cfg).unwrap();
            let b = solve_shape_oracle(&load(alpha), &geom(ratio), &cfg).unwrap();
            assert!(a.sup_distance(&b) <= 1e-6, "alpha {alpha} ratio {ratio}");
            assert!(b.boundary_residual() <= 1e-10);
        }
    }
}

#[test]
fn straight_stalk_without_pad_moment() {
    let s = solve_shape_shooting(&load(1.2), &geom(0.0), &SolverConfig::default()).unwrap();
    assert!(s.theta_samples().iter().all(|&t| t == 0.0));
}

#[test]
fn rejects_bad_inputs() {
    assert!(NormalizedLoad::adaptation(-1.0).is_err());
    assert!(NormalizedLoad::adaptation(f64::NAN).is_err());
    assert!(BeamGeometry::new(0.0, 0.01).is_err());
    assert!(BeamGeometry::new(0.02, -0.01).is_err());
    let cfg = SolverConfig::default().with_grid_points(4);
    assert!(matches!(solve_shape_shooting(&load(1.0), &geom(0.5), &cfg), Err(SolveError::InvalidInput(_))));
}

#[test]
fn centerline_has_unit_length() {
    for alpha in [0.0, 0.445, 1.467] {
        let s = solve_shape_shooting(&load(alpha), &geom(0.5), &SolverConfig::default()).unwrap();
        let pts = centerline(&s);
        assert_eq!(pts.len(), s.grid_points());
        assert_eq!((pts[0].x, pts[0].y), (0.0, 0.0));
        assert!((polyline_length(&pts) - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn centerline_ends_along_tip_tangent() {
    let cfg = SolverConfig::default().with_grid_points(4096);
    let s = solve_shape_shooting(&load(1.03), &geom(0.5), &cfg).unwrap();
    let pts = centerline(&s);
    let (a, b) = (pts[pts.len() - 2], pts[pts.len() - 1]);
    let heading = (b.y - a.y).atan2(b.x - a.x);
    assert!((heading - s.tip_angle()).abs() <= 1e-4);
}

#[test]
fn solutions_serialize() {
    let s = solve_shape_shooting(&load(0.5), &geom(0.5), &SolverConfig::default().with_grid_points(16)).unwrap();
    let v = serde_json::to_value(&s).unwrap();
    assert_eq!(v["theta_samples"].as_array().unwrap().len(), 16);
}
