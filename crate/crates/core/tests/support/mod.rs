//! Independent oracles and property checks shared by the integration tests
//! and the acceptance runner.
#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use stalk_adapt::experiment::{
    adaptation_force, detect_attachment, parse_trial, summarize_scenario, write_trial, Sample,
    TrialRecord,
};
use stalk_adapt::*;

pub const REFERENCE_ALPHA: [(f64, f64); 6] =
    [(0.0, 0.0), (15.0, 0.445), (30.0, 0.772), (45.0, 1.03), (60.0, 1.254), (75.0, 1.467)];

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn geom(ratio: f64) -> BeamGeometry {
    BeamGeometry::normalized(ratio).unwrap()
}

pub fn load(alpha: f64) -> NormalizedLoad {
    NormalizedLoad::adaptation(alpha).unwrap()
}

/// Reference trajectory of `θ'' = −α sin θ` from the Runge–Kutta 3/8 rule,
/// written independently of the library integrator. Takes `substeps` steps
/// per output interval and returns `intervals + 1` samples. The state update
/// uses compensated summation so a million steps stay near machine precision.
pub fn rk38_reference(alpha: f64, slope: f64, intervals: usize, substeps: usize) -> Vec<f64> {
    let f = |y: [f64; 2]| [y[1], -alpha * y[0].sin()];
    let h = 1.0 / (intervals * substeps) as f64;
    let mut y = [0.0, slope];
    let mut carry = [0.0; 2];
    let mut out = Vec::with_capacity(intervals + 1);
    out.push(0.0);
    for _ in 0..intervals {
        for _ in 0..substeps {
            let k1 = f(y);
            let k2 = f([y[0] + h / 3.0 * k1[0], y[1] + h / 3.0 * k1[1]]);
            let k3 = f([y[0] + h * (k2[0] - k1[0] / 3.0), y[1] + h * (k2[1] - k1[1] / 3.0)]);
            let k4 = f([y[0] + h * (k1[0] - k2[0] + k3[0]), y[1] + h * (k1[1] - k2[1] + k3[1])]);
            for i in 0..2 {
                let inc = h / 8.0 * (k1[i] + 3.0 * (k2[i] + k3[i]) + k4[i]) - carry[i];
                let next = y[i] + inc;
                carry[i] = (next - y[i]) - inc;
                y[i] = next;
            }
        }
        out.push(y[0]);
    }
    out
}

/// Root of `√α tan √α = γ L/R` by plain bisection on `u = √α ∈ (0, π/2)`.
pub fn linearized_alpha_bisection(gamma: f64, ratio: f64) -> f64 {
    let target = gamma / ratio;
    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::FRAC_PI_2 - 1e-15);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.tan() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    u * u
}

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- elastica

pub fn prop_boundary_satisfaction() -> Result<(), String> {
    let cfg = SolverConfig::default().with_grid_points(256);
    runner(48)
        .run(&(0.0..3.0f64, 0.0..1.5f64), |(alpha, ratio)| {
            let s = solve_shape_shooting(&load(alpha), &geom(ratio), &cfg).unwrap();
            prop_assert_eq!(s.theta_samples()[0], 0.0);
            prop_assert!(s.boundary_residual() <= cfg.boundary_tolerance);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prop_zero_load_identity() -> Result<(), String> {
    runner(32)
        .run(&(1e-4..1.0f64, 0.0..0.05f64, 16usize..600), |(l, r, n)| {
            let g = BeamGeometry::new(l, r).unwrap();
            let cfg = SolverConfig::default().with_grid_points(n);
            for s in [
                solve_shape_shooting(&load(0.0), &g, &cfg).unwrap(),
                solve_shape_oracle(&load(0.0), &g, &cfg).unwrap(),
            ] {
                prop_assert!(s.theta_samples().iter().all(|&t| t == 0.0));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prop_monotone_tip_response() -> Result<(), String> {
    let cfg = SolverConfig::default();
    let tips: Vec<f64> = (0..=30)
        .map(|k| solve_shape_shooting(&load(0.05 * k as f64), &geom(0.5), &cfg).unwrap().tip_angle())
        .collect();
    check(tips.windows(2).all(|w| w[1] > w[0]), || format!("tip angles not increasing: {tips:?}"))
}

/// Successive tip-angle differences of the shooting solution at N, 2N, 4N, 8N.
pub fn shooting_convergence_ratios(alpha: f64) -> Vec<f64> {
    let tips: Vec<f64> = [128usize, 256, 512, 1024]
        .iter()
        .map(|&n| {
            let cfg = SolverConfig::default().with_grid_points(n);
            solve_shape_shooting(&load(alpha), &geom(0.5), &cfg).unwrap().tip_angle()
        })
        .collect();
    let diffs: Vec<f64> = tips.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    diffs.windows(2).map(|w| w[0] / w[1]).collect()
}

// ---------------------------------------------------------------- alpha

pub fn prop_alpha_monotone() -> Result<(), String> {
    let angles: Vec<f64> = (1..=17).map(|k| (5.0 * k as f64).to_radians()).collect();
    let rows = generate_alpha_table(&angles, &geom(0.5), &SolverConfig::default());
    let alphas: Vec<f64> = rows.iter().map(|r| r.result.as_ref().map(|a| a.alpha).unwrap_or(f64::NAN)).collect();
    check(alphas.windows(2).all(|w| w[1] > w[0]), || format!("alpha not increasing: {alphas:?}"))
}

pub fn prop_geometry_sensitivity() -> Result<(), String> {
    let gamma = 30f64.to_radians();
    let alphas: Vec<f64> = [0.1, 0.25, 0.5, 1.0]
        .iter()
        .map(|&r| solve_alpha_for_angle(gamma, &geom(r), &SolverConfig::default()).unwrap().alpha)
        .collect();
    check(alphas.windows(2).all(|w| w[1] < w[0]), || format!("alpha not decreasing in R/L: {alphas:?}"))
}

pub fn prop_small_angle_consistency() -> Result<(), String> {
    let cfg = SolverConfig::default();
    for deg in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0] {
        let g = deg_to_rad(deg);
        let nl = solve_alpha_for_angle(g, &geom(0.5), &cfg).unwrap().alpha;
        let lin = linearized_alpha(g, &geom(0.5)).unwrap();
        check((nl - lin).abs() / lin <= 0.01, || format!("{deg} deg: {nl} vs {lin}"))?;
    }
    for deg in [30.0, 45.0, 60.0, 75.0, 85.0] {
        let g = deg_to_rad(deg);
        let nl = solve_alpha_for_angle(g, &geom(0.5), &cfg).unwrap().alpha;
        let lin = linearized_alpha(g, &geom(0.5)).unwrap();
        check(nl >= lin, || format!("{deg} deg: nonlinear {nl} below linear {lin}"))?;
    }
    Ok(())
}

pub fn prop_alpha_round_trip() -> Result<(), String> {
    let cfg = SolverConfig::default();
    runner(24)
        .run(&(0.0..1.55f64, 0.1..1.0f64), |(gamma, ratio)| {
            let r = solve_alpha_for_angle(gamma, &geom(ratio), &cfg).unwrap();
            let s = solve_shape_shooting(&load(r.alpha), &geom(ratio), &cfg).unwrap();
            prop_assert!((s.tip_angle() - gamma).abs() <= 1e-6);
            prop_assert_eq!(r.alpha == 0.0, gamma == 0.0);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn deg_to_rad(d: f64) -> f64 {
    d.to_radians()
}

// ---------------------------------------------------------------- force

pub fn prop_scaling_laws() -> Result<(), String> {
    runner(256)
        .run(&(0.0..5.0f64, 1e-6..1e-2f64, 1e-3..0.1f64), |(alpha, ei, l)| {
            let g1 = BeamGeometry::new(l, 0.5 * l).unwrap();
            let g2 = BeamGeometry::new(2.0 * l, 0.5 * l).unwrap();
            let c1 = StiffnessCalibration::from_flexural_rigidity(ei, &g1, "a").unwrap();
            let c2 = StiffnessCalibration::from_flexural_rigidity(2.0 * ei, &g1, "b").unwrap();
            let f = alpha_to_force(alpha, &c1, &g1);
            let tol = 1e-14 * f.abs().max(f64::MIN_POSITIVE);
            prop_assert!((alpha_to_force(alpha, &c1, &g2) - f / 4.0).abs() <= tol);
            prop_assert!((alpha_to_force(alpha, &c2, &g1) - 2.0 * f).abs() <= 2.0 * tol);
            let back = force_to_alpha(f, &c1, &g1);
            prop_assert!((back - alpha).abs() <= 4.0 * f64::EPSILON * alpha.max(1e-300));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Tip-load samples from `δ = F L³ / (3 EI)`, optionally with multiplicative
/// Gaussian noise on the force.
pub fn synthetic_bending(ei: f64, l: f64, noise: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let normal = Normal::new(1.0, noise.max(1e-300)).unwrap();
    (1..=25)
        .map(|k| {
            let d = 0.15e-3 * k as f64;
            let f = 3.0 * ei * d / (l * l * l);
            (d, if noise > 0.0 { f * normal.sample(&mut rng) } else { f })
        })
        .collect()
}

pub fn prop_calibration_round_trip() -> Result<(), String> {
    let l = 0.02;
    let g = BeamGeometry::new(l, 0.01).unwrap();
    for (k, ei) in [1e-4, 5.44e-4, 2e-3].into_iter().enumerate() {
        let clean = calibrate_ei(&synthetic_bending(ei, l, 0.0, 0), &g, "clean").unwrap();
        check((clean.flexural_rigidity - ei).abs() / ei <= 1e-3, || format!("clean {ei}: {clean:?}"))?;
        let noisy = calibrate_ei(&synthetic_bending(ei, l, 0.01, 7 + k as u64), &g, "noisy").unwrap();
        check((noisy.flexural_rigidity - ei).abs() / ei <= 0.02, || format!("noisy {ei}: {noisy:?}"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- experiment

fn sample_strategy() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (1e-3..1.0f64, -20.0..20.0f64, -50.0..50.0f64, -80.0..0.0f64)
}

pub fn trial_strategy(max_len: usize) -> impl Strategy<Value = TrialRecord> {
    prop::collection::vec(sample_strategy(), 1..max_len).prop_map(|raw| {
        let mut t = 0.0;
        let samples = raw
            .into_iter()
            .map(|(dt, force, displacement_mm, pressure)| {
                let s = Sample { time: t, force, displacement_mm, pressure };
                t += dt;
                s
            })
            .collect();
        TrialRecord::new("p", None, samples).unwrap()
    })
}

fn numeric_bits(r: &TrialRecord) -> Vec<[u64; 4]> {
    r.samples()
        .iter()
        .map(|s| [s.time.to_bits(), s.force.to_bits(), s.displacement_mm.to_bits(), s.pressure.to_bits()])
        .collect()
}

pub fn prop_parser_round_trip() -> Result<(), String> {
    // files written with assorted decimal precision, as instruments do
    let file = prop::collection::vec((1e-3..1.0f64, -20.0..20.0f64, 0.0..50.0f64, -80.0..0.0f64, 0usize..8), 1..50)
        .prop_map(|rows| {
            let mut t = 0.0;
            let mut text = String::from("time_s,force_N,displacement_mm,pressure_kPa\n# exported\n");
            for (dt, f, d, p, prec) in rows {
                t += dt;
                text.push_str(&format!("{t:.9},{f:.prec$},{d:.prec$},{p:.prec$}\n"));
            }
            text
        });
    runner(128)
        .run(&file, |text| {
            let first = parse_trial(text.as_bytes(), "p", None).unwrap();
            let mut out = Vec::new();
            write_trial(&first, &mut out).unwrap();
            let second = parse_trial(out.as_slice(), "p", None).unwrap();
            prop_assert_eq!(numeric_bits(&first), numeric_bits(&second));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    runner(128)
        .run(&trial_strategy(60), |record| {
            let mut out = Vec::new();
            write_trial(&record, &mut out).unwrap();
            let back = parse_trial(out.as_slice(), "p", None).unwrap();
            prop_assert_eq!(numeric_bits(&record), numeric_bits(&back));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prop_threshold_monotone() -> Result<(), String> {
    runner(256)
        .run(&(trial_strategy(40), -80.0..-1.0f64, 0.0..40.0f64), |(record, high, drop)| {
            let low = high - drop;
            let a = detect_attachment(&record, high).map(|e| e.sample_index);
            let b = detect_attachment(&record, low).map(|e| e.sample_index);
            match (a, b) {
                (Some(a), Some(b)) => prop_assert!(b >= a),
                (None, Some(_)) => prop_assert!(false, "lower threshold attached earlier"),
                _ => {}
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prop_post_attachment_invariance() -> Result<(), String> {
    let strategy = (trial_strategy(30), prop::collection::vec(sample_strategy(), 0..20));
    runner(256)
        .run(&strategy, |(record, extra)| {
            let Some(event) = detect_attachment(&record, -40.0) else { return Ok(()) };
            let before = adaptation_force(&record, &event).unwrap();
            let mut samples = record.samples().to_vec();
            let mut t = samples.last().unwrap().time;
            for (dt, force, displacement_mm, pressure) in extra {
                t += dt;
                samples.push(Sample { time: t, force, displacement_mm, pressure });
            }
            let longer = TrialRecord::new("p", None, samples).unwrap();
            prop_assert_eq!(before.to_bits(), adaptation_force(&longer, &event).unwrap().to_bits());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn scenario_trials() -> impl Strategy<Value = Vec<TrialRecord>> {
    let one = (0usize..4, 0.05..5.0f64, any::<bool>()).prop_map(|(a, peak, attaches)| {
        let angle = [15.0f64, 30.0, 45.0, 60.0][a].to_radians();
        let pressures = if attaches { [-8.0, -8.0, -60.0] } else { [-8.0; 3] };
        let forces = [0.0, peak, peak + 1.0];
        let samples = (0..3)
            .map(|i| Sample { time: i as f64, force: forces[i], displacement_mm: i as f64, pressure: pressures[i] })
            .collect();
        TrialRecord::new("scenario", Some(angle), samples).unwrap()
    });
    prop::collection::vec(one, 1..16)
}

pub fn prop_permutation_invariance() -> Result<(), String> {
    let strategy = scenario_trials().prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()));
    runner(256)
        .run(&strategy, |(trials, shuffled)| {
            let a = summarize_scenario(&trials, -50.0).unwrap();
            let b = summarize_scenario(&shuffled, -50.0).unwrap();
            prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
            Ok(())
        })
        .map_err(|e| e.to_string())
}
