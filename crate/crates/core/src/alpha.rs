//! Normalized load needed for the stalk tip to conform to a surface angle.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::elastica::{
    solve_shape_shooting, BeamGeometry, ElasticaSolution, NormalizedLoad, Result, SolveError,
    SolverConfig,
};
use crate::roots::{self, Bracket};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaResult {
    pub surface_angle: f64,
    pub alpha: f64,
    pub tip_angle_achieved: f64,
    pub outer_iterations: usize,
    #[serde(skip)]
    pub inner_solution: ElasticaSolution,
}

/// One row of an α table. Failed angles keep their error instead of
/// aborting the table.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaTableRow {
    pub surface_angle: f64,
    pub result: Result<AlphaResult>,
}

fn check_angle(surface_angle: f64) -> Result<()> {
    if !(surface_angle.is_finite() && (0.0..FRAC_PI_2).contains(&surface_angle)) {
        return Err(SolveError::AngleOutOfDomain { target: surface_angle });
    }
    Ok(())
}

fn tip_angle(alpha: f64, geometry: &BeamGeometry, config: &SolverConfig) -> Result<ElasticaSolution> {
    solve_shape_shooting(&NormalizedLoad::adaptation(alpha)?, geometry, config)
}

/// Find `α` such that the tip angle of the loaded stalk equals
/// `surface_angle` (radians, in `[0, π/2)`).
///
/// The tip angle grows monotonically with `α`, so the search brackets from
/// `α = 0` by doubling up to `config.alpha_bracket_max` and finishes with
/// Brent's method.
pub fn solve_alpha_for_angle(
    surface_angle: f64,
    geometry: &BeamGeometry,
    config: &SolverConfig,
) -> Result<AlphaResult> {
    check_angle(surface_angle)?;
    config.validate()?;
    if surface_angle == 0.0 {
        return Ok(AlphaResult {
            surface_angle,
            alpha: 0.0,
            tip_angle_achieved: 0.0,
            outer_iterations: 0,
            inner_solution: tip_angle(0.0, geometry, config)?,
        });
    }

    let gap = |alpha: f64| tip_angle(alpha, geometry, config).map(|s| s.tip_angle() - surface_angle);

    let alpha_max = config.alpha_bracket_max;
    let mut lo = 0.0;
    let mut f_lo = -surface_angle;
    let mut hi = alpha_max.min(1.0);
    let mut evaluations = 0;
    let bracket = loop {
        let f_hi = gap(hi)?;
        evaluations += 1;
        if f_hi >= 0.0 {
            break Bracket { lo, f_lo, hi, f_hi };
        }
        if hi >= alpha_max {
            return Err(SolveError::UnreachableAngle {
                target: surface_angle,
                alpha_max,
                max_tip_angle: f_hi + surface_angle,
            });
        }
        lo = hi;
        f_lo = f_hi;
        hi = (2.0 * hi).min(alpha_max);
    };

    let root = roots::brent(gap, bracket, 1e-14, config.max_iterations)?;
    let inner_solution = tip_angle(root.x, geometry, config)?;
    let tip = inner_solution.tip_angle();
    if (tip - surface_angle).abs() > config.angle_tolerance {
        return Err(SolveError::NoSolution {
            last_residual: tip - surface_angle,
            iterations: evaluations + root.iterations,
        });
    }
    Ok(AlphaResult {
        surface_angle,
        alpha: root.x,
        tip_angle_achieved: tip,
        outer_iterations: evaluations + root.iterations,
        inner_solution,
    })
}

/// Solve every angle independently; output order follows `angles`.
pub fn generate_alpha_table(
    angles: &[f64],
    geometry: &BeamGeometry,
    config: &SolverConfig,
) -> Vec<AlphaTableRow> {
    angles
        .par_iter()
        .map(|&surface_angle| AlphaTableRow {
            surface_angle,
            result: solve_alpha_for_angle(surface_angle, geometry, config),
        })
        .collect()
}

/// Small-deflection estimate of `α`.
///
/// Linearizing `θ'' = −α sin θ` gives a tip angle of
/// `(R/L) · √α · tan √α`; this returns the root of that relation with
/// `√α < π/2`.
pub fn linearized_alpha(surface_angle: f64, geometry: &BeamGeometry) -> Result<f64> {
    if !(surface_angle > 0.0 && surface_angle < FRAC_PI_2) {
        return Err(SolveError::AngleOutOfDomain { target: surface_angle });
    }
    let ratio = geometry.radius_ratio();
    if ratio <= 0.0 {
        return Err(SolveError::InvalidInput("linearized oracle needs R/L > 0".into()));
    }
    let target = surface_angle / ratio;
    let f = |u: f64| Ok::<_, SolveError>(u * u.tan() - target);
    let hi = FRAC_PI_2 * (1.0 - 1e-12);
    let f_hi = f(hi)?;
    if !(f_hi > 0.0) {
        return Err(SolveError::OracleOutOfRange { target: surface_angle });
    }
    let root = roots::brent(f, Bracket { lo: 0.0, f_lo: -target, hi, f_hi }, 1e-15, 200)?;
    Ok(root.x * root.x)
}
