//! Large-deflection elastica of the stalk under a follower tip load.
//!
//! In normalized arc length `s ∈ [0, 1]` the tangent angle obeys
//!
//! ```text
//! θ''(s) = α · sin(θ − φ),   θ(0) = 0,   θ'(1) = α · R/L
//! ```
//!
//! with `α = F L² / EI`. For the adaptation case the force acts against the
//! stalk axis (`φ = π`), so the equation takes the pendulum form
//! `θ'' = −α sin θ`. The tip-slope condition is the bending moment `F·R`
//! transmitted through the suction pad.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::roots::{self, Bracket};

/// Coiling beyond this tangent angle is treated as divergence.
pub const MAX_ABS_THETA: f64 = 4.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("integration diverged at s = {s:.6} (theta = {theta})")]
    Diverged { s: f64, theta: f64 },
    #[error("no solution after {iterations} iterations (last residual {last_residual:e})")]
    NoSolution { last_residual: f64, iterations: usize },
    #[error("surface angle {target:.6} rad is out of the domain [0, pi/2)")]
    AngleOutOfDomain { target: f64 },
    #[error(
        "surface angle {target:.6} rad is unreachable with alpha <= {alpha_max}; \
         max achievable tip angle is {max_tip_angle:.6} rad"
    )]
    UnreachableAngle { target: f64, alpha_max: f64, max_tip_angle: f64 },
    #[error("linearized oracle has no root below the tangent singularity for target {target:.6}")]
    OracleOutOfRange { target: f64 },
}

pub type Result<T, E = SolveError> = std::result::Result<T, E>;

/// Stalk length `L` and suction-pad radius `R`, both in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamGeometry {
    stalk_length: f64,
    pad_radius: f64,
    radius_ratio: f64,
}

impl BeamGeometry {
    pub fn new(stalk_length: f64, pad_radius: f64) -> Result<Self> {
        if !(stalk_length.is_finite() && stalk_length > 0.0) {
            return Err(SolveError::InvalidInput(format!(
                "stalk length must be positive, got {stalk_length}"
            )));
        }
        if !(pad_radius.is_finite() && pad_radius >= 0.0) {
            return Err(SolveError::InvalidInput(format!(
                "pad radius must be non-negative, got {pad_radius}"
            )));
        }
        Ok(Self { stalk_length, pad_radius, radius_ratio: pad_radius / stalk_length })
    }

    /// Geometry with a given `R/L` and a stalk length of `stalk_length`.
    pub fn with_ratio(stalk_length: f64, radius_ratio: f64) -> Result<Self> {
        if !(radius_ratio.is_finite() && radius_ratio >= 0.0) {
            return Err(SolveError::InvalidInput(format!(
                "radius ratio must be non-negative, got {radius_ratio}"
            )));
        }
        let g = Self::new(stalk_length, radius_ratio * stalk_length)?;
        // keep the requested ratio bit-exact
        Ok(Self { radius_ratio, ..g })
    }

    /// Unit-length stalk with the given `R/L`; enough for any normalized solve.
    pub fn normalized(radius_ratio: f64) -> Result<Self> {
        Self::with_ratio(1.0, radius_ratio)
    }

    pub fn stalk_length(&self) -> f64 {
        self.stalk_length
    }

    pub fn pad_radius(&self) -> f64 {
        self.pad_radius
    }

    pub fn radius_ratio(&self) -> f64 {
        self.radius_ratio
    }
}

/// Normalized tip load `α = F L² / EI` and the force direction `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedLoad {
    alpha: f64,
    force_angle: f64,
}

impl NormalizedLoad {
    /// Adaptation load: force opposing the stalk axis, `φ = π`.
    pub fn adaptation(alpha: f64) -> Result<Self> {
        Self::new(alpha, PI)
    }

    pub fn new(alpha: f64, force_angle: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(SolveError::InvalidInput(format!("alpha must be >= 0, got {alpha}")));
        }
        if !force_angle.is_finite() {
            return Err(SolveError::InvalidInput("force angle must be finite".into()));
        }
        Ok(Self { alpha, force_angle })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn force_angle(&self) -> f64 {
        self.force_angle
    }

    /// `(sin(θ − φ), cos(θ − φ))`, exact in `θ` for the adaptation case.
    #[inline]
    pub(crate) fn relative_sin_cos(&self, theta: f64) -> (f64, f64) {
        if self.force_angle == PI {
            let (s, c) = theta.sin_cos();
            (-s, -c)
        } else {
            (theta - self.force_angle).sin_cos()
        }
    }

    /// Curvature derivative `θ''` at tangent angle `theta`.
    #[inline]
    pub(crate) fn rhs(&self, theta: f64) -> f64 {
        self.alpha * self.relative_sin_cos(theta).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Samples of `s` on `[0, 1]`, end points included.
    pub grid_points: usize,
    /// Bound on `|θ'(1) − α R/L|`.
    pub boundary_tolerance: f64,
    pub max_iterations: usize,
    /// Upper end of the α search when solving for a surface angle.
    pub alpha_bracket_max: f64,
    /// Bound on `|tip angle − surface angle|` in radians.
    pub angle_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_points: 1024,
            boundary_tolerance: 1e-10,
            max_iterations: 200,
            alpha_bracket_max: 10.0,
            angle_tolerance: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn with_grid_points(self, grid_points: usize) -> Self {
        Self { grid_points, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 16 {
            return Err(SolveError::InvalidInput(format!(
                "grid_points must be >= 16, got {}",
                self.grid_points
            )));
        }
        if !(self.boundary_tolerance > 0.0) {
            return Err(SolveError::InvalidInput("boundary_tolerance must be > 0".into()));
        }
        if !(self.alpha_bracket_max > 0.0) {
            return Err(SolveError::InvalidInput("alpha_bracket_max must be > 0".into()));
        }
        if !(self.angle_tolerance > 0.0) {
            return Err(SolveError::InvalidInput("angle_tolerance must be > 0".into()));
        }
        if self.max_iterations == 0 {
            return Err(SolveError::InvalidInput("max_iterations must be > 0".into()));
        }
        Ok(())
    }

    pub(crate) fn step(&self) -> f64 {
        1.0 / (self.grid_points - 1) as f64
    }
}

/// A solved stalk shape sampled on a uniform grid of normalized arc length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElasticaSolution {
    alpha: f64,
    theta_samples: Vec<f64>,
    tip_angle: f64,
    initial_slope: f64,
    boundary_residual: f64,
}

impl ElasticaSolution {
    pub(crate) fn new(
        alpha: f64,
        theta_samples: Vec<f64>,
        initial_slope: f64,
        boundary_residual: f64,
    ) -> Self {
        debug_assert_eq!(theta_samples[0], 0.0);
        let tip_angle = *theta_samples.last().expect("non-empty grid");
        Self { alpha, theta_samples, tip_angle, initial_slope, boundary_residual }
    }

    pub(crate) fn zero(alpha: f64, grid_points: usize) -> Self {
        Self::new(alpha, vec![0.0; grid_points], 0.0, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta_samples(&self) -> &[f64] {
        &self.theta_samples
    }

    pub fn tip_angle(&self) -> f64 {
        self.tip_angle
    }

    /// `θ'(0)`, the shooting unknown.
    pub fn initial_slope(&self) -> f64 {
        self.initial_slope
    }

    pub fn boundary_residual(&self) -> f64 {
        self.boundary_residual
    }

    pub fn grid_points(&self) -> usize {
        self.theta_samples.len()
    }

    /// Arc-length coordinate of sample `i`.
    pub fn arc_length_at(&self, i: usize) -> f64 {
        i as f64 / (self.theta_samples.len() - 1) as f64
    }

    /// Largest pointwise difference between two solutions on the same grid.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.grid_points(), other.grid_points(), "grids differ");
        self.theta_samples
            .iter()
            .zip(&other.theta_samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < 16 {
        return Err(SolveError::InvalidInput(format!(
            "grid_points must be >= 16, got {grid_points}"
        )));
    }
    Ok(())
}

/// Classical RK4 over the grid. Calls `visit(i, θ)` at every node and
/// returns `(θ(1), θ'(1))`.
fn rk4_sweep(
    load: &NormalizedLoad,
    initial_slope: f64,
    grid_points: usize,
    mut visit: impl FnMut(usize, f64),
) -> Result<(f64, f64)> {
    let h = 1.0 / (grid_points - 1) as f64;
    let (mut th, mut p) = (0.0_f64, initial_slope);
    visit(0, th);
    for i in 1..grid_points {
        let k1t = p;
        let k1p = load.rhs(th);
        let k2t = p + 0.5 * h * k1p;
        let k2p = load.rhs(th + 0.5 * h * k1t);
        let k3t = p + 0.5 * h * k2p;
        let k3p = load.rhs(th + 0.5 * h * k2t);
        let k4t = p + h * k3p;
        let k4p = load.rhs(th + h * k3t);
        th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !th.is_finite() || !p.is_finite() || th.abs() > MAX_ABS_THETA {
            return Err(SolveError::Diverged { s: i as f64 * h, theta: th });
        }
        visit(i, th);
    }
    Ok((th, p))
}

/// Integrate the initial-value problem `θ(0) = 0`, `θ'(0) = initial_slope`
/// and return `θ` at each of the `grid_points` nodes.
pub fn integrate_elastica_ivp(
    load: &NormalizedLoad,
    initial_slope: f64,
    grid_points: usize,
) -> Result<Vec<f64>> {
    check_grid(grid_points)?;
    if !initial_slope.is_finite() {
        return Err(SolveError::InvalidInput("initial slope must be finite".into()));
    }
    let mut theta = vec![0.0; grid_points];
    rk4_sweep(load, initial_slope, grid_points, |i, t| theta[i] = t)?;
    Ok(theta)
}

/// `(θ(1), θ'(1))` of the initial-value problem without storing the path.
pub fn integrate_to_tip(
    load: &NormalizedLoad,
    initial_slope: f64,
    grid_points: usize,
) -> Result<(f64, f64)> {
    check_grid(grid_points)?;
    rk4_sweep(load, initial_slope, grid_points, |_, _| {})
}

/// Tip slope demanded by the pad moment, `α R / L`.
pub fn tip_slope_target(load: &NormalizedLoad, geometry: &BeamGeometry) -> f64 {
    load.alpha() * geometry.radius_ratio()
}

/// Solve the boundary-value problem by shooting on `θ'(0)`.
///
/// The residual `θ'(1) − α R/L` is bracketed starting from
/// `[0, α (R/L + 1)]`, bisected down to a width of `1e-6`, then polished
/// with secant steps.
pub fn solve_shape_shooting(
    load: &NormalizedLoad,
    geometry: &BeamGeometry,
    config: &SolverConfig,
) -> Result<ElasticaSolution> {
    config.validate()?;
    let n = config.grid_points;
    let alpha = load.alpha();
    if alpha == 0.0 {
        return Ok(ElasticaSolution::zero(alpha, n));
    }
    let target = tip_slope_target(load, geometry);
    let residual = |c: f64| integrate_to_tip(load, c, n).map(|(_, p)| p - target);

    let bracket = expand_slope_bracket(&residual, alpha * (geometry.radius_ratio() + 1.0), config)?;
    let max_iter = config.max_iterations;
    let (bracket, _) = roots::bisect(&residual, bracket, 1e-6, max_iter)?;
    let root = roots::secant_polish(&residual, bracket, config.boundary_tolerance, max_iter)?;

    let theta = integrate_elastica_ivp(load, root.x, n)?;
    let (_, p_tip) = integrate_to_tip(load, root.x, n)?;
    let boundary_residual = (p_tip - target).abs();
    if boundary_residual > config.boundary_tolerance {
        return Err(SolveError::NoSolution { last_residual: boundary_residual, iterations: max_iter });
    }
    Ok(ElasticaSolution::new(alpha, theta, root.x, boundary_residual))
}

fn expand_slope_bracket(
    residual: &impl Fn(f64) -> Result<f64>,
    initial_hi: f64,
    config: &SolverConfig,
) -> Result<Bracket> {
    let mut lo = 0.0;
    let mut f_lo = residual(lo)?;
    if f_lo >= 0.0 {
        // θ ≡ 0 already meets the tip condition (R = 0)
        return Ok(Bracket { lo, f_lo, hi: lo, f_hi: f_lo });
    }
    let mut hi = initial_hi.max(f64::MIN_POSITIVE);
    for _ in 0..config.max_iterations {
        match residual(hi) {
            Ok(f_hi) if f_hi >= 0.0 => return Ok(Bracket { lo, f_lo, hi, f_hi }),
            Ok(f_hi) => {
                lo = hi;
                f_lo = f_hi;
                hi *= 2.0;
            }
            // overshot into coiling; pull back toward the last good point
            Err(SolveError::Diverged { .. }) => hi = 0.5 * (lo + hi),
            Err(e) => return Err(e),
        }
    }
    Err(SolveError::NoSolution { last_residual: f_lo, iterations: config.max_iterations })
}

/// Planar centerline in units of `L`, base at the origin, base axis along `x`.
///
/// Each grid interval is replaced by the chord of a constant-curvature arc
/// between its end angles.
pub fn centerline(solution: &ElasticaSolution) -> Vec<Point> {
    let theta = solution.theta_samples();
    let h = 1.0 / (theta.len() - 1) as f64;
    let mut pts = Vec::with_capacity(theta.len());
    let (mut x, mut y) = (0.0, 0.0);
    pts.push(Point { x, y });
    for w in theta.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        let chord = if half.abs() < 1e-8 { h * (1.0 - half * half / 6.0) } else { h * half.sin() / half };
        let mid = 0.5 * (w[0] + w[1]);
        x += chord * mid.cos();
        y += chord * mid.sin();
        pts.push(Point { x, y });
    }
    pts
}

/// Total length of a polyline.
pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y)).sum()
}
