//! Mesh-based solver for the same boundary-value problem, used to cross-check
//! shooting.
//!
//! The interior uses the fourth-order Numerov stencil for `θ'' = f(θ)`:
//!
//! ```text
//! θ[i+1] − 2θ[i] + θ[i−1] = h²/12 · (f[i+1] + 10 f[i] + f[i−1])
//! ```
//!
//! The tip slope condition is imposed through a Taylor expansion about
//! `s = 1` in which every derivative of `θ` is expressed through `θ(1)` and
//! the known `θ'(1)`, which keeps the Jacobian tridiagonal. The whole
//! discrete system is solved at once by damped Newton iteration.

use crate::elastica::{
    tip_slope_target, BeamGeometry, ElasticaSolution, NormalizedLoad, Result, SolveError,
    SolverConfig,
};

/// `f`, `f'`, `f''`, `f'''` of `f(θ) = α sin(θ − φ)`.
fn derivs(load: &NormalizedLoad, theta: f64) -> [f64; 4] {
    let a = load.alpha();
    let (s, c) = load.relative_sin_cos(theta);
    [a * s, a * c, -a * s, -a * c]
}

struct Discretization<'a> {
    load: &'a NormalizedLoad,
    h: f64,
    tip_slope: f64,
}

impl Discretization<'_> {
    /// Tip-slope estimate from the last two nodes.
    fn tip_slope_estimate(&self, prev: f64, last: f64) -> f64 {
        let h = self.h;
        let b = self.tip_slope;
        let [f, f1, f2, _] = derivs(self.load, last);
        (last - prev) / h + h / 2.0 * f - h * h / 6.0 * f1 * b + h.powi(3) / 24.0 * (f2 * b * b + f1 * f)
    }

    fn d_tip_slope_d_last(&self, last: f64) -> f64 {
        let h = self.h;
        let b = self.tip_slope;
        let [f, f1, f2, f3] = derivs(self.load, last);
        1.0 / h + h / 2.0 * f1 - h * h / 6.0 * f2 * b + h.powi(3) / 24.0 * (f3 * b * b + f2 * f + f1 * f1)
    }

    /// Residual vector for unknowns `θ[1..=n]` (`θ[0] = 0` is fixed).
    fn residual(&self, theta: &[f64], out: &mut [f64]) {
        let n = theta.len() - 1;
        let k = self.h * self.h / 12.0;
        let f: Vec<f64> = theta.iter().map(|&t| self.load.rhs(t)).collect();
        for i in 1..n {
            out[i - 1] = theta[i + 1] - 2.0 * theta[i] + theta[i - 1] - k * (f[i + 1] + 10.0 * f[i] + f[i - 1]);
        }
        out[n - 1] = self.tip_slope_estimate(theta[n - 1], theta[n]) - self.tip_slope;
    }

    /// Tridiagonal Jacobian as `(sub, diag, sup)`, row `r` ↔ unknown `θ[r+1]`.
    fn jacobian(&self, theta: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = theta.len() - 1;
        let k = self.h * self.h / 12.0;
        let fp: Vec<f64> = theta.iter().map(|&t| derivs(self.load, t)[1]).collect();
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for i in 1..n {
            let r = i - 1;
            sub[r] = 1.0 - k * fp[i - 1];
            diag[r] = -2.0 - 10.0 * k * fp[i];
            sup[r] = 1.0 - k * fp[i + 1];
        }
        sub[n - 1] = -1.0 / self.h;
        diag[n - 1] = self.d_tip_slope_d_last(theta[n]);
        (sub, diag, sup)
    }

    /// `θ'(0)` from the first two nodes, by the same expansion about `s = 0`.
    fn base_slope(&self, theta1: f64) -> f64 {
        let h = self.h;
        let [f, f1, f2, _] = derivs(self.load, 0.0);
        // θ1 = h p + h²/2 f + h³/6 f' p + h⁴/24 (f'' p² + f' f), solved for p
        let a = h.powi(4) / 24.0 * f2;
        let b = h + h.powi(3) / 6.0 * f1;
        let c = h * h / 2.0 * f + h.powi(4) / 24.0 * f1 * f - theta1;
        if a.abs() < 1e-300 {
            -c / b
        } else {
            let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
            // root continuous with the linear case a → 0
            2.0 * (-c) / (b + disc.copysign(b))
        }
    }
}

/// Thomas algorithm; `sub[0]` and `sup[last]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return None;
    }
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        if beta == 0.0 || !beta.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { sup[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Some(x)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Initial guess: the small-deflection shape where it is bounded, else a
/// uniform-curvature arc.
fn initial_guess(load: &NormalizedLoad, tip_slope: f64, grid_points: usize) -> Vec<f64> {
    let k = load.alpha().sqrt();
    let h = 1.0 / (grid_points - 1) as f64;
    let use_linear = k > 0.0 && k.cos() > 0.2;
    (0..grid_points)
        .map(|i| {
            let s = i as f64 * h;
            if use_linear {
                tip_slope * (k * s).sin() / (k * k.cos())
            } else {
                tip_slope * s
            }
        })
        .collect()
}

/// Solve the boundary-value problem on the full mesh by damped Newton.
pub fn solve_shape_oracle(
    load: &NormalizedLoad,
    geometry: &BeamGeometry,
    config: &SolverConfig,
) -> Result<ElasticaSolution> {
    config.validate()?;
    let n_pts = config.grid_points;
    if load.alpha() == 0.0 {
        return Ok(ElasticaSolution::zero(0.0, n_pts));
    }
    let disc = Discretization { load, h: config.step(), tip_slope: tip_slope_target(load, geometry) };
    let mut theta = initial_guess(load, disc.tip_slope, n_pts);
    let n = n_pts - 1;
    let mut res = vec![0.0; n];
    let mut trial_res = vec![0.0; n];
    disc.residual(&theta, &mut res);
    let mut norm = max_abs(&res);

    let mut converged = false;
    for _ in 0..config.max_iterations {
        let (sub, diag, sup) = disc.jacobian(&theta);
        let neg: Vec<f64> = res.iter().map(|r| -r).collect();
        let step = solve_tridiagonal(&sub, &diag, &sup, &neg)
            .ok_or(SolveError::NoSolution { last_residual: norm, iterations: 0 })?;

        let mut lambda = 1.0;
        let mut trial = theta.clone();
        loop {
            for (t, (&t0, &d)) in trial[1..].iter_mut().zip(theta[1..].iter().zip(&step)) {
                *t = t0 + lambda * d;
            }
            disc.residual(&trial, &mut trial_res);
            let trial_norm = max_abs(&trial_res);
            if trial_norm.is_finite() && (trial_norm < norm || lambda < 1e-3 || norm < 1e-13) {
                break;
            }
            lambda *= 0.5;
        }
        std::mem::swap(&mut theta, &mut trial);
        std::mem::swap(&mut res, &mut trial_res);
        norm = max_abs(&res);

        let step_norm = lambda * max_abs(&step);
        if step_norm <= 1e-14 * max_abs(&theta).max(1.0) {
            converged = true;
            break;
        }
    }

    let boundary_residual = res[n - 1].abs();
    if !converged || boundary_residual > config.boundary_tolerance {
        return Err(SolveError::NoSolution { last_residual: norm, iterations: config.max_iterations });
    }
    let slope0 = disc.base_slope(theta[1]);
    Ok(ElasticaSolution::new(load.alpha(), theta, slope0, boundary_residual))
}
