//! Conversion between normalized load and physical force, and bending-test
//! calibration of the stalk's flexural rigidity.
//!
//! `EI` is always calibrated from a tip-load bending test using the linear
//! cantilever relation `δ = F L³ / (3 EI)`.

use serde::Serialize;
use thiserror::Error;

use crate::alpha::generate_alpha_table;
use crate::elastica::{BeamGeometry, SolveError, SolverConfig};

/// Calibration inputs beyond this fraction of `L` leave the small-deflection
/// regime of the cantilever formula.
pub const SMALL_DEFLECTION_LIMIT: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("need at least 2 samples with distinct positive deflections, got {0}")]
    TooFewSamples(usize),
    #[error("all deflections are zero")]
    ZeroDeflection,
    #[error("fitted stiffness {0} N/m is not positive")]
    NonPositiveSlope(f64),
    #[error("invalid sample ({deflection}, {force}): values must be finite and deflection >= 0")]
    InvalidSample { deflection: f64, force: f64 },
    #[error("flexural rigidity must be positive and finite, got {0}")]
    InvalidRigidity(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StiffnessCalibration {
    /// `EI` in N·m².
    pub flexural_rigidity: f64,
    /// Tip stiffness `k` of `F = k δ`, N/m.
    pub linear_slope: f64,
    /// Uncentered coefficient of determination of the through-origin fit.
    pub fit_quality: f64,
    pub source_label: String,
    /// Stalk length the fit refers to, m.
    pub stalk_length: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl StiffnessCalibration {
    /// Calibration from a known `EI`, e.g. taken from an earlier run.
    pub fn from_flexural_rigidity(
        flexural_rigidity: f64,
        geometry: &BeamGeometry,
        source_label: impl Into<String>,
    ) -> Result<Self, CalibrationError> {
        if !(flexural_rigidity.is_finite() && flexural_rigidity > 0.0) {
            return Err(CalibrationError::InvalidRigidity(flexural_rigidity));
        }
        let l = geometry.stalk_length();
        Ok(Self {
            flexural_rigidity,
            linear_slope: 3.0 * flexural_rigidity / (l * l * l),
            fit_quality: 1.0,
            source_label: source_label.into(),
            stalk_length: l,
            warnings: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptationPrediction {
    pub surface_angle: f64,
    pub alpha: f64,
    pub force: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub surface_angle: f64,
    pub result: Result<AdaptationPrediction, SolveError>,
}

/// `F = α EI / L²`.
pub fn alpha_to_force(alpha: f64, calibration: &StiffnessCalibration, geometry: &BeamGeometry) -> f64 {
    let l = geometry.stalk_length();
    alpha * calibration.flexural_rigidity / (l * l)
}

/// `α = F L² / EI`.
pub fn force_to_alpha(force: f64, calibration: &StiffnessCalibration, geometry: &BeamGeometry) -> f64 {
    let l = geometry.stalk_length();
    force * (l * l) / calibration.flexural_rigidity
}

/// Fit `F = k δ` through the origin over `(deflection m, force N)` samples
/// and convert to `EI = k L³ / 3`.
pub fn calibrate_ei(
    samples: &[(f64, f64)],
    geometry: &BeamGeometry,
    source_label: impl Into<String>,
) -> Result<StiffnessCalibration, CalibrationError> {
    if let Some(&(deflection, force)) =
        samples.iter().find(|(d, f)| !(d.is_finite() && f.is_finite() && *d >= 0.0))
    {
        return Err(CalibrationError::InvalidSample { deflection, force });
    }
    if samples.len() < 2 {
        return Err(CalibrationError::TooFewSamples(samples.len()));
    }
    let sxx: f64 = samples.iter().map(|(d, _)| d * d).sum();
    if sxx == 0.0 {
        return Err(CalibrationError::ZeroDeflection);
    }
    let sxy: f64 = samples.iter().map(|(d, f)| d * f).sum();
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(CalibrationError::NonPositiveSlope(slope));
    }
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.0).filter(|&d| d > 0.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CalibrationError::TooFewSamples(distinct.len()));
    }

    let syy: f64 = samples.iter().map(|(_, f)| f * f).sum();
    let ss_res: f64 = samples.iter().map(|(d, f)| (f - slope * d).powi(2)).sum();
    let fit_quality = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 0.0 };

    let l = geometry.stalk_length();
    let mut warnings = Vec::new();
    let max_deflection = distinct[distinct.len() - 1];
    if max_deflection >= SMALL_DEFLECTION_LIMIT * l * (1.0 - 1e-9) {
        warnings.push(format!(
            "max deflection {:.4} mm reaches {:.0}% of the stalk length; \
             the linear cantilever relation is at or beyond its validity edge",
            max_deflection * 1e3,
            100.0 * max_deflection / l
        ));
    }
    Ok(StiffnessCalibration {
        flexural_rigidity: slope * l * l * l / 3.0,
        linear_slope: slope,
        fit_quality,
        source_label: source_label.into(),
        stalk_length: l,
        warnings,
    })
}

/// Adaptation force over a set of surface angles (radians).
pub fn predict_force_curve(
    angles: &[f64],
    calibration: &StiffnessCalibration,
    geometry: &BeamGeometry,
    config: &SolverConfig,
) -> Vec<PredictionRow> {
    generate_alpha_table(angles, geometry, config)
        .into_iter()
        .map(|row| PredictionRow {
            surface_angle: row.surface_angle,
            result: row.result.map(|r| AdaptationPrediction {
                surface_angle: r.surface_angle,
                alpha: r.alpha,
                force: alpha_to_force(r.alpha, calibration, geometry),
            }),
        })
        .collect()
}
