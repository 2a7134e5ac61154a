use serde::Serialize;

use super::{AnalysisError, TrialRecord};
use crate::force::AdaptationPrediction;

/// Sits between the self-jamming plateau (about −8 kPa) and the attached
/// plateau (about −60 kPa).
pub const DEFAULT_ATTACHMENT_THRESHOLD: f64 = -50.0;

/// Surface angles closer than this (radians) are the same test angle.
const ANGLE_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttachmentEvent {
    pub sample_index: usize,
    pub time: f64,
    pub pressure: f64,
}

/// First sample whose pressure is at or below `threshold` (kPa).
pub fn detect_attachment(record: &TrialRecord, threshold: f64) -> Option<AttachmentEvent> {
    record
        .samples()
        .iter()
        .enumerate()
        .find(|(_, s)| s.pressure <= threshold)
        .map(|(sample_index, s)| AttachmentEvent { sample_index, time: s.time, pressure: s.pressure })
}

/// Peak force up to and including the attachment sample. Later samples are
/// ignored since the tester then carries the surface weight.
pub fn adaptation_force(record: &TrialRecord, event: &AttachmentEvent) -> Result<f64, AnalysisError> {
    let samples = record.samples();
    if event.sample_index >= samples.len() {
        return Err(AnalysisError::Domain(format!(
            "attachment index {} out of bounds for {} samples",
            event.sample_index,
            samples.len()
        )));
    }
    Ok(samples[..=event.sample_index].iter().map(|s| s.force).fold(f64::NEG_INFINITY, f64::max))
}

/// Force at a tip deflection (m), linearly interpolated along the log.
pub fn stiffness_at_deflection(record: &TrialRecord, deflection: f64) -> Result<f64, AnalysisError> {
    let samples = record.samples();
    let (min, max) = samples
        .iter()
        .map(|s| s.displacement())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)));
    let out_of_range = AnalysisError::Range { requested: deflection, min, max };
    if !(min..=max).contains(&deflection) {
        return Err(out_of_range);
    }
    if let Some(s) = samples.iter().find(|s| s.displacement() == deflection) {
        return Ok(s.force);
    }
    samples
        .windows(2)
        .find_map(|w| {
            let (d0, d1) = (w[0].displacement(), w[1].displacement());
            let inside = (d0 < deflection && deflection < d1) || (d1 < deflection && deflection < d0);
            inside.then(|| w[0].force + (w[1].force - w[0].force) * (deflection - d0) / (d1 - d0))
        })
        .ok_or(out_of_range)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleRow {
    /// Radians.
    pub angle: f64,
    /// At least one repetition attached.
    pub attached: bool,
    /// Mean over attached repetitions.
    pub adaptation_force: Option<f64>,
    /// Per-repetition forces, attached ones ascending, then non-attached.
    pub repetition_forces: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptationSummary {
    pub scenario: String,
    pub ultimate_angle: Option<f64>,
    pub force_at_ultimate: Option<f64>,
    pub angles: Vec<AngleRow>,
    /// Trials dropped for violating the vacuum sign convention.
    pub skipped_invalid: usize,
}

/// Per-angle attachment and force summary of one scenario's trials. The
/// result does not depend on the order of `trials`.
pub fn summarize_scenario(trials: &[TrialRecord], threshold: f64) -> Result<AdaptationSummary, AnalysisError> {
    let first = trials
        .first()
        .ok_or_else(|| AnalysisError::Validation("no trials to summarize".into()))?;
    let scenario = first.scenario.clone();

    let mut outcomes: Vec<(f64, Option<f64>)> = Vec::with_capacity(trials.len());
    let mut skipped_invalid = 0;
    for t in trials {
        if t.scenario != scenario {
            return Err(AnalysisError::Validation(format!(
                "mixed scenarios `{}` and `{}`",
                scenario, t.scenario
            )));
        }
        let angle = t.surface_angle.ok_or_else(|| {
            AnalysisError::Validation(format!("trial of `{}` has no surface angle", t.scenario))
        })?;
        if !t.is_valid() {
            skipped_invalid += 1;
            continue;
        }
        let force = detect_attachment(t, threshold).map(|e| adaptation_force(t, &e)).transpose()?;
        outcomes.push((angle, force));
    }
    outcomes.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then_with(|| match (a.1, b.1) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        })
    });

    let mut angles: Vec<AngleRow> = Vec::new();
    for (angle, force) in outcomes {
        match angles.last_mut() {
            Some(row) if (angle - row.angle).abs() <= ANGLE_MATCH => row.repetition_forces.push(force),
            _ => angles.push(AngleRow {
                angle,
                attached: false,
                adaptation_force: None,
                repetition_forces: vec![force],
            }),
        }
    }
    for row in &mut angles {
        let attached: Vec<f64> = row.repetition_forces.iter().flatten().copied().collect();
        row.attached = !attached.is_empty();
        row.adaptation_force = row.attached.then(|| attached.iter().sum::<f64>() / attached.len() as f64);
    }

    let ultimate = angles.iter().rev().find(|r| r.attached);
    Ok(AdaptationSummary {
        ultimate_angle: ultimate.map(|r| r.angle),
        force_at_ultimate: ultimate.and_then(|r| r.adaptation_force),
        scenario,
        angles,
        skipped_invalid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub angle: f64,
    pub measured: f64,
    pub predicted: f64,
    /// `predicted − measured`, N.
    pub absolute_residual: f64,
    /// `(predicted − measured) / measured`; absent for a zero measurement.
    pub relative_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub scenario: String,
    pub rows: Vec<ResidualRow>,
    pub mean_absolute_relative_error: Option<f64>,
}

/// Measured adaptation force against theory at every attached angle.
pub fn compare_theory(
    summary: &AdaptationSummary,
    predictions: &[AdaptationPrediction],
) -> Result<ComparisonReport, AnalysisError> {
    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for row in summary.angles.iter().filter(|r| r.attached) {
        let Some(measured) = row.adaptation_force else { continue };
        match predictions.iter().find(|p| (p.surface_angle - row.angle).abs() <= ANGLE_MATCH) {
            Some(p) => rows.push(ResidualRow {
                angle: row.angle,
                measured,
                predicted: p.force,
                absolute_residual: p.force - measured,
                relative_residual: (measured != 0.0).then(|| (p.force - measured) / measured),
            }),
            None => missing.push(row.angle),
        }
    }
    if !missing.is_empty() {
        return Err(AnalysisError::Coverage { missing });
    }
    let rel: Vec<f64> = rows.iter().filter_map(|r| r.relative_residual).map(f64::abs).collect();
    let mean_absolute_relative_error = (!rel.is_empty()).then(|| rel.iter().sum::<f64>() / rel.len() as f64);
    Ok(ComparisonReport { scenario: summary.scenario.clone(), rows, mean_absolute_relative_error })
}
