//! Reduction of adaptation and bending test logs.

mod analysis;
mod trial;

pub use analysis::{
    adaptation_force, compare_theory, detect_attachment, stiffness_at_deflection,
    summarize_scenario, AdaptationSummary, AngleRow, AttachmentEvent, ComparisonReport,
    ResidualRow, DEFAULT_ATTACHMENT_THRESHOLD,
};
pub use trial::{
    parse_bending, parse_manifest, parse_trial, sniff_layout, write_trial, DataLayout,
    ManifestEntry, Sample, TrialRecord, BENDING_HEADER, MANIFEST_HEADER, TRIAL_HEADER,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Domain(String),
    #[error("deflection {requested} m outside recorded range [{min}, {max}] m")]
    Range { requested: f64, min: f64, max: f64 },
    #[error("predictions do not cover angles (deg): {}", fmt_degrees(.missing))]
    Coverage { missing: Vec<f64> },
}

fn fmt_degrees(angles: &[f64]) -> String {
    angles.iter().map(|a| format!("{}", a.to_degrees())).collect::<Vec<_>>().join(", ")
}
