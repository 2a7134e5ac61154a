//! Reading and writing tensile-tester logs.
//!
//! Trial files are comma separated with the header
//! `time_s,force_N,displacement_mm,pressure_kPa`; bending files use
//! `deflection_mm,force_N`. Lines starting with `#` are comments.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::AnalysisError;

pub const TRIAL_HEADER: [&str; 4] = ["time_s", "force_N", "displacement_mm", "pressure_kPa"];
pub const BENDING_HEADER: [&str; 2] = ["deflection_mm", "force_N"];
pub const MANIFEST_HEADER: [&str; 3] = ["file", "scenario", "angle_deg"];

/// One logged sample. Displacement is kept as logged (mm) so records write
/// back bit-exactly; use [`Sample::displacement`] for meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub time: f64,
    pub force: f64,
    pub displacement_mm: f64,
    /// Relative pressure, kPa (vacuum is negative).
    pub pressure: f64,
}

impl Sample {
    pub fn displacement(&self) -> f64 {
        self.displacement_mm * 1e-3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub scenario: String,
    /// Surface angle in radians, absent for bending trials.
    pub surface_angle: Option<f64>,
    samples: Vec<Sample>,
}

impl TrialRecord {
    /// Builds a record, checking that time strictly increases and at least
    /// one sample exists.
    pub fn new(
        scenario: impl Into<String>,
        surface_angle: Option<f64>,
        samples: Vec<Sample>,
    ) -> Result<Self, AnalysisError> {
        if samples.is_empty() {
            return Err(AnalysisError::Validation("trial has no samples".into()));
        }
        if let Some(i) = samples.windows(2).position(|w| !(w[1].time > w[0].time)) {
            return Err(AnalysisError::Validation(format!(
                "time is not strictly increasing at sample {} ({} -> {})",
                i + 1,
                samples[i].time,
                samples[i + 1].time
            )));
        }
        Ok(Self { scenario: scenario.into(), surface_angle, samples })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// False when any pressure is above ambient, which breaks the vacuum
    /// sign convention.
    pub fn is_valid(&self) -> bool {
        self.samples.iter().all(|s| s.pressure <= 0.0)
    }
}

fn reader(input: impl Read) -> csv::Reader<impl Read> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

/// Reads numeric rows under an exact header, returning `(line, values)`.
fn read_table<const N: usize>(
    input: impl Read,
    header: [&str; N],
) -> Result<Vec<(u64, [f64; N])>, AnalysisError> {
    let mut rdr = reader(input);
    let mut records = rdr.records();
    let first = records
        .next()
        .ok_or_else(|| AnalysisError::Parse { line: 1, message: "missing header".into() })?
        .map_err(csv_error)?;
    let line = first.position().map_or(1, |p| p.line());
    if first.iter().ne(header.iter().copied()) {
        return Err(AnalysisError::Parse {
            line,
            message: format!("expected header `{}`, found `{}`", header.join(","), first.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != N {
            return Err(AnalysisError::Parse {
                line,
                message: format!("expected {N} fields, found {}", rec.len()),
            });
        }
        let mut values = [0.0; N];
        for (k, (field, name)) in rec.iter().zip(header).enumerate() {
            values[k] = field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                AnalysisError::Parse { line, message: format!("invalid {name} value `{field}`") }
            })?;
        }
        rows.push((line, values));
    }
    Ok(rows)
}

fn csv_error(e: csv::Error) -> AnalysisError {
    let line = e.position().map_or(0, |p| p.line());
    AnalysisError::Parse { line, message: e.to_string() }
}

pub fn parse_trial(
    input: impl Read,
    scenario: impl Into<String>,
    surface_angle: Option<f64>,
) -> Result<TrialRecord, AnalysisError> {
    let samples = read_table(input, TRIAL_HEADER)?
        .into_iter()
        .map(|(_, [time, force, displacement_mm, pressure])| Sample { time, force, displacement_mm, pressure })
        .collect();
    TrialRecord::new(scenario, surface_angle, samples)
}

/// Writes a record in the trial format. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_trial(record: &TrialRecord, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", TRIAL_HEADER.join(","))?;
    for s in record.samples() {
        writeln!(out, "{:?},{:?},{:?},{:?}", s.time, s.force, s.displacement_mm, s.pressure)?;
    }
    Ok(())
}

/// `(deflection m, force N)` pairs from a bending file.
pub fn parse_bending(input: impl Read) -> Result<Vec<(f64, f64)>, AnalysisError> {
    Ok(read_table(input, BENDING_HEADER)?.into_iter().map(|(_, [d, f])| (d * 1e-3, f)).collect())
}

/// Which of the two data layouts a file uses, judged from its header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataLayout {
    Trial,
    Bending,
}

pub fn sniff_layout(text: &str) -> Option<DataLayout> {
    let header = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'))?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    if fields == TRIAL_HEADER {
        Some(DataLayout::Trial)
    } else if fields == BENDING_HEADER {
        Some(DataLayout::Bending)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub file: PathBuf,
    pub scenario: String,
    pub angle_deg: f64,
}

/// Parses a manifest `file,scenario,angle_deg`; relative paths resolve
/// against `base_dir`.
pub fn parse_manifest(input: impl Read, base_dir: &Path) -> Result<Vec<ManifestEntry>, AnalysisError> {
    let mut rdr = reader(input);
    let mut entries = Vec::new();
    let mut header_seen = false;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if !header_seen {
            if rec.iter().ne(MANIFEST_HEADER.iter().copied()) {
                return Err(AnalysisError::Parse {
                    line,
                    message: format!("expected header `{}`", MANIFEST_HEADER.join(",")),
                });
            }
            header_seen = true;
            continue;
        }
        if rec.len() != 3 {
            return Err(AnalysisError::Parse { line, message: format!("expected 3 fields, found {}", rec.len()) });
        }
        let angle_deg = rec[2].parse::<f64>().ok().filter(|a| a.is_finite()).ok_or_else(|| {
            AnalysisError::Parse { line, message: format!("invalid angle_deg `{}`", &rec[2]) }
        })?;
        entries.push(ManifestEntry {
            file: base_dir.join(&rec[0]),
            scenario: rec[1].to_string(),
            angle_deg,
        });
    }
    if !header_seen {
        return Err(AnalysisError::Parse { line: 1, message: "missing header".into() });
    }
    Ok(entries)
}
