//! Batch command-line front end.
//!
//! Angles are given in degrees and lengths in millimeters; everything is
//! converted to radians and meters before reaching the library. Output rows
//! report angles in degrees, forces in N, lengths in m and `EI` in N·m².

mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use output::{sig6, Format, OutputDocument, SCHEMA_VERSION};

use crate::experiment::{
    self, parse_bending, parse_manifest, parse_trial, sniff_layout, AdaptationSummary,
    AnalysisError, DataLayout, Sample, TrialRecord, DEFAULT_ATTACHMENT_THRESHOLD,
};
use crate::force::{self, CalibrationError, StiffnessCalibration};
use crate::{alpha, collocation, elastica};
use crate::elastica::{BeamGeometry, NormalizedLoad, SolveError, SolverConfig};

pub const DEFAULT_RADIUS_RATIO: f64 = 0.5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    InFile { path: PathBuf, source: Box<CliError> },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

fn in_file(path: &Path) -> impl FnOnce(CliError) -> CliError + '_ {
    move |e| CliError::InFile { path: path.to_path_buf(), source: Box::new(e) }
}

#[derive(Debug, Parser)]
#[command(name = "stalk-adapt", version, about = "Suction-cup stalk adaptation: elastica solver, calibration and test-log analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Required α over a range of surface angles
    AlphaTable(AlphaTableArgs),
    /// Required α for one surface angle
    Solve(SolveArgs),
    /// Deformed centerline for a load or surface angle
    Shape(ShapeArgs),
    /// Flexural rigidity from a bending test
    Calibrate(CalibrateArgs),
    /// Adaptation force over surface angles
    PredictForce(PredictArgs),
    /// Attachment, adaptation force and ultimate angle per scenario
    Analyze(AnalyzeArgs),
    /// Measured adaptation force against theory
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
struct GeometryArgs {
    /// Stalk length L
    #[arg(long, default_value_t = 20.0, value_parser = positive)]
    length_mm: f64,
    /// Pad radius over stalk length, R/L [default: 0.5]
    #[arg(long, value_parser = non_negative, conflicts_with = "pad_radius_mm")]
    radius_ratio: Option<f64>,
    /// Suction pad radius R (alternative to --radius-ratio)
    #[arg(long, value_parser = non_negative)]
    pad_radius_mm: Option<f64>,
}

impl GeometryArgs {
    fn resolve(&self) -> Result<BeamGeometry, SolveError> {
        let l = self.length_mm * 1e-3;
        match self.pad_radius_mm {
            Some(r) => BeamGeometry::new(l, r * 1e-3),
            None => BeamGeometry::with_ratio(l, self.radius_ratio.unwrap_or(DEFAULT_RADIUS_RATIO)),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(16..))]
    grid_points: u32,
    /// Upper bound of the α search
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    alpha_max: f64,
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    boundary_tolerance: f64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    max_iterations: u32,
}

impl SolverArgs {
    fn resolve(&self) -> SolverConfig {
        SolverConfig {
            grid_points: self.grid_points as usize,
            boundary_tolerance: self.boundary_tolerance,
            max_iterations: self.max_iterations as usize,
            alpha_bracket_max: self.alpha_max,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
struct FormatArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
struct StiffnessSource {
    /// Bending test file (`deflection_mm,force_N` or trial layout)
    #[arg(long)]
    bending: Option<PathBuf>,
    /// Known flexural rigidity EI
    #[arg(long, value_parser = positive)]
    ei_nm2: Option<f64>,
}

#[derive(Debug, Args)]
struct AlphaTableArgs {
    /// Angles in degrees, `start:stop:step` (inclusive) or a comma list
    #[arg(long, default_value = "0:75:15", value_parser = parse_angles)]
    angles: AngleList,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma_deg: f64,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Method {
    Shooting,
    Oracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Shooting => "shooting",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("load").required(true).args(["alpha", "gamma_deg"])))]
struct ShapeArgs {
    /// Normalized load α
    #[arg(long, value_parser = non_negative)]
    alpha: Option<f64>,
    /// Surface angle to conform to
    #[arg(long, allow_negative_numbers = true)]
    gamma_deg: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Shooting)]
    method: Method,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 20.0, value_parser = positive)]
    length_mm: f64,
    /// Label carried into outputs [default: input file stem]
    #[arg(long)]
    label: Option<String>,
    /// Also report the force at this tip deflection
    #[arg(long, value_parser = non_negative)]
    at_deflection_mm: Option<f64>,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long, default_value = "15:75:15", value_parser = parse_angles)]
    angles: AngleList,
    #[command(flatten)]
    stiffness: StiffnessSource,
    #[arg(long)]
    label: Option<String>,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("trials").required(true).args(["manifest", "input"])))]
struct TrialSource {
    /// Manifest listing `file,scenario,angle_deg`
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Single trial file (needs --scenario and --angle-deg)
    #[arg(long, requires_all = ["scenario", "angle_deg"])]
    input: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    angle_deg: Option<f64>,
    /// Attachment is the first sample at or below this pressure
    #[arg(long, default_value_t = DEFAULT_ATTACHMENT_THRESHOLD, allow_negative_numbers = true, value_parser = negative)]
    threshold_kpa: f64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    trials: TrialSource,
    /// One row per (scenario, angle) instead of one per scenario
    #[arg(long)]
    per_angle: bool,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    trials: TrialSource,
    #[command(flatten)]
    stiffness: StiffnessSource,
    #[arg(long)]
    label: Option<String>,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: FormatArgs,
}

#[derive(Debug, Clone, PartialEq)]
struct AngleList(Vec<f64>);

fn parse_angles(s: &str) -> Result<AngleList, String> {
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("invalid number `{t}`"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) || stop < start {
                return Err("range must be start:stop:step with step > 0 and stop >= start".into());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok(AngleList((0..=n).map(|i| start + i as f64 * step).collect()))
        }
        [_] if s.trim().is_empty() => Ok(AngleList(Vec::new())),
        [_] => s.split(',').map(num).collect::<Result<_, _>>().map(AngleList),
        _ => Err("expected start:stop:step or a comma list".into()),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("expected a non-negative number, got `{s}`")),
    }
}

fn negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v < 0.0 => Ok(v),
        _ => Err(format!("expected a negative pressure, got `{s}`")),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run one command; `argv[0]` is the program name.
pub fn execute<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = e.exit_code();
            let text = e.render().to_string();
            return if status == 0 {
                Execution { status, stdout: text, stderr: String::new() }
            } else {
                Execution { status, stdout: String::new(), stderr: text }
            };
        }
    };
    let (result, format) = match &cli.command {
        Command::AlphaTable(a) => (alpha_table(a), a.out.format),
        Command::Solve(a) => (solve(a), a.out.format),
        Command::Shape(a) => (shape(a), a.out.format),
        Command::Calibrate(a) => (calibrate(a), a.out.format),
        Command::PredictForce(a) => (predict_force(a), a.out.format),
        Command::Analyze(a) => (analyze(a), a.out.format),
        Command::Compare(a) => (compare(a), a.out.format),
    };
    match result {
        Ok(doc) => Execution { status: 0, stdout: doc.render(format), stderr: String::new() },
        Err(e) => Execution { status: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn echo_geometry(doc: &mut OutputDocument, g: &BeamGeometry) {
    doc.param("stalk_length", g.stalk_length())
        .param("pad_radius", g.pad_radius())
        .param("radius_ratio", g.radius_ratio());
}

fn echo_solver(doc: &mut OutputDocument, c: &SolverConfig) {
    doc.param("grid_points", c.grid_points as u64)
        .param("boundary_tolerance", c.boundary_tolerance)
        .param("max_iterations", c.max_iterations as u64)
        .param("alpha_bracket_max", c.alpha_bracket_max)
        .param("angle_tolerance", c.angle_tolerance);
}

fn echo_units(doc: &mut OutputDocument) {
    doc.param("angle_unit", "deg").param("length_unit", "m").param("force_unit", "N");
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("rows are objects"),
    }
}

fn alpha_row(surface_angle: f64, result: &Result<alpha::AlphaResult, SolveError>) -> Map<String, Value> {
    match result {
        Ok(r) => object(json!({
            "surface_angle": surface_angle.to_degrees(),
            "alpha": r.alpha,
            "tip_angle_achieved": r.tip_angle_achieved.to_degrees(),
            "outer_iterations": r.outer_iterations,
            "initial_slope": r.inner_solution.initial_slope(),
            "boundary_residual": r.inner_solution.boundary_residual(),
            "error": Value::Null,
        })),
        Err(e) => object(json!({
            "surface_angle": surface_angle.to_degrees(),
            "alpha": Value::Null,
            "tip_angle_achieved": Value::Null,
            "outer_iterations": Value::Null,
            "initial_slope": Value::Null,
            "boundary_residual": Value::Null,
            "error": e.to_string(),
        })),
    }
}

fn alpha_table(a: &AlphaTableArgs) -> Result<OutputDocument, CliError> {
    let geometry = a.geometry.resolve()?;
    let config = a.solver.resolve();
    config.validate()?;
    let mut doc = OutputDocument::new("alpha-table");
    doc.param("angles", a.angles.0.clone());
    echo_geometry(&mut doc, &geometry);
    echo_solver(&mut doc, &config);
    echo_units(&mut doc);

    let radians: Vec<f64> = a.angles.0.iter().map(|d| d.to_radians()).collect();
    for row in alpha::generate_alpha_table(&radians, &geometry, &config) {
        if let Err(e) = &row.result {
            doc.warnings.push(format!("{} deg: {e}", sig6(row.surface_angle.to_degrees())));
        }
        doc.rows.push(alpha_row(row.surface_angle, &row.result));
    }
    Ok(doc)
}

fn solve(a: &SolveArgs) -> Result<OutputDocument, CliError> {
    let geometry = a.geometry.resolve()?;
    let config = a.solver.resolve();
    let mut doc = OutputDocument::new("solve");
    doc.param("gamma", a.gamma_deg);
    echo_geometry(&mut doc, &geometry);
    echo_solver(&mut doc, &config);
    echo_units(&mut doc);
    let gamma = a.gamma_deg.to_radians();
    let result = alpha::solve_alpha_for_angle(gamma, &geometry, &config)?;
    doc.rows.push(alpha_row(gamma, &Ok(result)));
    Ok(doc)
}

fn shape(a: &ShapeArgs) -> Result<OutputDocument, CliError> {
    let geometry = a.geometry.resolve()?;
    let config = a.solver.resolve();
    let mut doc = OutputDocument::new("shape");
    let alpha = match (a.alpha, a.gamma_deg) {
        (Some(alpha), _) => {
            doc.param("alpha", alpha);
            alpha
        }
        (None, Some(g)) => {
            doc.param("gamma", g);
            alpha::solve_alpha_for_angle(g.to_radians(), &geometry, &config)?.alpha
        }
        (None, None) => unreachable!("clap requires one of --alpha/--gamma-deg"),
    };
    doc.param("method", a.method.name());
    echo_geometry(&mut doc, &geometry);
    echo_solver(&mut doc, &config);
    doc.param("angle_unit", "deg").param("coordinate_unit", "stalk length");

    let load = NormalizedLoad::adaptation(alpha)?;
    let solution = match a.method {
        Method::Shooting => elastica::solve_shape_shooting(&load, &geometry, &config)?,
        Method::Oracle => collocation::solve_shape_oracle(&load, &geometry, &config)?,
    };
    doc.param("solved_alpha", alpha)
        .param("tip_angle", solution.tip_angle().to_degrees())
        .param("initial_slope", solution.initial_slope())
        .param("boundary_residual", solution.boundary_residual());
    let points = elastica::centerline(&solution);
    for (i, (theta, p)) in solution.theta_samples().iter().zip(&points).enumerate() {
        doc.rows.push(object(json!({
            "s": solution.arc_length_at(i),
            "theta": theta.to_degrees(),
            "x": p.x,
            "y": p.y,
        })));
    }
    Ok(doc)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn file_label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Bending data as a trial record (trial files as-is, bending files with
/// their row index as time and ambient pressure).
fn load_bending(path: &Path) -> Result<TrialRecord, CliError> {
    let text = read_text(path)?;
    let label = file_label(path);
    let record = match sniff_layout(&text) {
        Some(DataLayout::Trial) => parse_trial(text.as_bytes(), label, None),
        Some(DataLayout::Bending) => parse_bending(text.as_bytes()).and_then(|pairs| {
            let samples = pairs
                .iter()
                .enumerate()
                .map(|(i, &(d, f))| Sample { time: i as f64, force: f, displacement_mm: d * 1e3, pressure: 0.0 })
                .collect();
            TrialRecord::new(label, None, samples)
        }),
        None => Err(AnalysisError::Parse {
            line: 1,
            message: "unrecognized header; expected a bending or trial file".into(),
        }),
    };
    record.map_err(|e| in_file(path)(e.into()))
}

fn calibration_from_file(path: &Path, geometry: &BeamGeometry, label: String) -> Result<StiffnessCalibration, CliError> {
    let record = load_bending(path)?;
    let samples: Vec<(f64, f64)> = record
        .samples()
        .iter()
        .filter(|s| s.displacement_mm >= 0.0)
        .map(|s| (s.displacement(), s.force))
        .collect();
    force::calibrate_ei(&samples, geometry, label).map_err(|e| in_file(path)(e.into()))
}

fn resolve_stiffness(
    src: &StiffnessSource,
    label: &Option<String>,
    geometry: &BeamGeometry,
) -> Result<StiffnessCalibration, CliError> {
    match (&src.bending, src.ei_nm2) {
        (Some(path), _) => {
            let label = label.clone().unwrap_or_else(|| file_label(path));
            calibration_from_file(path, geometry, label)
        }
        (None, Some(ei)) => {
            let label = label.clone().unwrap_or_else(|| "given EI".into());
            Ok(StiffnessCalibration::from_flexural_rigidity(ei, geometry, label)?)
        }
        (None, None) => unreachable!("clap requires a stiffness source"),
    }
}

fn echo_calibration(doc: &mut OutputDocument, c: &StiffnessCalibration) {
    doc.param("source_label", c.source_label.clone())
        .param("flexural_rigidity", c.flexural_rigidity)
        .param("linear_slope", c.linear_slope)
        .param("fit_quality", c.fit_quality);
    doc.warnings.extend(c.warnings.iter().cloned());
}

fn calibrate(a: &CalibrateArgs) -> Result<OutputDocument, CliError> {
    let length = a.length_mm * 1e-3;
    let geometry = BeamGeometry::new(length, 0.0)?;
    let label = a.label.clone().unwrap_or_else(|| file_label(&a.input));
    let cal = calibration_from_file(&a.input, &geometry, label)?;
    let force_at = match a.at_deflection_mm {
        Some(d) => {
            let record = load_bending(&a.input)?;
            Some(experiment::stiffness_at_deflection(&record, d * 1e-3).map_err(|e| in_file(&a.input)(e.into()))?)
        }
        None => None,
    };

    let mut doc = OutputDocument::new("calibrate");
    doc.param("input", a.input.display().to_string())
        .param("stalk_length", length)
        .param("at_deflection", a.at_deflection_mm.map(|d| d * 1e-3))
        .param("length_unit", "m")
        .param("force_unit", "N");
    doc.warnings.extend(cal.warnings.iter().cloned());
    doc.rows.push(object(json!({
        "source_label": cal.source_label,
        "stalk_length": cal.stalk_length,
        "flexural_rigidity": cal.flexural_rigidity,
        "linear_slope": cal.linear_slope,
        "fit_quality": cal.fit_quality,
        "force_at_deflection": force_at,
    })));
    Ok(doc)
}

fn predict_force(a: &PredictArgs) -> Result<OutputDocument, CliError> {
    let geometry = a.geometry.resolve()?;
    let config = a.solver.resolve();
    config.validate()?;
    let cal = resolve_stiffness(&a.stiffness, &a.label, &geometry)?;
    let mut doc = OutputDocument::new("predict-force");
    doc.param("angles", a.angles.0.clone());
    echo_geometry(&mut doc, &geometry);
    echo_solver(&mut doc, &config);
    echo_calibration(&mut doc, &cal);
    echo_units(&mut doc);

    let radians: Vec<f64> = a.angles.0.iter().map(|d| d.to_radians()).collect();
    for row in force::predict_force_curve(&radians, &cal, &geometry, &config) {
        let angle = row.surface_angle.to_degrees();
        doc.rows.push(match row.result {
            Ok(p) => object(json!({"surface_angle": angle, "alpha": p.alpha, "force": p.force, "error": Value::Null})),
            Err(e) => {
                doc.warnings.push(format!("{} deg: {e}", sig6(angle)));
                object(json!({"surface_angle": angle, "alpha": Value::Null, "force": Value::Null, "error": e.to_string()}))
            }
        });
    }
    Ok(doc)
}

/// Trials grouped by scenario, in order of first appearance.
fn load_trials(src: &TrialSource) -> Result<Vec<(String, Vec<TrialRecord>)>, CliError> {
    let entries: Vec<(PathBuf, String, f64)> = match (&src.manifest, &src.input) {
        (Some(m), _) => {
            let text = read_text(m)?;
            let base = m.parent().unwrap_or(Path::new("."));
            parse_manifest(text.as_bytes(), base)
                .map_err(|e| in_file(m)(e.into()))?
                .into_iter()
                .map(|e| (e.file, e.scenario, e.angle_deg))
                .collect()
        }
        (None, Some(input)) => vec![(
            input.clone(),
            src.scenario.clone().expect("clap requires --scenario"),
            src.angle_deg.expect("clap requires --angle-deg"),
        )],
        (None, None) => unreachable!("clap requires a trial source"),
    };
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<TrialRecord>> = BTreeMap::new();
    for (path, scenario, angle_deg) in entries {
        if !(0.0..=90.0).contains(&angle_deg) {
            return Err(CliError::Input(format!("{}: angle {angle_deg} deg outside [0, 90]", path.display())));
        }
        let text = read_text(&path)?;
        let record = parse_trial(text.as_bytes(), scenario.clone(), Some(angle_deg.to_radians()))
            .map_err(|e| in_file(&path)(e.into()))?;
        if !groups.contains_key(&scenario) {
            order.push(scenario.clone());
        }
        groups.entry(scenario).or_default().push(record);
    }
    Ok(order.into_iter().map(|s| { let t = groups.remove(&s).unwrap_or_default(); (s, t) }).collect())
}

fn summaries(src: &TrialSource, doc: &mut OutputDocument) -> Result<Vec<AdaptationSummary>, CliError> {
    let mut out = Vec::new();
    for (scenario, trials) in load_trials(src)? {
        let summary = experiment::summarize_scenario(&trials, src.threshold_kpa)?;
        if summary.skipped_invalid > 0 {
            doc.warnings.push(format!(
                "{scenario}: skipped {} trial(s) with positive pressure",
                summary.skipped_invalid
            ));
        }
        out.push(summary);
    }
    Ok(out)
}

fn echo_trials(doc: &mut OutputDocument, src: &TrialSource) {
    doc.param("manifest", src.manifest.as_ref().map(|p| p.display().to_string()))
        .param("input", src.input.as_ref().map(|p| p.display().to_string()))
        .param("scenario", src.scenario.clone())
        .param("angle", src.angle_deg)
        .param("threshold_kpa", src.threshold_kpa);
}

fn analyze(a: &AnalyzeArgs) -> Result<OutputDocument, CliError> {
    let mut doc = OutputDocument::new("analyze");
    echo_trials(&mut doc, &a.trials);
    doc.param("per_angle", a.per_angle).param("angle_unit", "deg").param("force_unit", "N");
    for s in summaries(&a.trials, &mut doc)? {
        if a.per_angle {
            for row in &s.angles {
                let attached: Vec<f64> = row.repetition_forces.iter().flatten().copied().collect();
                doc.rows.push(object(json!({
                    "scenario": s.scenario,
                    "angle": row.angle.to_degrees(),
                    "attached": row.attached,
                    "adaptation_force": row.adaptation_force,
                    "repetitions": row.repetition_forces.len(),
                    "attached_repetitions": attached.len(),
                    "repetition_forces": row.repetition_forces,
                })));
            }
        } else {
            doc.rows.push(object(json!({
                "scenario": s.scenario,
                "ultimate_angle": s.ultimate_angle.map(f64::to_degrees),
                "force_at_ultimate": s.force_at_ultimate,
                "attached_angles": s.angles.iter().filter(|r| r.attached).count(),
                "tested_angles": s.angles.len(),
            })));
        }
    }
    Ok(doc)
}

fn compare(a: &CompareArgs) -> Result<OutputDocument, CliError> {
    let geometry = a.geometry.resolve()?;
    let config = a.solver.resolve();
    config.validate()?;
    let cal = resolve_stiffness(&a.stiffness, &a.label, &geometry)?;
    let mut doc = OutputDocument::new("compare");
    echo_trials(&mut doc, &a.trials);
    echo_geometry(&mut doc, &geometry);
    echo_solver(&mut doc, &config);
    echo_calibration(&mut doc, &cal);
    echo_units(&mut doc);

    let mut all = summaries(&a.trials, &mut doc)?;
    if let Some(wanted) = &a.trials.scenario {
        all.retain(|s| &s.scenario == wanted);
        if all.is_empty() {
            return Err(CliError::Input(format!("scenario `{wanted}` not found")));
        }
    }
    for summary in all {
        let angles: Vec<f64> = summary.angles.iter().filter(|r| r.attached).map(|r| r.angle).collect();
        let mut predictions = Vec::new();
        for row in force::predict_force_curve(&angles, &cal, &geometry, &config) {
            match row.result {
                Ok(p) => predictions.push(p),
                Err(e) => doc.warnings.push(format!(
                    "{}: {} deg: {e}",
                    summary.scenario,
                    sig6(row.surface_angle.to_degrees())
                )),
            }
        }
        let report = experiment::compare_theory(&summary, &predictions)?;
        for r in &report.rows {
            let alpha = predictions.iter().find(|p| p.surface_angle == r.angle).map(|p| p.alpha);
            doc.rows.push(object(json!({
                "scenario": report.scenario,
                "angle": r.angle.to_degrees(),
                "measured": r.measured,
                "predicted": r.predicted,
                "alpha": alpha,
                "absolute_residual": r.absolute_residual,
                "relative_residual": r.relative_residual,
                "mean_absolute_relative_error": report.mean_absolute_relative_error,
            })));
        }
    }
    Ok(doc)
}
