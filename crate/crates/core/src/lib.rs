//! Adaptation model for a compliant suction-cup stalk.
//!
//! The stalk and suction pad are treated as an L-shaped beam. Pushing the pad
//! onto an inclined surface loads the stalk tip with a force `F` opposing the
//! stalk axis and a moment `F·R` through the pad radius. The
//! [`elastica`] module solves the resulting large-deflection shape,
//! [`alpha`] finds the normalized load that tilts the tip to a surface angle,
//! [`force`] converts that load to newtons through a calibrated `EI`, and
//! [`experiment`] reduces adaptation and bending test logs for comparison.

pub mod alpha;
pub mod cli;
pub mod collocation;
pub mod elastica;
pub mod experiment;
pub mod force;
pub mod roots;

pub use alpha::{generate_alpha_table, linearized_alpha, solve_alpha_for_angle, AlphaResult, AlphaTableRow};
pub use collocation::solve_shape_oracle;
pub use elastica::{
    centerline, integrate_elastica_ivp, polyline_length, solve_shape_shooting, BeamGeometry, ElasticaSolution,
    NormalizedLoad, Point, SolveError, SolverConfig,
};
pub use force::{
    alpha_to_force, calibrate_ei, force_to_alpha, predict_force_curve, AdaptationPrediction,
    CalibrationError, PredictionRow, StiffnessCalibration,
};
pub use experiment::AnalysisError;
