//! Parameter and response recovery from FFC spectra.

pub mod cut;
pub mod diagonal;
pub mod lsq;
pub mod models;
pub mod peaks;
pub mod pipeline;
pub mod response;

pub use cut::{take_cut, Axis, Component, Cut};
pub use diagonal::{cluster, fit_diagonal, optimize_fit_range, FitKind, FitParam, FitReport};
pub use lsq::{gauss_newton, LsqOptions, LsqResult};
pub use models::{cavity_model, fit_cavity_model, fit_thick_model, thick_model, CavityFitOptions};
pub use peaks::{find_peaks, local_maxima, prominence, Peak, PeakMode};
pub use pipeline::{
    diagonal_lines_horizontal, diagonal_lines_vertical, extract_collective_params, nearest_line,
    thickness_recovery, CavityScanOptions, CollectiveParams, DiagonalOptions, LineEstimate,
    ThicknessOptions, ThicknessRecovery,
};
pub use response::{
    late_time_integrate, normalized_shape_mismatch, quantum_beat_lines, reconstruct_response,
    row_profile, row_prominence, unwrap_phase, Reconstruction,
};
