//! Simulation and analysis of time- and frequency-resolved nuclear resonant
//! scattering through frequency-frequency correlation (FFC) spectra.
//!
//! Frequencies are in units of the single-nucleus line width γ and times in 1/γ.

pub mod analysis;
pub mod error;
pub mod ffc_core;
pub mod oracle;
pub mod response_models;
pub mod scenarios;
pub mod special;
pub mod two_stage;
pub mod units;

pub use error::{NrsError, Result};
pub use ffc_core::{
    background_correct_subtract, background_corrected_intensity, background_estimate_from_ffc,
    default_nu0, ffc_trace, ffc_transform, ffc_transform_negative, gate_filter, phase_combined_ffc,
    phase_combined_from_intensity, uniform_grid, FFCSpectrum, Gate, PhaseVariant, Provenance,
};
pub use num_complex::Complex64;
pub use response_models::{
    analyzer_time_response, cavity_frequency_response, cavity_time_response,
    multiline_time_response, nfs_frequency_response, nfs_time_response, AnalyzerMode, AnalyzerSpec,
    CavityTwoLevel, ResonanceLine, Tabulated, TargetModel,
};
pub use two_stage::{
    analyzer_only_intensity, intensity, phase_difference_spectra, radiative_coupling,
    scan_detuning, target_only_intensity, two_stage_field, ChannelParts, FieldTrace, IntensityKind,
    Ordering, PhaseCombo, PreparedTarget, TailHint, TimeFreqIntensity, TimeGrid,
};
pub use units::{thickness_param, Units};
