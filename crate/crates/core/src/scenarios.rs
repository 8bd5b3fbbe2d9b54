//! Ready-made targets, analyzers and grids for the standard benchmark scenarios.

use crate::ffc_core::uniform_grid;
use crate::response_models::{
    AnalyzerMode, AnalyzerSpec, CavityTwoLevel, ResonanceLine, TargetModel,
};
use crate::two_stage::TimeGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Positive line positions of α-⁵⁷Fe in γ: Δm = ±1 inner, Δm = 0, Δm = ±1 outer.
pub const FE57_LINES: [f64; 3] = [8.7596, 32.0605, 55.3406];

/// Total thickness parameter of the 2 µm α-⁵⁷Fe foil.
pub const FE57_FOIL_B: f64 = 8.37;

/// Stainless-steel analyzer thickness: (γ_a + b_a)/2 = 1.67.
pub const STAINLESS_B_A: f64 = 2.34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SextetWeights {
    /// Equal b for all six lines.
    #[default]
    Equal,
    /// Clebsch–Gordan strengths 3:2:1 summed over polarization, split into a
    /// σ channel (outer and inner lines) and a π channel (middle lines).
    SumRule,
}

/// Six-line target: channel 0 holds ±55.34 and ±8.76, channel 1 holds ±32.06.
/// `b_total` is the thickness per polarization channel, so Σ b_j = 2·b_total.
pub fn fe57_sextet(b_total: f64, weights: SextetWeights) -> TargetModel {
    let [inner, middle, outer] = FE57_LINES;
    let (bo, bm, bi) = match weights {
        SextetWeights::Equal => (b_total / 3.0, b_total / 3.0, b_total / 3.0),
        SextetWeights::SumRule => (3.0 / 8.0 * b_total, 0.5 * b_total, 1.0 / 8.0 * b_total),
    };
    let lines = vec![
        ResonanceLine::new(-outer, bo, 1.0, 0),
        ResonanceLine::new(-inner, bi, 1.0, 0),
        ResonanceLine::new(inner, bi, 1.0, 0),
        ResonanceLine::new(outer, bo, 1.0, 0),
        ResonanceLine::new(-middle, bm, 1.0, 1),
        ResonanceLine::new(middle, bm, 1.0, 1),
    ];
    TargetModel::MultiLineThick {
        lines,
        alpha_t: Complex64::new(1.0, 0.0),
        channel_weights: vec![0.5, 0.5],
    }
}

pub fn stainless_analyzer() -> AnalyzerSpec {
    AnalyzerSpec::new(STAINLESS_B_A, AnalyzerMode::ExactBessel)
}

pub fn single_line(b_t: f64) -> TargetModel {
    TargetModel::SingleLineThick {
        line: ResonanceLine::new(0.0, b_t, 1.0, 0),
    }
}

/// Cavity with κ = 1, κ_R = 0.8 whose collective coupling follows
/// γ_s/2 − iΔ_CLS = g/(κ + iΔ_c).
pub fn cavity_at(delta_c: f64, g: f64) -> CavityTwoLevel {
    let (kappa, kappa_r) = (1.0, 0.8);
    let d = kappa * kappa + delta_c * delta_c;
    CavityTwoLevel {
        kappa,
        kappa_r,
        delta_c,
        gamma: 1.0,
        gamma_s: 2.0 * g * kappa / d,
        delta_cls: g * delta_c / d,
        omega_t: 0.0,
    }
}

/// Cavity detunings of the standard scan; with g = 10 they span Δ_CLS ∈ [−5, 5]
/// and γ_s ∈ [0.77, 20].
pub const CAVITY_SCAN_DELTA_C: [f64; 11] =
    [-5.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0];
pub const CAVITY_SCAN_G: f64 = 10.0;

/// Grids used for the sextet, thickness and cavity scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrids {
    pub time: TimeGrid,
    pub deltas: Vec<f64>,
    pub nus: Vec<f64>,
}

pub fn standard_grids() -> ScanGrids {
    ScanGrids {
        time: TimeGrid {
            t0: 0.0,
            dt: 0.01,
            n: 2500,
        },
        deltas: uniform_grid(0.0, 200.0, 0.5),
        nus: uniform_grid(0.0, 260.0, 0.5),
    }
}
