use nrs_core::analysis::{Axis, CavityScanOptions, Component, DiagonalOptions};
use nrs_core::scenarios::{
    cavity_at, fe57_sextet, single_line, stainless_analyzer, SextetWeights, CAVITY_SCAN_DELTA_C,
    CAVITY_SCAN_G, FE57_FOIL_B, FE57_LINES,
};
use nrs_core::{Complex64, Ordering, PhaseVariant, Tabulated, TargetModel};

use crate::config::*;
use crate::error::CliError;

pub const NAMES: [&str; 7] = [
    "table1_57fe",
    "thickness_scan",
    "cavity_theta_scan",
    "eit_tabulated",
    "gating_20ns",
    "gating_40ns",
    "phase_combos",
];

/// Split frequency of the inverted-sum background for Δ up to 200.
pub const INV_NU0: f64 = 120.0;

fn base(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        units: UnitsConfig::default(),
        time_grid: TimeGridConfig {
            dt: Some(0.01),
            n: 2500,
            ..TimeGridConfig::default()
        },
        deltas: Range::new(0.0, 200.0, 0.5),
        nus: Range::new(0.0, 260.0, 0.5),
        gate: GateConfig::default(),
        ordering: Ordering::AnalyzerFirst,
        mode: SimMode::BackgroundCorrected,
        phases: vec![PhaseVariant::Sa, PhaseVariant::St, PhaseVariant::Inv],
        noise: NoiseConfig::default(),
        analyzer: stainless_analyzer(),
        target: None,
        scan: Vec::new(),
        analysis: AnalysisConfig::default(),
    }
}

fn sextet(name: &str) -> ScenarioConfig {
    let mut c = base(name);
    c.target = Some(fe57_sextet(FE57_FOIL_B, SextetWeights::SumRule));
    c.analysis.expected = FE57_LINES.to_vec();
    c.analysis.cuts = vec![CutSpec {
        axis: Axis::Nu,
        at: 100.0,
        component: Component::Real,
    }];
    c
}

fn gated(name: &str, t1_ns: f64) -> ScenarioConfig {
    let mut c = sextet(name);
    c.gate = GateConfig {
        t1_ns: Some(t1_ns),
        t2_ns: Some(192.0),
        ..GateConfig::default()
    };
    c.nus = Range::new(60.0, 140.0, 0.5);
    c.analysis.kind = AnalysisKind::DiagonalHorizontal;
    c.analysis.diagonal = DiagonalOptions {
        lo: 60.0,
        hi: 140.0,
        ..DiagonalOptions::default()
    };
    c.analysis.cuts = vec![CutSpec {
        axis: Axis::Delta,
        at: 100.0,
        component: Component::Real,
    }];
    c
}

/// Three-level response −A/(Γ₁ − iω + Ω²/(Γ₂ − iω)): a broad line with a
/// narrow transparency window at ω = 0. A cos² taper over 200 < |ω| < 300
/// brings the 1/ω tail to zero at the table ends.
fn eit_table() -> Tabulated {
    let (a, g1, g2, om2) = (10.0, 10.0, 0.5, 16.0);
    let i = Complex64::new(0.0, 1.0);
    let omega_grid: Vec<f64> = (0..=2400).map(|k| -300.0 + 0.25 * k as f64).collect();
    let taper = |w: f64| {
        let x = ((w.abs() - 200.0) / 100.0).clamp(0.0, 1.0);
        (0.5 * std::f64::consts::PI * x).cos().powi(2)
    };
    let s_hat = omega_grid
        .iter()
        .map(|&w| -a * taper(w) / (g1 - i * w + om2 / (g2 - i * w)))
        .collect();
    Tabulated {
        omega_grid,
        s_hat,
        alpha_t: Complex64::new(1.0, 0.0),
    }
}

pub fn preset(name: &str) -> Result<ScenarioConfig, CliError> {
    let c = match name {
        "table1_57fe" => sextet(name),
        "gating_20ns" => gated(name, 20.0),
        "gating_40ns" => gated(name, 40.0),
        "phase_combos" => {
            let mut c = sextet(name);
            c.mode = SimMode::PhaseCombined;
            c.analysis.nu0 = Some(INV_NU0);
            c
        }
        "thickness_scan" => {
            let mut c = base(name);
            c.mode = SimMode::PhaseCombined;
            c.phases = vec![PhaseVariant::Inv];
            c.scan = [0.5, 1.0, 1.5, 2.0, 3.0, 5.0]
                .iter()
                .map(|&b| ScanEntry {
                    tag: format!("b{b}"),
                    target: single_line(b),
                })
                .collect();
            c.analysis.kind = AnalysisKind::Thickness;
            c.analysis.nu0 = Some(INV_NU0);
            c
        }
        "cavity_theta_scan" => {
            let mut c = base(name);
            c.scan = CAVITY_SCAN_DELTA_C
                .iter()
                .map(|&dc| ScanEntry {
                    tag: format!("dc{dc}"),
                    target: TargetModel::CavityTwoLevel(cavity_at(dc, CAVITY_SCAN_G)),
                })
                .collect();
            c.analysis.kind = AnalysisKind::Cavity;
            c.analysis.cavity = CavityScanOptions::default();
            c
        }
        "eit_tabulated" => {
            let mut c = base(name);
            c.deltas = Range::new(0.0, 200.0, 2.0);
            c.target = Some(TargetModel::Tabulated(eit_table()));
            c.analysis.kind = AnalysisKind::Response;
            c.analysis.cuts = vec![CutSpec {
                axis: Axis::Nu,
                at: 100.0,
                component: Component::Real,
            }];
            c
        }
        _ => {
            return Err(CliError::Config(format!(
                "unknown preset {name:?}; available: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves_and_round_trips() {
        for n in NAMES {
            let c = preset(n).unwrap();
            c.resolve().unwrap();
            let back = ScenarioConfig::from_toml(&c.to_toml()).unwrap();
            assert_eq!(back, c, "{n}");
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn gating_edges_in_ns() {
        let r = preset("gating_20ns").unwrap().resolve().unwrap();
        assert!((r.gate.t1 - 0.1428).abs() < 1e-3);
        assert!((r.gate.t2 - 1.371).abs() < 1e-3);
    }
}
