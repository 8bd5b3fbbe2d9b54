use std::path::Path;

use nrs_core::analysis::{CavityScanOptions, Component, DiagonalOptions, ThicknessOptions};
use nrs_core::{
    uniform_grid, AnalyzerSpec, Gate, Ordering, PhaseVariant, TargetModel, TimeGrid, Units,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub units: UnitsConfig,
    pub time_grid: TimeGridConfig,
    pub deltas: Range,
    pub nus: Range,
    #[serde(default)]
    pub gate: GateConfig,
    #[serde(default = "default_ordering")]
    pub ordering: Ordering,
    #[serde(default)]
    pub mode: SimMode,
    /// Variants written by the phase-combined FFC stage.
    #[serde(default = "all_variants")]
    pub phases: Vec<PhaseVariant>,
    #[serde(default)]
    pub noise: NoiseConfig,
    pub analyzer: AnalyzerSpec,
    /// Either a single target or a tagged scan, not both.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetModel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scan: Vec<ScanEntry>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

fn default_ordering() -> Ordering {
    Ordering::AnalyzerFirst
}

fn all_variants() -> Vec<PhaseVariant> {
    vec![PhaseVariant::Sa, PhaseVariant::St, PhaseVariant::Inv]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsConfig {
    pub lifetime_ns: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        UnitsConfig {
            lifetime_ns: Units::default().lifetime_ns,
        }
    }
}

/// Times in 1/γ, or in ns through the `_ns` fields; exactly one of each pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_ns: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Range { start, stop, step }
    }

    fn values(&self, what: &str) -> Result<Vec<f64>, CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step > 0.0)
            || self.stop < self.start
        {
            return Err(CliError::Config(format!(
                "{what}: need finite start <= stop and step > 0"
            )));
        }
        Ok(uniform_grid(self.start, self.stop, self.step))
    }
}

/// Gate edges in 1/γ or ns; unset edges fall back to the default gate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2_ns: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// I(t, Δ) of the two-stage setup.
    Full,
    /// I(t, Δ) − |α_t|²I_a − |α_a|²I_t.
    #[default]
    BackgroundCorrected,
    /// D₁, D₂ and S intensities for the phase-combined spectra.
    PhaseCombined,
}

/// Multiplicative Gaussian noise, off unless `relative` > 0.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub relative: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanEntry {
    pub tag: String,
    pub target: TargetModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisKind {
    #[default]
    DiagonalVertical,
    DiagonalHorizontal,
    Thickness,
    Cavity,
    Beats,
    Response,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutSpec {
    pub axis: nrs_core::analysis::Axis,
    pub at: f64,
    #[serde(default)]
    pub component: Component,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub kind: AnalysisKind,
    /// Expected line positions; each is matched to the nearest recovered line.
    pub expected: Vec<f64>,
    pub match_tolerance: f64,
    /// Split frequency of the inverted-sum background; None uses max|Δ|/2.
    pub nu0: Option<f64>,
    pub min_prominence: f64,
    pub diagonal: DiagonalOptions,
    pub thickness: ThicknessOptions,
    pub cavity: CavityScanOptions,
    /// Cuts written as tables next to the report.
    pub cuts: Vec<CutSpec>,
    /// Line positions used to flag unreliable response reconstructions.
    pub resonances: Vec<f64>,
    pub min_separation: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            kind: AnalysisKind::default(),
            expected: Vec::new(),
            match_tolerance: 1.5,
            nu0: None,
            min_prominence: 0.1,
            diagonal: DiagonalOptions::default(),
            thickness: ThicknessOptions::default(),
            cavity: CavityScanOptions::default(),
            cuts: Vec::new(),
            resonances: Vec::new(),
            min_separation: 3.0,
        }
    }
}

/// Grids and targets after unit conversion and validation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub units: Units,
    pub grid: TimeGrid,
    pub deltas: Vec<f64>,
    pub nus: Vec<f64>,
    pub gate: Gate,
    pub targets: Vec<(String, TargetModel)>,
}

fn pick(name: &str, plain: Option<f64>, ns: Option<f64>, units: &Units) -> Result<Option<f64>, CliError> {
    match (plain, ns) {
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "give either {name} or {name}_ns, not both"
        ))),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(v)) => Ok(Some(units.ns_to_time(v))),
        (None, None) => Ok(None),
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let cfg = |e: nrs_core::NrsError| CliError::Config(e.to_string());
        let units = Units::new(Units::default().gamma_ref, self.units.lifetime_ns).map_err(cfg)?;
        let tg = &self.time_grid;
        let t0 = pick("t0", tg.t0, tg.t0_ns, &units)?.unwrap_or(0.0);
        let dt = pick("dt", tg.dt, tg.dt_ns, &units)?
            .ok_or_else(|| CliError::Config("time_grid needs dt or dt_ns".into()))?;
        let grid = TimeGrid::new(t0, dt, tg.n).map_err(cfg)?;
        let deltas = self.deltas.values("deltas")?;
        let nus = self.nus.values("nus")?;
        let default_gate = Gate::default_for(&grid);
        let g = &self.gate;
        let t1 = pick("t1", g.t1, g.t1_ns, &units)?.unwrap_or(default_gate.t1);
        let t2 = pick("t2", g.t2, g.t2_ns, &units)?.unwrap_or(default_gate.t2);
        let gate = Gate::new(t1, t2).map_err(cfg)?;
        gate.check(&grid).map_err(cfg)?;
        self.analyzer.validate().map_err(cfg)?;
        let targets = match (&self.target, self.scan.is_empty()) {
            (Some(t), true) => vec![("main".to_string(), t.clone())],
            (None, false) => self
                .scan
                .iter()
                .map(|e| (e.tag.clone(), e.target.clone()))
                .collect(),
            _ => {
                return Err(CliError::Config(
                    "give exactly one of [target] or [[scan]]".into(),
                ))
            }
        };
        let mut seen = std::collections::BTreeSet::new();
        for (tag, t) in &targets {
            if tag.is_empty() || !tag.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                return Err(CliError::Config(format!(
                    "scan tag {tag:?} must be non-empty ASCII letters, digits, '-', '_' or '.'"
                )));
            }
            if !seen.insert(tag.clone()) {
                return Err(CliError::Config(format!("duplicate scan tag {tag:?}")));
            }
            t.validate()
                .map_err(|e| CliError::Config(format!("target {tag}: {e}")))?;
        }
        if self.phases.is_empty() {
            return Err(CliError::Config("phases must not be empty".into()));
        }
        if !(self.noise.relative >= 0.0 && self.noise.relative.is_finite()) {
            return Err(CliError::Config("noise.relative must be >= 0".into()));
        }
        Ok(Resolved {
            units,
            grid,
            deltas,
            nus,
            gate,
            targets,
        })
    }
}
