use std::fs;
use std::path::{Path, PathBuf};

use nrs_core::analysis::{
    diagonal_lines_horizontal, diagonal_lines_vertical, extract_collective_params, nearest_line,
    quantum_beat_lines, reconstruct_response, thickness_recovery, CollectiveParams, FitReport,
    LineEstimate,
};
use nrs_core::oracle::{bessel_series_j1ratio, direct_ffc};
use nrs_core::special::j1_ratio;
use nrs_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{AnalysisKind, Resolved, ScenarioConfig, SimMode};
use crate::error::CliError;
use crate::matrix;
use crate::output::{Outputs, SCHEMA_VERSION, TOOL_VERSION};

type Result<T, E = CliError> = std::result::Result<T, E>;

fn single_column(grid: &TimeGrid, v: Vec<f64>, kind: IntensityKind) -> Result<TimeFreqIntensity, CliError> {
    Ok(TimeFreqIntensity::from_columns(*grid, vec![0.0], vec![v], 0.0, kind)?)
}

fn simulate_one(
    c: &ScenarioConfig,
    r: &Resolved,
    target: &TargetModel,
) -> Result<Vec<TimeFreqIntensity>, CliError> {
    let an = &c.analyzer;
    Ok(match c.mode {
        SimMode::Full => vec![scan_detuning(target, an, &r.deltas, c.ordering, &r.grid)?],
        SimMode::BackgroundCorrected => {
            let full = scan_detuning(target, an, &r.deltas, c.ordering, &r.grid)?;
            let it = single_column(&r.grid, target_only_intensity(target, &r.grid)?, IntensityKind::TargetOnly)?;
            let ia = single_column(&r.grid, analyzer_only_intensity(an, &r.grid), IntensityKind::AnalyzerOnly)?;
            vec![background_corrected_intensity(&full, &it, &ia, an.alpha_a, target.alpha_t())?]
        }
        SimMode::PhaseCombined => [
            PhaseCombo::Difference(Ordering::AnalyzerFirst),
            PhaseCombo::Difference(Ordering::TargetFirst),
            PhaseCombo::Sum,
        ]
        .iter()
        .map(|&combo| phase_difference_spectra(target, an, &r.deltas, &r.grid, an.phi, combo))
        .collect::<nrs_core::Result<_>>()?,
    })
}

fn add_noise(i: &mut TimeFreqIntensity, rel: f64, seed: u64) {
    let normal = Normal::new(0.0, rel).expect("finite sigma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in i.values.iter_mut() {
        *v *= 1.0 + normal.sample(&mut rng);
    }
}

fn kind_suffix(k: IntensityKind) -> &'static str {
    match k {
        IntensityKind::BackgroundCorrected => "bc",
        other => other.as_str(),
    }
}

pub fn simulate(c: &ScenarioConfig, out: &Path, seed: Option<u64>) -> Result<Vec<String>, CliError> {
    let r = c.resolve()?;
    let toml = c.to_toml();
    let mut o = Outputs::new(out)?;
    o.write("config.toml", toml.as_bytes())?;
    let seed = seed.unwrap_or(c.noise.seed);
    for (k, (tag, target)) in r.targets.iter().enumerate() {
        for (m, mut i) in simulate_one(c, &r, target)?.into_iter().enumerate() {
            if c.noise.relative > 0.0 {
                add_noise(&mut i, c.noise.relative, seed.wrapping_add((k * 16 + m) as u64));
            }
            let name = format!("intensity_{tag}_{}.txt", kind_suffix(i.kind));
            o.write(&name, matrix::write_intensity(&i, r.units.lifetime_ns).as_bytes())?;
        }
    }
    o.finish("simulate", &c.name, &toml)
}

/// Files in `dir` named `prefix*.txt`, sorted by name.
fn discover(dir: &Path, prefix: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with(prefix) && n.ends_with(".txt"))
        })
        .collect();
    v.sort();
    Ok(v)
}

/// Explicit inputs as given; discovered ones follow the scan order of the config.
fn inputs(given: &[PathBuf], dir: &Path, prefix: &str, r: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    let v = if given.is_empty() {
        let mut v = discover(dir, prefix)?;
        let rank = |p: &PathBuf| {
            let t = tag_of(p, prefix);
            r.targets.iter().position(|(tag, _)| *tag == t).unwrap_or(usize::MAX)
        };
        v.sort_by_key(|p| (rank(p), p.clone()));
        v
    } else {
        given.to_vec()
    };
    if v.is_empty() {
        return Err(CliError::Config(format!(
            "no input files: pass --input or put {prefix}*.txt into {}",
            dir.display()
        )));
    }
    Ok(v)
}

/// Scan tag of a file written by this tool, else the bare file stem.
fn tag_of(path: &Path, prefix: &str) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("input");
    let s = stem.strip_prefix(prefix).unwrap_or(stem);
    match s.rsplit_once('_') {
        Some((t, _)) if stem.starts_with(prefix) => t.to_string(),
        _ => s.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn ffc(c: &ScenarioConfig, out: &Path, given: &[PathBuf]) -> Result<Vec<String>, CliError> {
    let r = c.resolve()?;
    let toml = c.to_toml();
    let files = inputs(given, out, "intensity_", &r)?;
    let mut o = Outputs::new(out)?;
    for path in &files {
        let (i, lifetime) = matrix::read_intensity(&read(path)?, path)?;
        r.gate.check(&i.grid)?;
        let nu0 = c.analysis.nu0.unwrap_or_else(|| default_nu0(&i.deltas));
        let spec = match i.kind {
            IntensityKind::D1 | IntensityKind::D2 | IntensityKind::Sum => {
                let v = match i.kind {
                    IntensityKind::D1 => PhaseVariant::Sa,
                    IntensityKind::D2 => PhaseVariant::St,
                    _ => PhaseVariant::Inv,
                };
                if !c.phases.contains(&v) {
                    continue;
                }
                phase_combined_from_intensity(&i, &r.nus, &r.gate, nu0)?
            }
            _ => ffc_transform(&i, &r.nus, &r.gate)?,
        };
        let name = format!("ffc_{}_{}.txt", tag_of(path, "intensity_"), spec.provenance.as_str());
        o.write(&name, matrix::write_ffc(&spec, lifetime).as_bytes())?;
    }
    o.finish("ffc", &c.name, &toml)
}

#[derive(Debug, Serialize)]
struct LineOut {
    position: f64,
    stderr: f64,
    position_optimized: f64,
    stderr_optimized: f64,
    fit_range: (f64, f64),
    points: usize,
}

impl From<&LineEstimate> for LineOut {
    fn from(l: &LineEstimate) -> Self {
        LineOut {
            position: l.position(),
            stderr: l.simple.stderr("offset"),
            position_optimized: l.position_optimized(),
            stderr_optimized: l.optimized.stderr("offset"),
            fit_range: l.optimized.fit_range,
            points: l.points,
        }
    }
}

#[derive(Debug, Serialize)]
struct Matched {
    expected: f64,
    line: Option<LineOut>,
    relative_error: Option<f64>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum EntryResult {
    Diagonal {
        lines: Vec<LineOut>,
        matched: Vec<Matched>,
    },
    Thickness {
        position_maxima: f64,
        position_model: f64,
        b_t_mean: f64,
        s_gamma_mean: f64,
        model_fit: FitReport,
    },
    Cavity(CollectiveParams),
    Beats {
        rows: Vec<f64>,
    },
    Response {
        cuts: Vec<CutOut>,
    },
}

#[derive(Debug, Serialize)]
struct CutOut {
    axis: nrs_core::analysis::Axis,
    at: f64,
    file: String,
    warning: bool,
    peak_amplitude: f64,
}

#[derive(Debug, Serialize)]
struct Entry {
    file: String,
    tag: String,
    provenance: &'static str,
    result: EntryResult,
}

#[derive(Debug, Serialize, Default)]
struct ThetaScan {
    tags: Vec<String>,
    delta_cls: Vec<f64>,
    delta_cls_stderr: Vec<f64>,
    gamma_c: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct Report {
    schema_version: u32,
    tool_version: &'static str,
    config_name: String,
    analysis: AnalysisKind,
    entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_scan: Option<ThetaScan>,
}

fn cut_table(rec: &nrs_core::analysis::Reconstruction) -> String {
    let mut s = String::from("# columns: coordinate,re,im,abs,phase\n");
    for k in 0..rec.coords.len() {
        let v = rec.values[k];
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            rec.coords[k], v.re, v.im, rec.amplitude[k], rec.phase[k]
        ));
    }
    s
}

fn analyze_one(c: &ScenarioConfig, f: &FFCSpectrum) -> Result<EntryResult, CliError> {
    let a = &c.analysis;
    Ok(match a.kind {
        AnalysisKind::DiagonalVertical | AnalysisKind::DiagonalHorizontal => {
            let o = nrs_core::analysis::DiagonalOptions {
                min_prominence: a.min_prominence,
                ..a.diagonal
            };
            let lines = if a.kind == AnalysisKind::DiagonalVertical {
                diagonal_lines_vertical(f, &o)?
            } else {
                diagonal_lines_horizontal(f, &o)?
            };
            let matched = a
                .expected
                .iter()
                .map(|&e| {
                    let l = nearest_line(&lines, e, a.match_tolerance);
                    Matched {
                        expected: e,
                        relative_error: l.map(|l| (l.position_optimized() - e) / e),
                        line: l.map(LineOut::from),
                    }
                })
                .collect();
            EntryResult::Diagonal {
                lines: lines.iter().map(LineOut::from).collect(),
                matched,
            }
        }
        AnalysisKind::Thickness => {
            let o = nrs_core::analysis::ThicknessOptions {
                min_prominence: a.min_prominence,
                ..a.thickness
            };
            let t = thickness_recovery(f, &o)?;
            EntryResult::Thickness {
                position_maxima: t.position_maxima,
                position_model: t.position_model,
                b_t_mean: t.b_t_mean,
                s_gamma_mean: t.s_gamma_mean,
                model_fit: t.model_fit,
            }
        }
        AnalysisKind::Cavity => {
            let o = nrs_core::analysis::CavityScanOptions {
                min_prominence: a.min_prominence,
                ..a.cavity
            };
            EntryResult::Cavity(extract_collective_params(f, &c.analyzer, &o, None)?)
        }
        AnalysisKind::Beats => EntryResult::Beats {
            rows: quantum_beat_lines(f, a.min_prominence),
        },
        AnalysisKind::Response => EntryResult::Response { cuts: Vec::new() },
    })
}

pub fn analyze(c: &ScenarioConfig, out: &Path, given: &[PathBuf]) -> Result<Vec<String>, CliError> {
    let r = c.resolve()?;
    let toml = c.to_toml();
    let files = inputs(given, out, "ffc_", &r)?;
    let mut o = Outputs::new(out)?;
    let mut entries = Vec::new();
    for path in &files {
        let (f, _) = matrix::read_ffc(&read(path)?, path)?;
        let tag = tag_of(path, "ffc_");
        let stem = format!("{tag}_{}", f.provenance.as_str());
        let mut result = analyze_one(c, &f)?;
        let mut cuts = Vec::new();
        for cut in &c.analysis.cuts {
            let rec = reconstruct_response(&f, cut.axis, cut.at, &c.analysis.resonances, c.analysis.min_separation)?;
            let axis = match cut.axis {
                nrs_core::analysis::Axis::Nu => "nu",
                nrs_core::analysis::Axis::Delta => "delta",
            };
            let name = format!("cut_{stem}_{axis}_{}.txt", rec.at);
            o.write(&name, cut_table(&rec).as_bytes())?;
            cuts.push(CutOut {
                axis: cut.axis,
                at: rec.at,
                file: name,
                warning: rec.warning,
                peak_amplitude: rec.amplitude.iter().fold(0.0, |m: f64, v| m.max(*v)),
            });
        }
        if let EntryResult::Response { cuts: c } = &mut result {
            *c = cuts;
        }
        entries.push(Entry {
            file: path.file_name().and_then(|n| n.to_str()).unwrap_or("").to_string(),
            tag,
            provenance: f.provenance.as_str(),
            result,
        });
    }
    let theta_scan = (c.analysis.kind == AnalysisKind::Cavity).then(|| {
        let mut s = ThetaScan::default();
        for e in &entries {
            if let EntryResult::Cavity(p) = &e.result {
                s.tags.push(e.tag.clone());
                s.delta_cls.push(p.delta_cls);
                s.delta_cls_stderr.push(p.delta_cls_stderr);
                s.gamma_c.push(p.gamma_c);
            }
        }
        s
    });
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        config_name: c.name.clone(),
        analysis: c.analysis.kind,
        entries,
        theta_scan,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    o.write("report.json", json.as_bytes())?;
    o.finish("analyze", &c.name, &toml)
}

#[derive(Debug, Serialize)]
struct OracleCheck {
    name: &'static str,
    max_error: f64,
    tolerance: f64,
    pass: bool,
}

/// Fast paths against the slow references on the configured scenario.
pub fn oracle_check(c: &ScenarioConfig, out: &Path) -> Result<Vec<String>, CliError> {
    let r = c.resolve()?;
    let toml = c.to_toml();
    let mut checks = Vec::new();

    let bs: Vec<f64> = match &r.targets[0].1 {
        TargetModel::SingleLineThick { line } => vec![line.b],
        TargetModel::MultiLineThick { lines, .. } => lines.iter().map(|l| l.b).collect(),
        _ => vec![],
    };
    let mut err = 0.0_f64;
    for b in bs.iter().copied().chain([c.analyzer.b_a]).filter(|&b| b > 0.0) {
        for k in 0..200 {
            let t = (50.0 / b) * k as f64 / 199.0;
            let (series, bound) = bessel_series_j1ratio(b, t, 80)?;
            err = err.max(((series - j1_ratio(b, t)).abs() - bound).max(0.0) / b);
        }
    }
    checks.push(OracleCheck {
        name: "bessel_series_vs_fast_j1_ratio",
        max_error: err,
        tolerance: 1e-9,
        pass: err <= 1e-9,
    });

    let pick = [0, r.deltas.len() / 2, r.deltas.len() - 1];
    let target = &r.targets[0].1;
    let errs: Vec<f64> = pick
        .par_iter()
        .map(|&j| -> Result<f64, CliError> {
            let an = c.analyzer.with_delta(r.deltas[j]);
            let field = two_stage_field(target, &an, c.ordering, &r.grid)?;
            let fast = ffc_trace(&intensity(&field), &r.grid, &r.nus, &r.gate)?;
            let scale = fast.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            Ok(r.nus
                .iter()
                .zip(&fast)
                .map(|(&nu, v)| (direct_ffc(&field, nu, &r.gate) - v).norm() / scale)
                .fold(0.0, f64::max))
        })
        .collect::<Result<_, _>>()?;
    let err = errs.into_iter().fold(0.0, f64::max);
    checks.push(OracleCheck {
        name: "direct_ffc_vs_ffc_transform",
        max_error: err,
        tolerance: 1e-10,
        pass: err <= 1e-10,
    });

    let mut o = Outputs::new(out)?;
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "config_name": c.name,
        "checks": checks,
    }))
    .expect("checks serialize");
    o.write("oracle_check.json", json.as_bytes())?;
    for ch in &checks {
        eprintln!(
            "{:<34} max error {:.3e} (tolerance {:.0e}) {}",
            ch.name,
            ch.max_error,
            ch.tolerance,
            if ch.pass { "PASS" } else { "FAIL" }
        );
    }
    let names = o.finish("oracle-check", &c.name, &toml)?;
    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        return Err(CliError::Numeric(NrsError::Domain(format!(
            "oracle check {} failed",
            bad.name
        ))));
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_from_file_names() {
        assert_eq!(tag_of(Path::new("o/intensity_b1.5_sum.txt"), "intensity_"), "b1.5");
        assert_eq!(tag_of(Path::new("o/ffc_dc-0.5_bc.txt"), "ffc_"), "dc-0.5");
        assert_eq!(tag_of(Path::new("mine.txt"), "ffc_"), "mine");
    }
}
