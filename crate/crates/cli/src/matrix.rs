//! Plain-text matrix files: a `# key: value` header, then comma-separated rows.
//!
//! Intensity files hold one row per time sample (`t, I(Δ₀), I(Δ₁), …`); FFC
//! files hold one row per ν with re/im pairs per detuning. Every number is
//! written with 17 significant digits so re-reading is exact.

use std::fmt::Write as _;
use std::path::Path;

use nrs_core::{Complex64, FFCSpectrum, Gate, IntensityKind, Provenance, TimeFreqIntensity, TimeGrid};

use crate::error::CliError;

pub const FORMAT: &str = "nrs-matrix 1";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}

pub fn write_intensity(i: &TimeFreqIntensity, lifetime_ns: f64) -> String {
    let mut s = String::new();
    let g = &i.grid;
    writeln!(s, "# format: {FORMAT}").unwrap();
    writeln!(s, "# kind: intensity").unwrap();
    writeln!(s, "# intensity_kind: {}", i.kind).unwrap();
    writeln!(s, "# units: frequency gamma, time 1/gamma").unwrap();
    writeln!(s, "# lifetime_ns: {}", num(lifetime_ns)).unwrap();
    writeln!(s, "# t0: {}", num(g.t0)).unwrap();
    writeln!(s, "# dt: {}", num(g.dt)).unwrap();
    writeln!(s, "# n_t: {}", g.n).unwrap();
    writeln!(s, "# deltas: {}", list(&i.deltas)).unwrap();
    writeln!(s, "# prompt_power: {}", list(&i.prompt_power)).unwrap();
    let cols: Vec<String> = i.deltas.iter().map(|d| format!("I[{d}]")).collect();
    writeln!(s, "# columns: t,{}", cols.join(",")).unwrap();
    for k in 0..g.n {
        s.push_str(&num(g.t(k)));
        for j in 0..i.n_delta() {
            s.push(',');
            s.push_str(&num(i.get(k, j)));
        }
        s.push('\n');
    }
    s
}

pub fn write_ffc(f: &FFCSpectrum, lifetime_ns: f64) -> String {
    let mut s = String::new();
    writeln!(s, "# format: {FORMAT}").unwrap();
    writeln!(s, "# kind: ffc").unwrap();
    writeln!(s, "# provenance: {}", f.provenance.as_str()).unwrap();
    writeln!(s, "# units: frequency gamma, time 1/gamma").unwrap();
    writeln!(s, "# lifetime_ns: {}", num(lifetime_ns)).unwrap();
    writeln!(s, "# gate_t1: {}", num(f.gate.t1)).unwrap();
    writeln!(s, "# gate_t2: {}", num(f.gate.t2)).unwrap();
    writeln!(s, "# gate_t1_ns: {}", num(f.gate.t1 * lifetime_ns)).unwrap();
    writeln!(s, "# gate_t2_ns: {}", num(f.gate.t2 * lifetime_ns)).unwrap();
    writeln!(s, "# n_nu: {}", f.n_nu()).unwrap();
    writeln!(s, "# deltas: {}", list(&f.deltas)).unwrap();
    let cols: Vec<String> = f
        .deltas
        .iter()
        .map(|d| format!("re[{d}],im[{d}]"))
        .collect();
    writeln!(s, "# columns: nu,{}", cols.join(",")).unwrap();
    for (i, nu) in f.nus.iter().enumerate() {
        s.push_str(&num(*nu));
        for j in 0..f.deltas.len() {
            let v = f.get(i, j);
            s.push(',');
            s.push_str(&num(v.re));
            s.push(',');
            s.push_str(&num(v.im));
        }
        s.push('\n');
    }
    s
}

/// Header entries in file order and the numeric rows.
struct Parsed {
    header: Vec<(String, String)>,
    rows: Vec<Vec<f64>>,
}

impl Parsed {
    fn get(&self, key: &str, path: &Path) -> Result<&str, CliError> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| CliError::data(path, format!("header lacks `{key}`")))
    }

    fn float(&self, key: &str, path: &Path) -> Result<f64, CliError> {
        let v = self.get(key, path)?;
        v.parse()
            .map_err(|_| CliError::data(path, format!("`{key}` is not a number: {v:?}")))
    }

    fn count(&self, key: &str, path: &Path) -> Result<usize, CliError> {
        let v = self.get(key, path)?;
        v.parse()
            .map_err(|_| CliError::data(path, format!("`{key}` is not a count: {v:?}")))
    }

    fn floats(&self, key: &str, path: &Path) -> Result<Vec<f64>, CliError> {
        let v = self.get(key, path)?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| CliError::data(path, format!("bad number {x:?} in `{key}`")))
            })
            .collect()
    }
}

fn parse(text: &str, path: &Path, kind: &str) -> Result<Parsed, CliError> {
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            if let Some((k, v)) = h.split_once(':') {
                header.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let row = line
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::data(path, format!("line {}: {e}", ln + 1)))?;
        rows.push(row);
    }
    let p = Parsed { header, rows };
    if p.header.is_empty() && p.rows.is_empty() {
        return Err(CliError::data(path, "file is empty"));
    }
    let format = p.get("format", path)?;
    if format != FORMAT {
        return Err(CliError::data(path, format!("unsupported format {format:?}")));
    }
    let k = p.get("kind", path)?;
    if k != kind {
        return Err(CliError::data(path, format!("expected a {kind} file, found {k}")));
    }
    Ok(p)
}

fn check_shape(p: &Parsed, path: &Path, rows: usize, width: usize) -> Result<(), CliError> {
    if p.rows.is_empty() {
        return Err(CliError::data(path, "no data rows"));
    }
    if p.rows.len() != rows {
        return Err(CliError::data(
            path,
            format!("header promises {rows} rows, found {}", p.rows.len()),
        ));
    }
    if let Some((i, r)) = p.rows.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(CliError::data(
            path,
            format!("row {} has {} fields, expected {width}", i + 1, r.len()),
        ));
    }
    Ok(())
}

pub fn read_intensity(text: &str, path: &Path) -> Result<(TimeFreqIntensity, f64), CliError> {
    let p = parse(text, path, "intensity")?;
    let kind: IntensityKind = p
        .get("intensity_kind", path)?
        .parse()
        .map_err(|e: nrs_core::NrsError| CliError::data(path, e.to_string()))?;
    let grid = TimeGrid::new(p.float("t0", path)?, p.float("dt", path)?, p.count("n_t", path)?)
        .map_err(|e| CliError::data(path, e.to_string()))?;
    let deltas = p.floats("deltas", path)?;
    let prompt = p.floats("prompt_power", path)?;
    if deltas.is_empty() || prompt.len() != deltas.len() {
        return Err(CliError::data(path, "deltas and prompt_power must be non-empty and equal in length"));
    }
    check_shape(&p, path, grid.n, deltas.len() + 1)?;
    let mut values = vec![0.0; grid.n * deltas.len()];
    for (k, r) in p.rows.iter().enumerate() {
        for j in 0..deltas.len() {
            values[j * grid.n + k] = r[j + 1];
        }
    }
    let i = TimeFreqIntensity {
        grid,
        deltas,
        values,
        prompt_power: prompt,
        kind,
    };
    Ok((i, p.float("lifetime_ns", path)?))
}

pub fn read_ffc(text: &str, path: &Path) -> Result<(FFCSpectrum, f64), CliError> {
    let p = parse(text, path, "ffc")?;
    let provenance =
        Provenance::parse(p.get("provenance", path)?).map_err(|e| CliError::data(path, e.to_string()))?;
    let gate = Gate::new(p.float("gate_t1", path)?, p.float("gate_t2", path)?)
        .map_err(|e| CliError::data(path, e.to_string()))?;
    let deltas = p.floats("deltas", path)?;
    if deltas.is_empty() {
        return Err(CliError::data(path, "no detunings"));
    }
    let n_nu = p.count("n_nu", path)?;
    check_shape(&p, path, n_nu, 2 * deltas.len() + 1)?;
    let nus: Vec<f64> = p.rows.iter().map(|r| r[0]).collect();
    let mut values = vec![Complex64::new(0.0, 0.0); n_nu * deltas.len()];
    for (i, r) in p.rows.iter().enumerate() {
        for j in 0..deltas.len() {
            values[j * n_nu + i] = Complex64::new(r[1 + 2 * j], r[2 + 2 * j]);
        }
    }
    let f = FFCSpectrum::new(nus, deltas, values, gate, provenance)
        .map_err(|e| CliError::data(path, e.to_string()))?;
    Ok((f, p.float("lifetime_ns", path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn intensity_round_trip_is_exact() {
        let grid = TimeGrid::new(0.1, 0.013, 400).unwrap();
        let cols = vec![
            (0..400).map(|k| (k as f64 * 0.7).sin() / 3.0).collect(),
            (0..400).map(|k| 1e-300 + k as f64 * std::f64::consts::PI).collect(),
        ];
        let i = TimeFreqIntensity::from_columns(grid, vec![-1.5, 1.0 / 3.0], cols, 0.25, IntensityKind::D2)
            .unwrap();
        let (back, l) = read_intensity(&write_intensity(&i, 140.0), path()).unwrap();
        assert_eq!(back, i);
        assert_eq!(l, 140.0);
    }

    #[test]
    fn ffc_round_trip_is_exact() {
        let vals = (0..6)
            .map(|k| Complex64::new(k as f64 / 7.0, -(k as f64).sqrt()))
            .collect();
        let f = FFCSpectrum::new(
            vec![0.0, 0.5, 1.0],
            vec![2.0, 4.0],
            vals,
            Gate::new(0.02, 9.5).unwrap(),
            Provenance::Inv,
        )
        .unwrap();
        let (back, _) = read_ffc(&write_ffc(&f, 140.0), path()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_files_are_data_errors() {
        assert!(matches!(read_ffc("", path()), Err(CliError::Data { .. })));
        let header_only = "# format: nrs-matrix 1\n# kind: ffc\n# provenance: bc\n# gate_t1: 0\n# gate_t2: 1\n# n_nu: 0\n# deltas: 1\n";
        assert!(matches!(read_ffc(header_only, path()), Err(CliError::Data { .. })));
        let wrong_kind = "# format: nrs-matrix 1\n# kind: intensity\n";
        assert!(read_ffc(wrong_kind, path()).is_err());
    }
}
