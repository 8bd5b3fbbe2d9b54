use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const MINIMAL: &str = r#"
name = "minimal"
time_grid = { dt = 0.01, n = 600 }
deltas = { start = 0.0, stop = 40.0, step = 10.0 }
nus = { start = 0.0, stop = 60.0, step = 0.5 }
gate = { t1 = 0.05, t2 = 5.0 }
analyzer = { b_a = 2.34 }
target = { kind = "single_line_thick", line = { omega = 0.0, b = 2.0 } }
"#;

fn nrs(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrs"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) {
    let o = nrs(args, out);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn with_config(dir: &Path, text: &str) -> String {
    let p = dir.join("scenario.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Header map and numeric rows of a matrix file.
fn load(path: &Path) -> (Vec<(String, String)>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for l in text.lines() {
        if let Some(h) = l.strip_prefix('#') {
            let (k, v) = h.split_once(':').unwrap();
            header.push((k.trim().to_string(), v.trim().to_string()));
        } else {
            rows.push(l.split(',').map(|x| x.parse().unwrap()).collect());
        }
    }
    (header, rows)
}

fn head<'a>(h: &'a [(String, String)], k: &str) -> &'a str {
    &h.iter().find(|(a, _)| a == k).unwrap().1
}

#[test]
fn minimal_config_writes_one_row_per_time_sample() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), MINIMAL);
    ok(&["simulate", "--config", &cfg], d.path());
    let (h, rows) = load(&d.path().join("intensity_main_bc.txt"));
    assert_eq!(rows.len(), 600);
    assert!(rows.iter().all(|r| r.len() == 1 + 5));
    assert_eq!(head(&h, "intensity_kind"), "background_corrected");
    let m: Value = serde_json::from_str(&fs::read_to_string(d.path().join("manifest_simulate.json")).unwrap()).unwrap();
    assert_eq!(m["schema_version"], 1);
    for f in m["outputs"].as_array().unwrap() {
        assert!(d.path().join(f["file"].as_str().unwrap()).exists());
        assert_eq!(f["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let cfg = with_config(d.path(), MINIMAL);
        ok(&["simulate", "--config", &cfg], d.path());
        ok(&["ffc", "--config", &cfg], d.path());
        ok(&["analyze", "--config", &cfg], d.path());
    }
    for f in ["config.toml", "intensity_main_bc.txt", "ffc_main_bc.txt", "report.json"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
}

#[test]
fn zero_frequency_row_is_the_gated_time_integral() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), MINIMAL);
    ok(&["simulate", "--config", &cfg], d.path());
    ok(&["ffc", "--config", &cfg], d.path());
    let (_, i) = load(&d.path().join("intensity_main_bc.txt"));
    let (h, f) = load(&d.path().join("ffc_main_bc.txt"));
    let (t1, t2): (f64, f64) = (head(&h, "gate_t1").parse().unwrap(), head(&h, "gate_t2").parse().unwrap());
    let dt = 0.01;
    let inside: Vec<&Vec<f64>> = i.iter().filter(|r| r[0] >= t1 - 1e-12 && r[0] <= t2 + 1e-12).collect();
    for j in 0..5 {
        let mut sum = 0.0;
        for (k, r) in inside.iter().enumerate() {
            let w = if k == 0 || k + 1 == inside.len() { 0.5 } else { 1.0 };
            sum += w * r[1 + j] * dt;
        }
        assert_eq!(f[0][0], 0.0);
        assert!((f[0][1 + 2 * j] - sum).abs() <= 1e-12 * sum.abs().max(1.0), "column {j}");
        assert!(f[0][2 + 2 * j].abs() <= 1e-12 * sum.abs().max(1.0));
    }
}

#[test]
fn noise_is_seeded() {
    let text = format!("{MINIMAL}noise = {{ relative = 0.01 }}\n");
    let run = |seed: &str| {
        let d = tempfile::tempdir().unwrap();
        let cfg = with_config(d.path(), &text);
        ok(&["simulate", "--config", &cfg, "--seed", seed], d.path());
        fs::read(d.path().join("intensity_main_bc.txt")).unwrap()
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
}

#[test]
fn unknown_keys_exit_with_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), &MINIMAL.replace("analyzer = { b_a = 2.34 }", "analyzer = { b_a = 2.34, colour = 1 }"));
    let o = nrs(&["simulate", "--config", &cfg], d.path());
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("colour") && msg.contains("line"), "{msg}");
    assert_eq!(nrs(&["simulate"], d.path()).status.code(), Some(2));
    assert_eq!(nrs(&["simulate", "--preset", "nope"], d.path()).status.code(), Some(2));
}

#[test]
fn empty_ffc_file_is_a_numeric_failure() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), MINIMAL);
    let empty = d.path().join("ffc_empty_bc.txt");
    fs::write(&empty, "").unwrap();
    let o = nrs(&["analyze", "--config", &cfg, "--input", empty.to_str().unwrap()], d.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));
    assert!(!d.path().join("report.json").exists());
}

#[test]
fn phase_combined_mode_writes_all_variants() {
    let d = tempfile::tempdir().unwrap();
    let text = format!("{MINIMAL}mode = \"phase_combined\"\n").replace("stop = 40.0", "stop = 100.0");
    let text = format!("{text}analysis = {{ nu0 = 30.0 }}\n");
    let cfg = with_config(d.path(), &text);
    ok(&["simulate", "--config", &cfg], d.path());
    for k in ["d1", "d2", "sum"] {
        assert!(d.path().join(format!("intensity_main_{k}.txt")).exists());
    }
    ok(&["ffc", "--config", &cfg], d.path());
    for v in ["sa", "st", "inv"] {
        let (h, _) = load(&d.path().join(format!("ffc_main_{v}.txt")));
        assert_eq!(head(&h, "provenance"), v);
    }
}

#[test]
fn gating_preset_carries_the_gate_in_ns() {
    let o = Command::new(env!("CARGO_BIN_EXE_nrs"))
        .args(["show-preset", "gating_20ns"])
        .output()
        .unwrap();
    let text = String::from_utf8(o.stdout).unwrap();
    let v: toml::Value = toml::from_str(&text).unwrap();
    assert_eq!(v["gate"]["t1_ns"].as_float(), Some(20.0));
    assert_eq!(v["gate"]["t2_ns"].as_float(), Some(192.0));
}

#[test]
fn sextet_preset_has_the_measured_lines() {
    let o = Command::new(env!("CARGO_BIN_EXE_nrs"))
        .args(["show-preset", "table1_57fe"])
        .output()
        .unwrap();
    let v: toml::Value = toml::from_str(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let mut w: Vec<f64> = v["target"]["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["omega"].as_float().unwrap())
        .collect();
    w.sort_by(f64::total_cmp);
    assert_eq!(w, [-55.3406, -32.0605, -8.7596, 8.7596, 32.0605, 55.3406]);
    assert_eq!(v["analyzer"]["b_a"].as_float(), Some(2.34));
}

fn report(d: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap()
}

#[test]
fn sextet_preset_recovers_the_splittings() {
    let d = tempfile::tempdir().unwrap();
    for c in ["simulate", "ffc", "analyze"] {
        ok(&[c, "--preset", "table1_57fe"], d.path());
    }
    let r = report(d.path());
    assert_eq!(r["schema_version"], 1);
    let matched = r["entries"][0]["result"]["matched"].as_array().unwrap();
    assert_eq!(matched.len(), 3);
    for m in matched {
        let pos = m["line"]["position_optimized"].as_f64().unwrap();
        assert!(pos > 0.0);
        assert!(m["relative_error"].as_f64().unwrap().abs() <= 0.02, "{m}");
    }
    assert!(d.path().join("cut_main_bc_nu_100.txt").exists());
}

#[test]
fn cavity_scan_preset_lists_collective_parameters() {
    let d = tempfile::tempdir().unwrap();
    for c in ["simulate", "ffc", "analyze"] {
        ok(&[c, "--preset", "cavity_theta_scan", "--workers", "2"], d.path());
    }
    let s = &report(d.path())["theta_scan"];
    let tags: Vec<&str> = s["tags"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
    assert_eq!(tags.len(), 11);
    assert_eq!(tags[0], "dc-5");
    let cls = s["delta_cls"].as_array().unwrap();
    // configured Δ_CLS = gΔc/(κ² + Δc²) with g = 10, κ = 1
    for (t, v) in tags.iter().zip(cls) {
        let dc: f64 = t.trim_start_matches("dc").parse().unwrap();
        let want = 10.0 * dc / (1.0 + dc * dc);
        assert!((v.as_f64().unwrap() - want).abs() <= 0.2, "{t}");
    }
    assert_eq!(s["gamma_c"].as_array().unwrap().len(), 11);
}

#[test]
fn oracle_check_passes_on_a_small_scenario() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), MINIMAL);
    ok(&["oracle-check", "--config", &cfg], d.path());
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("oracle_check.json")).unwrap()).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}
