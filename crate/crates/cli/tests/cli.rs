use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn shift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shift")).args(args).output().expect("binary runs")
}

fn shift_args<'a>(material: &'a str, atom: &'a str) -> Vec<&'a str> {
    vec!["--material", material, "--atom", atom, "--upper", "27S1/2", "--lower", "26S1/2"]
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn json_and_csv_agree() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let mut base = vec!["point"];
    base.extend(shift_args(&m, &a));
    base.extend(["--z", "1e-6", "--T", "500"]);
    let json_out = shift(&[base.clone(), vec!["--format", "json"]].concat());
    let csv_out = shift(&[base, vec!["--format", "csv"]].concat());
    assert!(json_out.status.success() && csv_out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let rep = &doc["report"];
    let rows = csv_rows(std::str::from_utf8(&csv_out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    let cell = |i: usize| rows[0][i].parse::<f64>().unwrap();
    for (i, key) in [(2, "nr_matsubara"), (3, "nr_resonant_photon"), (4, "u_eff"), (6, "r_shift"), (7, "total")] {
        assert_eq!(cell(i), rep[key]["per_second"].as_f64().unwrap(), "{key}");
    }
    assert_eq!(cell(5), rep["thermal_factor"].as_f64().unwrap());
}

#[test]
fn output_is_deterministic() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name).display().to_string();
        let mut args = vec!["scan"];
        args.extend(shift_args(&m, &a));
        args.extend(["--z", "1e-7:1e-5:9log", "--T", "350,500,600", "--format", "csv", "--output", &path]);
        assert!(shift(&args).status.success());
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn z_scan_follows_inverse_cube() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let mut args = vec!["scan"];
    args.extend(shift_args(&m, &a));
    args.extend(["--z-range", "1e-7:1e-6:11log", "--T", "500", "--format", "csv"]);
    let out = shift(&args);
    assert!(out.status.success());
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(rows.len(), 11);
    let (z0, t0) = (rows[0][0].parse::<f64>().unwrap(), rows[0][7].parse::<f64>().unwrap());
    let (z1, t1) = (rows[10][0].parse::<f64>().unwrap(), rows[10][7].parse::<f64>().unwrap());
    let slope = (t1.abs().ln() - t0.abs().ln()) / (z1.ln() - z0.ln());
    assert!((slope + 3.0).abs() < 1e-3, "{slope}");
}

#[test]
fn t_scan_resonant_shift_grows() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let mut args = vec!["scan"];
    args.extend(shift_args(&m, &a));
    args.extend(["--z", "1e-6", "--T", "100:900:17", "--format", "csv"]);
    let out = shift(&args);
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    let r: Vec<f64> = rows.iter().map(|row| row[6].parse::<f64>().unwrap().abs()).collect();
    assert!(r.windows(2).all(|w| w[1] >= w[0]), "{r:?}");
}

#[test]
fn scan_round_trips_through_csv_and_json() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let mut base = vec!["scan"];
    base.extend(shift_args(&m, &a));
    base.extend(["--z", "1e-7,1e-6", "--T", "0,500"]);
    let csv_out = shift(&[base.clone(), vec!["--format", "csv"]].concat());
    let json_out = shift(&[base, vec!["--format", "json"]].concat());
    let rows = csv_rows(std::str::from_utf8(&csv_out.stdout).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    assert_eq!(rows.len(), 4);
    for (row, j) in rows.iter().zip(doc["rows"].as_array().unwrap()) {
        assert_eq!(row[0].parse::<f64>().unwrap(), j["z_m"].as_f64().unwrap());
        assert_eq!(row[7].parse::<f64>().unwrap(), j["total"]["per_second"].as_f64().unwrap());
    }
}

#[test]
fn failed_point_becomes_error_row() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let mut args = vec!["scan"];
    args.extend(shift_args(&m, &a));
    // A tight window rejects the pair at every point.
    args.extend(["--z", "1e-6,2e-6", "--T", "500", "--resonance-tol", "0.01", "--format", "csv"]);
    let out = shift(&args);
    assert!(out.status.success());
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[8].contains("resonance condition violated") && r[7].is_empty()));
}

#[test]
fn config_errors_exit_2() {
    let (m, a) = (fixture("two_mode_surface_g003.json"), fixture("rb_27s_26s.json"));
    let mut args = vec!["scan"];
    args.extend(shift_args(&m, &a));
    args.extend(["--z", "1e-6:1e-5:0log", "--T", "500"]);
    let out = shift(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("shift scan:"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "oscillators": [{"omega_P": 1, "omega_T": "one", "gamma": 0, "unit": "rad/s"}]}"#)
        .unwrap();
    let out = shift(&["modes", "--material", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("oscillators[0].omega_T"), "{err}");

    let out = shift(&["point", "--material", &m, "--atom", &a, "--upper", "27S1/2", "--lower", "99S", "--z", "1e-6", "--T", "500"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lossless_material_with_resonant_term_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lossless.json");
    std::fs::write(
        &path,
        r#"{"name": "lossless", "oscillators": [
            {"omega_P": 36.5, "omega_T": 70.23181766461417, "gamma": 0, "unit": "cm^-1"},
            {"omega_P": 45.0, "omega_T": 82.57037475707851, "gamma": 0, "unit": "cm^-1"}]}"#,
    )
    .unwrap();
    let a = fixture("rb_27s_26s.json");
    let m = path.to_str().unwrap();
    let mut args = vec!["point"];
    args.extend(shift_args(m, &a));
    args.extend(["--z", "1e-6", "--T", "500"]);
    let out = shift(&args);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("shift point:"));
}

#[test]
fn modes_single_oscillator() {
    let out = shift(&["modes", "--material", &fixture("toy_single_oscillator.json"), "--format", "csv"]);
    assert!(out.status.success());
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    let center: f64 = rows[0][0].parse().unwrap();
    let expected = (1e26f64 + 64e24 / 2.0).sqrt();
    assert!((center / expected - 1.0).abs() < 1e-3);
}

#[test]
fn cutoff_override_from_environment() {
    let (m, a) = (fixture("toy_single_oscillator.json"), fixture("toy_two_level.json"));
    let args = ["point", "--material", &m, "--atom", &a, "--upper", "e", "--lower", "g", "--z", "1e-6", "--T", "400", "--no-resonant"];
    let out = Command::new(env!("CARGO_BIN_EXE_shift")).args(args).env("SHIFT_MATSUBARA_CUTOFF", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not converged at cutoff 2"));
    let out = Command::new(env!("CARGO_BIN_EXE_shift")).args(args).env("SHIFT_MATSUBARA_CUTOFF", "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
