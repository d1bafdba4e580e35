// Convolutions read clearer with explicit tap indices.
#![allow(clippy::needless_range_loop)]

use memristive::formats::pgm::{read_pgm, write_pgm};
use memristive::vision::ImageGrid;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_memristive"));
    cmd.env_remove("MEMRISTIVE_PROFILE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn dataset() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/breast-cancer-wisconsin.data")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Rows of a headed numeric CSV.
fn csv_rows(p: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report_value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn sine_sweep_is_pinched_and_writes_metadata() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "sine.csv");
    let o = run(&["device-sweep", "--waveform", "sine:1:1", "--duration", "1", "--dt", "1e-3", "--out", s(&out)]);
    assert!(o.status.success(), "{o:?}");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1001);
    for r in &rows {
        // v / i recovers the reported memristance, so i vanishes with v.
        if r[1] == 0.0 {
            assert_eq!(r[2], 0.0);
        }
        assert!(r[4] >= 1e3 && r[4] <= 81e3);
    }
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sine.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["profile"], "hp-linear");
    assert_eq!(meta["outputs"][0], s(&out));
    assert!(meta["command_line"].as_array().unwrap().iter().any(|a| a == "sine:1:1"));
    assert!(meta["elapsed_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn zero_drive_keeps_memristance_constant() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "dc.csv");
    assert!(run(&["device-sweep", "--waveform", "dc:0", "--duration", "0.5", "--out", s(&out)]).status.success());
    let rows = csv_rows(&out);
    assert!(rows.iter().all(|r| r[4] == rows[0][4]));
}

#[test]
fn pulse_train_programs_monotonically() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "pulses.csv");
    let o = run(&["device-sweep", "--waveform", "pulses:1:0.05:0.1", "--duration", "1", "--x0", "0", "--out", s(&out)]);
    assert!(o.status.success());
    let rows = csv_rows(&out);
    assert!(rows.windows(2).all(|w| w[1][4] <= w[0][4]));
    assert!(rows.last().unwrap()[4] < rows[0][4]);
}

#[test]
fn pwl_drive_file_is_accepted() {
    let dir = TempDir::new().unwrap();
    let drive = path(&dir, "drive.pwl");
    std::fs::write(&drive, "0 0\n0.01 1\n0.02 0\n").unwrap();
    let out = path(&dir, "out.csv");
    assert!(run(&["device-sweep", "--drive", s(&drive), "--dt", "1e-4", "--out", s(&out)]).status.success());
    assert_eq!(csv_rows(&out).len(), 201);
}

#[test]
fn bad_profile_and_waveform_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.csv");
    let o = run(&["device-sweep", "--profile", "no-such-profile", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hp-linear"));
    assert_eq!(run(&["device-sweep", "--waveform", "saw:1", "--out", s(&out)]).status.code(), Some(1));
    assert_eq!(run(&["device-sweep"]).status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn profile_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "team.csv");
    let o = bin()
        .args(["device-sweep", "--waveform", "dc:0", "--duration", "0.01", "--out", s(&out)])
        .env("MEMRISTIVE_PROFILE", "team-default")
        .output()
        .unwrap();
    assert!(o.status.success());
    let meta = std::fs::read_to_string(dir.path().join("team.csv.meta.json")).unwrap();
    assert!(meta.contains("\"team-default\""));
}

#[test]
fn profile_file_path_is_accepted() {
    let dir = TempDir::new().unwrap();
    let profile = concat!(env!("CARGO_MANIFEST_DIR"), "/../../profiles/nonlinear-sample.profile");
    let out = path(&dir, "nl.csv");
    let o = run(&["device-sweep", "--profile", profile, "--duration", "0.1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bridge_targets_are_reached() {
    let zero = stdout(&run(&["bridge", "program", "--target", "0"]));
    assert_eq!(report_value(&zero, "pulse_width"), 0.0);
    let mut widths = vec![];
    for target in [0.2, 0.5, 0.9, -0.9] {
        let o = run(&["bridge", "program", "--target", &target.to_string()]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!((report_value(&text, "weight") - target).abs() <= 0.01);
        if target > 0.0 {
            widths.push(report_value(&text, "pulse_width"));
        } else {
            assert_eq!(report_value(&text, "pulse_voltage"), -1.0);
        }
    }
    assert!(widths.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn unreachable_bridge_target_fails() {
    let o = run(&["bridge", "program", "--target", "0.99"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bridge", "read", "--states", "1,0,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bridge_read_reports_the_extreme_weight() {
    let text = stdout(&run(&["bridge", "read", "--states", "1,0,1,0"]));
    assert!((report_value(&text, "weight") - 80.0 / 82.0).abs() < 1e-12);
}

fn write_image(dir: &TempDir, name: &str, img: &ImageGrid) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, write_pgm(img)).unwrap();
    p
}

fn read_image(p: &Path) -> ImageGrid {
    read_pgm(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn blur_matches_a_direct_convolution() {
    let dir = TempDir::new().unwrap();
    let img = ImageGrid::from_fn(12, 9, |r, c| ((r * 37 + c * 91) % 256) as u8).unwrap();
    let input = write_image(&dir, "in.pgm", &img);
    let out = path(&dir, "blur.pgm");
    assert!(run(&["kernel", "--input", s(&input), "--kernel", "blur", "--out", s(&out)]).status.success());
    let got = read_image(&out);
    let w = [[0.1; 3]; 3];
    let mut acc = vec![];
    for r in 0..7 {
        for c in 0..10 {
            let mut v = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    v += w[k][l] * img.get(r + k, c + l) as f64;
                }
            }
            acc.push(v);
        }
    }
    let lo = acc.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = acc.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let want: Vec<u8> = acc.iter().map(|v| ((v - lo) / (hi - lo) * 255.0 + 0.5 + 1e-9).floor() as u8).collect();
    assert_eq!(got.data(), want.as_slice());
}

#[test]
fn edge_on_flat_image_is_black_and_bridge_mode_tracks_ideal() {
    let dir = TempDir::new().unwrap();
    let flat = write_image(&dir, "flat.pgm", &ImageGrid::filled(8, 8, 128).unwrap());
    let out = path(&dir, "edge.pgm");
    assert!(run(&["kernel", "--input", s(&flat), "--kernel", "edge", "--out", s(&out)]).status.success());
    assert!(read_image(&out).data().iter().all(|&p| p == 0));

    let img = ImageGrid::from_fn(16, 16, |r, c| ((r * r + 3 * c) % 256) as u8).unwrap();
    let input = write_image(&dir, "in.pgm", &img);
    let (ideal, bridge) = (path(&dir, "ideal.pgm"), path(&dir, "bridge.pgm"));
    assert!(run(&["kernel", "--input", s(&input), "--out", s(&ideal)]).status.success());
    assert!(run(&["kernel", "--input", s(&input), "--mode", "bridge", "--out", s(&bridge)]).status.success());
    let (a, b) = (read_image(&ideal), read_image(&bridge));
    assert!(a.data().iter().zip(b.data()).all(|(x, y)| (*x as i32 - *y as i32).abs() <= 2));
}

#[test]
fn inline_kernel_and_undersized_image() {
    let dir = TempDir::new().unwrap();
    let input = write_image(&dir, "in.pgm", &ImageGrid::from_fn(5, 5, |r, c| (r * 50 + c) as u8).unwrap());
    let out = path(&dir, "out.pgm");
    let o = run(&["kernel", "--input", s(&input), "--kernel", "0,0,0;0,1,0;0,0,0", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read_image(&out).width(), 3);
    assert_eq!(run(&["kernel", "--input", s(&input), "--kernel", "sharpen", "--out", s(&out)]).status.code(), Some(1));

    let tiny = write_image(&dir, "tiny.pgm", &ImageGrid::filled(2, 2, 9).unwrap());
    assert_eq!(run(&["kernel", "--input", s(&tiny), "--out", s(&out)]).status.code(), Some(2));
}

#[test]
fn pooling_halves_the_image() {
    let dir = TempDir::new().unwrap();
    let input = write_image(&dir, "in.pgm", &ImageGrid::new(2, 2, vec![1, 3, 2, 4]).unwrap());
    let out = path(&dir, "pool.pgm");
    assert!(run(&["pool", "--input", s(&input), "--out", s(&out)]).status.success());
    let pooled = read_image(&out);
    assert_eq!((pooled.width(), pooled.height(), pooled.data()), (1, 1, &[4u8][..]));
}

#[test]
fn ann_train_then_eval_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let model = path(&dir, "net.model");
    let train = run(&["ann", "train", "--dataset", dataset(), "--seed", "42", "--out", s(&model)]);
    assert!(train.status.success(), "{}", String::from_utf8_lossy(&train.stderr));
    assert!(dir.path().join("net.model.split").exists());
    assert!(dir.path().join("net.model.meta.json").exists());

    let eval = |mode: &str| stdout(&run(&["ann", "eval", "--dataset", dataset(), "--model", s(&model), "--mode", mode]));
    let report = eval("ideal");
    assert_eq!(report, eval("ideal"));
    let test_line = report.lines().find(|l| l.starts_with("test:")).unwrap();
    let acc: f64 = test_line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(acc >= 0.90, "{test_line}");
    assert!(eval("bridge").starts_with("mode = bridge"));

    // A second training run with the same seed writes the same model.
    let again = path(&dir, "again.model");
    assert!(run(&["ann", "train", "--dataset", dataset(), "--seed", "42", "--out", s(&again)]).status.success());
    assert_eq!(std::fs::read(&model).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn missing_dataset_explains_how_to_fetch_it() {
    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "absent.data");
    let o = run(&["ann", "train", "--dataset", s(&missing), "--out", s(&path(&dir, "m"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("archive.ics.uci.edu"));
}

#[test]
fn block_sweeps() {
    let dir = TempDir::new().unwrap();
    let relu = path(&dir, "relu.csv");
    assert!(run(&["sweep", "relu", "--out", s(&relu)]).status.success());
    let rows = csv_rows(&relu);
    assert_eq!(rows.len(), 201);
    assert!((rows[0][0] + 1e-3).abs() < 1e-15);
    assert!(rows.iter().all(|r| r[1] == r[0].max(0.0)));

    let pool = path(&dir, "maxpool.csv");
    assert!(run(&["sweep", "maxpool", "--out", s(&pool)]).status.success());
    for r in csv_rows(&pool) {
        assert!((r[1] - r[0].max(0.7)).abs() <= 1e-9);
    }

    let tanh = path(&dir, "tanh.csv");
    assert!(run(&["sweep", "tanh", "--out", s(&tanh)]).status.success());
    for r in csv_rows(&tanh) {
        // m x / (x^2 + c) with the default seed is 3s / (s^2 + 3) in s = x / 1 mA.
        let u = r[0] / 1e-3;
        assert!((r[1] - 3.0 * u / (u * u + 3.0)).abs() <= 1e-9 * r[1].abs());
    }

    for block in ["squarer", "divider", "multiplier"] {
        let out = path(&dir, &format!("{block}.csv"));
        assert!(run(&["sweep", block, "--out", s(&out)]).status.success());
        assert!(csv_rows(&out).len() > 90);
    }
    assert_eq!(run(&["sweep", "sigmoid", "--out", s(&tanh)]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "relu", "--step", "0", "--out", s(&tanh)]).status.code(), Some(1));
}
