use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fecam_core::fecam::{read_heatmap_csv, FecamLayer};
use fecam_core::forecaster::ForecastModel;
use fecam_core::nncore::DenseLayer;

fn fecam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fecam"))
        .args(args)
        .env_remove("FECAM_OUT")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_manifest(dir: &Path, command: &str) {
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["command"], command);
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert!(m["command_line"].as_array().unwrap().len() > 1);
    assert!(dir.join("config.json").is_file());
}

/// ETT-style file: `date` column plus seven channels, hourly.
fn write_ett_csv(path: &Path, rows: usize) {
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record(["date", "HUFL", "HULL", "MUFL", "MULL", "LUFL", "LULL", "OT"]).unwrap();
    for t in 0..rows {
        let ts = format!("2016-07-{:02} {:02}:00:00", 1 + t / 24, t % 24);
        let mut rec = vec![ts];
        for c in 0..7 {
            let v = (t as f64 * (0.26 + 0.01 * c as f64)).sin() * (1.0 + c as f64) + 0.01 * t as f64;
            rec.push(format!("{v:.6}"));
        }
        w.write_record(&rec).unwrap();
    }
    w.flush().unwrap();
}

#[test]
fn theorems_pass_and_echo_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("th");
    let o = fecam(&["theorems", "--trials", "1000", "--max-len", "512", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("trials=1000 max_len=512"));
    assert!(!stdout.contains("FAIL"));
    assert_manifest(&out, "theorems");
    assert_eq!(json(&out.join("theorems.json"))["trials"], 1000);
}

#[test]
fn theorems_catch_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let o = fecam(&["theorems", "--trials", "50", "--max-len", "64", "--inject-fault", "skip-dc-scale", "--out", p(dir.path())]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("round_trip") && err.contains("worst error"), "{err}");
}

#[test]
fn gibbs_default_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = fecam(&["gibbs", "--n", "10,100,1000,10000", "--wave", "square", "--jump", "2", "--samples", "200", "--out", p(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("gibbs.csv"));
    assert_eq!(header, ["N", "overshoot", "target"]);
    let last = rows.last().unwrap();
    assert!(((last[1] - 0.17897974) / 0.17897974).abs() < 0.005);
    let errs: Vec<f64> = rows.iter().map(|r| (r[1] - r[2]).abs()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    let (header, curves) = read_csv(&dir.path().join("partial_sums.csv"));
    assert_eq!(header, ["x", "exact", "S_10", "S_100", "S_1000", "S_10000"]);
    assert_eq!(curves.len(), 200);
    assert_manifest(dir.path(), "gibbs");
}

#[test]
fn gibbs_refuses_sine() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g");
    let o = fecam(&["gibbs", "--wave", "sine", "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no jump"));
    assert!(!out.exists());
}

#[test]
fn compaction_default_and_ramp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lf");
    let o = fecam(&["compaction", "--ns", "5,10,15,16", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&out.join("compaction.csv"));
    assert_eq!(header, ["n", "dct_err", "dft_err"]);
    for r in &rows[..3] {
        assert!(r[1] < r[2], "{r:?}");
    }
    assert!(rows[3][1] < 1e-9 && rows[3][2] < 1e-9);
    let (header, recon) = read_csv(&out.join("reconstructions.csv"));
    assert_eq!(header.len(), 2 + 2 * 4);
    assert_eq!(recon.len(), 16);
    assert_manifest(&out, "compaction");

    let out = dir.path().join("ramp");
    let o = fecam(&["compaction", "--signal", "ramp", "--ns", "5", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let (_, boundary) = read_csv(&out.join("boundary.csv"));
    assert!(boundary[0][1] < boundary[0][2]);
}

#[test]
fn train_on_csv_writes_artifacts_and_leaves_input_alone() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("ETTm2.csv");
    write_ett_csv(&data, 400);
    let before = std::fs::read(&data).unwrap();
    let out = dir.path().join("run");
    let o = fecam(&[
        "train", "--data", p(&data), "--target", "OT", "--lookback", "24", "--horizon", "12",
        "--epochs", "3", "--lr", "1e-3", "--seed", "1", "--out", p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read(&data).unwrap(), before);
    let m = json(&out.join("metrics.json"));
    assert!(m["mse"].as_f64().unwrap().is_finite());
    assert_eq!(m["L"], 24);
    assert_eq!(m["O"], 12);
    assert_eq!(m["dataset"], "ETTm2");
    // ETT files split 3:1:1
    let s = json(&out.join("summary.json"));
    assert_eq!(s["train_rows"], 240);
    assert_eq!(s["C"], 1);
    let (header, rows) = read_csv_loose(&out.join("loss_history.csv"));
    assert_eq!(header, ["epoch", "train_loss", "val_loss"]);
    assert!(!rows.is_empty() && rows.len() <= 3);
    assert!(out.join("checkpoint.json").is_file());
    assert_manifest(&out, "train");
    assert_eq!(json(&out.join("config.json"))["hyper"]["lookback"], 24);
}

fn read_csv_loose(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn train_missing_file_leaves_no_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = fecam(&["train", "--data", p(&dir.path().join("missing.csv")), "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn train_bad_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad");
    let o = fecam(&["train", "--synthetic", "sinusoid_mix", "--lookback", "96", "--reduction", "5", "--out", p(&out)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("divisible"));
    assert!(!out.exists());
}

#[test]
fn train_divergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = fecam(&[
        "train", "--synthetic", "sinusoid_mix", "--synth-len", "300", "--lookback", "16", "--horizon", "8",
        "--lr", "1e300", "--epochs", "2", "--out", p(dir.path()),
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("diverged"));
    assert_eq!(json(&dir.path().join("manifest.json"))["exit_code"], 3);
}

#[test]
fn train_ablation_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = fecam(&[
        "train", "--synthetic", "sinusoid_mix", "--synth-len", "600", "--lookback", "32", "--horizon", "16",
        "--epochs", "2", "--lr", "1e-3", "--ablation", "--out", p(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let f = json(&dir.path().join("metrics_fecam.json"));
    let pl = json(&dir.path().join("metrics_plain.json"));
    let s = json(&dir.path().join("ablation_summary.json"));
    let (fm, pm) = (f["mse"].as_f64().unwrap(), pl["mse"].as_f64().unwrap());
    assert_eq!(s["fecam_mse"].as_f64().unwrap(), fm);
    let pct = s["reduction_pct"].as_f64().unwrap();
    assert!((pct - (pm - fm) / pm * 100.0).abs() < 1e-9);
}

fn save_zero_checkpoint(path: &Path, lookback: usize, channels: usize) {
    let mut model = ForecastModel::from_parts(
        Some(FecamLayer::with_zero_excitation(lookback, 2).unwrap()),
        DenseLayer::zeros(lookback, 8),
    )
    .unwrap();
    let meta = BTreeMap::from([("channels".to_string(), channels.to_string())]);
    model.to_checkpoint(meta).save(path).unwrap();
}

#[test]
fn attention_untrained_checkpoint_is_half_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("zero.json");
    save_zero_checkpoint(&ckpt, 96, 21);
    let run = |name: &str| -> PathBuf {
        let out = dir.path().join(name);
        let o = fecam(&[
            "attention", "--checkpoint", p(&ckpt), "--synthetic", "sinusoid_mix", "--synth-channels", "21",
            "--synth-len", "800", "--out", p(&out),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        out.join("attention.csv")
    };
    let a = run("a");
    let heat = read_heatmap_csv(&a).unwrap();
    assert_eq!(heat.len(), 96);
    assert!(heat.iter().all(|row| row.len() == 21 && row.iter().all(|&v| v == 0.5)));
    let b = run("b");
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_manifest(&dir.path().join("a"), "attention");
}

#[test]
fn attention_rejects_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("zero.json");
    save_zero_checkpoint(&ckpt, 16, 3);
    let o = fecam(&["attention", "--checkpoint", p(&ckpt), "--synthetic", "sinusoid_mix", "--synth-channels", "4", "--out", p(&dir.path().join("x"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("channels"));

    let mut plain = ForecastModel::from_parts(None, DenseLayer::zeros(16, 8)).unwrap();
    let plain_path = dir.path().join("plain.json");
    plain.to_checkpoint(BTreeMap::new()).save(&plain_path).unwrap();
    let o = fecam(&["attention", "--checkpoint", p(&plain_path), "--synthetic", "sinusoid_mix", "--out", p(&dir.path().join("y"))]);
    assert_eq!(code(&o), 2);

    std::fs::write(dir.path().join("junk.json"), "{not json").unwrap();
    let o = fecam(&["attention", "--checkpoint", p(&dir.path().join("junk.json")), "--synthetic", "sinusoid_mix", "--out", p(&dir.path().join("z"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let env_dir = dir.path().join("from_env");
    let flag_dir = dir.path().join("from_flag");
    let run = |extra: &[&str]| {
        let mut args = vec!["compaction"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_fecam"))
            .args(&args)
            .env("FECAM_OUT", &env_dir)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run(&[])), 0);
    assert!(env_dir.join("compaction.csv").is_file());
    assert_eq!(code(&run(&["--out", p(&flag_dir)])), 0);
    assert!(flag_dir.join("compaction.csv").is_file());
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(code(&fecam(&["gibbs", "--bogus"])), 2);
    assert_eq!(code(&fecam(&["nonsense"])), 2);
}
