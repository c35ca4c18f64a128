use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dixmier_experiments::record::{from_json, CSV_HEADER};
use dixmier_experiments::{ExperimentConfig, ExperimentId};

const BIN: &str = env!("CARGO_BIN_EXE_dixmier-experiments");

fn cli(args: &[&str], out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, c: &ExperimentConfig) -> String {
    let p = dir.join("config.json");
    fs::write(&p, c.to_json()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn passing_run_writes_all_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&["limits-battery", "--threads", "2"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("limits-battery.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER.join(","));
    let rec =
        from_json(&fs::read_to_string(dir.path().join("limits-battery.json")).unwrap()).unwrap();
    assert!(rec.passed && rec.hash_matches());
    assert_eq!(
        rec.config,
        ExperimentConfig::default_for(ExperimentId::LimitsBattery)
    );
    assert!(dir.path().join("limits-battery.timing.json").exists());
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS gamma-harmonic"));
}

#[test]
fn infeasible_configs_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::default_for(ExperimentId::L2Sharpness);
    c.cutoffs.band = Some(64);
    let path = write_config(dir.path(), &c);
    let o = cli(&["l2-sharpness", "--config", &path], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("raise the band"));

    // a cutoff past the dense-matrix cap is refused with sizing advice
    let mut c = ExperimentConfig::default_for(ExperimentId::L1PlusEps);
    c.cutoffs.n_list = vec![4096];
    let path = write_config(dir.path(), &c);
    let o = cli(&["l1-plus-eps", "--config", &path], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lower N"));

    let o = cli(&["l1-residue", "--config", &path], dir.path());
    assert_eq!(o.status.code(), Some(3), "config and subcommand disagree");
}

#[test]
fn failed_predicate_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::default_for(ExperimentId::L1Residue);
    c.cutoffs.n_list = vec![64];
    c.tolerances.insert("residue_rel".into(), 1e-15);
    let path = write_config(dir.path(), &c);
    let o = cli(&["l1-residue", "--config", &path], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let rec = from_json(&fs::read_to_string(dir.path().join("l1-residue.json")).unwrap()).unwrap();
    assert!(!rec.passed);
    assert!(rec
        .checks
        .iter()
        .any(|c| c.name.starts_with("residue-route") && !c.passed));
}

#[test]
fn regression_mode_captures_then_guards() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("golden.csv");
    let g = golden.to_str().unwrap();
    let o = cli(&["non-normal-witness", "--regression", g], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(golden.exists());
    let o = cli(&["non-normal-witness", "--regression", g], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let tampered =
        fs::read_to_string(&golden)
            .unwrap()
            .replacen("tail-seminorm,1,9", "tail-seminorm,1,8", 1);
    fs::write(&golden, tampered).unwrap();
    let o = cli(&["non-normal-witness", "--regression", g], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL regression"));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(
        cli(&["non-normal-witness", "--threads", "3"], a.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        cli(&["non-normal-witness"], b.path()).status.code(),
        Some(0)
    );
    for f in ["non-normal-witness.csv", "non-normal-witness.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}
