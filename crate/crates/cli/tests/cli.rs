use std::path::Path;
use std::process::{Command, Output};

fn jcas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcas"))
        .args(args)
        .env("RUST_BACKTRACE", "0")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("sweep.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: &str = "density_grid = 1e-3, 1e-2\nwindows = 150x150\nn_reps = 10\n";

#[test]
fn sweep_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out.csv");
    let run = jcas(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("lambda,tau,epsilon,eta,window,"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn stdout_matches_file_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out.csv");
    let a = jcas(&["sweep", "--config", &cfg, "--seed", "9"]);
    let b = jcas(&["sweep", "--config", &cfg, "--seed", "9", "--out", out.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, std::fs::read(&out).unwrap());
    let c = jcas(&["sweep", "--config", &cfg, "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let run = jcas(&["sweep", "--config", &cfg, "--engines", "analytic", "--reps", "3"]);
    assert!(run.status.success());
    let text = String::from_utf8(run.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // Analytic-only rows leave the simulated columns empty.
    assert!(!row[5].is_empty() && row[6].is_empty());
    assert_eq!(row[17], "3");
}

#[test]
fn preset_with_config_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "density_grid = 1e-3\nwindows = 150x150\n");
    let run = jcas(&["sweep", "--preset", "fig4", "--config", &cfg, "--engines", "analytic"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    // One density for each of the three tau values.
    assert_eq!(String::from_utf8(run.stdout).unwrap().lines().count(), 4);
}

#[test]
fn dumps_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "density_grid = 1e-2\nwindows = 150x150\nn_reps = 2\nengines = analytic\n");
    let snaps = dir.path().join("snaps");
    let run = jcas(&["sweep", "--config", &cfg, "--dump-snapshots", snaps.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let files: Vec<_> = std::fs::read_dir(&snaps).unwrap().collect();
    assert_eq!(files.len(), 1);
    let text = std::fs::read_to_string(files[0].as_ref().unwrap().path()).unwrap();
    assert!(text.starts_with("id,x,y,mode,"));
}

#[test]
fn reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let run = jcas(&["sweep"]);
    assert!(!run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("nothing to run"));

    let cfg = write_config(dir.path(), "n_reps = 10\nbogus = 3\n");
    let run = jcas(&["sweep", "--config", &cfg]);
    assert!(!run.status.success());
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("line 2") && err.contains("bogus"), "{err}");

    let run = jcas(&["sweep", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert!(!run.status.success());
    let run = jcas(&["sweep", "--preset", "fig9"]);
    assert!(!run.status.success());
}
