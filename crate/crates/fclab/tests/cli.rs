//! End-to-end CLI checks: config files, flag overrides, exit codes.

use std::process::Command;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_fclab")
}

fn tmp_dir(tag: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("fclab_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn ei_suite_passes_with_config_file() {
    let dir = tmp_dir("cfg");
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "# envelope sweep\n\
         eps-min = 1e-6\n\
         eps-max = 10\n\
         eps-count = 50\n\
         seed = 3\n",
    )
    .unwrap();
    let out = Command::new(exe())
        .args(["ei", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[PASS] ei::ei_sandwich"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn flags_override_config_file() {
    let dir = tmp_dir("override");
    let cfg = dir.join("run.cfg");
    // the file asks for an eps grid the flag then overrides
    std::fs::write(&cfg, "eps-min = 1e-4\neps-max = 1.0\neps-count = 20\n").unwrap();
    let out = Command::new(exe())
        .args(["ei", "--config"])
        .arg(&cfg)
        .args(["--eps-count", "30", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // 30 rows + header
    let csv = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "csv"))
        .unwrap();
    let lines = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(lines, 31);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_config_key_is_exit_code_3() {
    let dir = tmp_dir("badkey");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "epsilon-minimum = 1e-4\n").unwrap();
    let out = Command::new(exe())
        .args(["ei", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn partial_eps_grid_is_exit_code_3() {
    let out = Command::new(exe())
        .args(["sharpness", "--eps-min", "1e-6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_delta_is_exit_code_3() {
    let out = Command::new(exe())
        .args(["sharpness", "--delta", "0.7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn plot_script_references_csv() {
    let dir = tmp_dir("plot");
    let out = Command::new(exe())
        .args(["vitse", "--emit-plot-script", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let gp = std::fs::read_to_string(dir.join("vitse.gp")).unwrap();
    let csv_name = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .find(|n| n.ends_with(".csv"))
        .unwrap();
    assert!(gp.contains(&csv_name), "plot script must reference the CSV by name");
    std::fs::remove_dir_all(&dir).ok();
}
