use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn radlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radlab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn preset(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn version_prints_the_package_version() {
    let o = radlab(&["version"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), format!("radlab {}", env!("CARGO_PKG_VERSION")));
}

#[test]
fn run_writes_four_artifacts_and_reruns_identically_from_its_manifest() {
    let a = tempfile::tempdir().unwrap();
    let out = a.path().to_str().unwrap();
    let o = radlab(&["run", "--config", &preset("rarefactive.toml"), "--out", out, "--resolution", "64", "--workers", "2", "--seed", "11"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    for f in ["solution.csv", "gradients.csv", "report.csv", "manifest.txt"] {
        assert!(a.path().join(f).is_file(), "{f} missing");
    }
    let report = fs::read_to_string(a.path().join("report.csv")).unwrap();
    assert!(report.starts_with("check_id,pass,margin,r,t,tolerance\n"));
    let solution = fs::read_to_string(a.path().join("solution.csv")).unwrap();
    assert!(solution.starts_with("t,r,w,z,u,h,S,xi,alpha_fd,beta_fd\n"));

    let b = tempfile::tempdir().unwrap();
    let manifest = a.path().join("manifest.txt");
    let o = radlab(&["run", "--config", manifest.to_str().unwrap(), "--out", b.path().to_str().unwrap(), "--seed", "11"]);
    assert_eq!(code(&o), 0);
    for f in ["solution.csv", "gradients.csv", "report.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn compression_preset_blows_up_as_predicted() {
    let d = tempfile::tempdir().unwrap();
    let o = radlab(&["run", "--config", &preset("compression.toml"), "--out", d.path().to_str().unwrap(), "--resolution", "256"]);
    assert_eq!(code(&o), 0);
    let m: toml::Table = toml::from_str(&fs::read_to_string(d.path().join("manifest.txt")).unwrap()).unwrap();
    assert_eq!(m["blowup"]["classification"].as_str(), Some("theorem-consistent"));
    assert!(m["blowup"]["observed"].as_float().is_some());
}

#[test]
fn missing_gamma_is_a_config_error_naming_the_key() {
    let d = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(configs().join("rarefactive.toml")).unwrap().replace("gamma = 1.4\n", "");
    let cfg = d.path().join("bad.toml");
    fs::write(&cfg, text).unwrap();
    let o = radlab(&["run", "--config", cfg.to_str().unwrap(), "--out", d.path().join("out").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gamma"), "{err}");
    assert!(!d.path().join("out").join("manifest.txt").exists());
}

#[test]
fn audit_exit_code_follows_the_a4_flag() {
    let d = tempfile::tempdir().unwrap();
    // constant radial data fails A4 only
    let text = "[gas]\ngamma = 1.4\nK = 1.0\nc_v = 1.0\nm = 1\n\n[domain]\nb1 = 1.0\nb2 = 2.0\nt0 = 0.1\nresolution = 32\n\n[family]\nkind = \"constant\"\nrho = 1.0\nu = 8.0\n";
    let cfg = d.path().join("constant.toml");
    fs::write(&cfg, text).unwrap();
    let (cfg, out) = (cfg.to_str().unwrap(), d.path().to_str().unwrap());
    assert_eq!(code(&radlab(&["audit", "--config", cfg, "--out", out])), 2);
    assert_eq!(code(&radlab(&["audit", "--config", cfg, "--out", out, "--no-check-a4"])), 0);
    assert_eq!(code(&radlab(&["audit", "--config", cfg, "--out", out, "--no-check-a4", "--check-a4"])), 2);
    let profile = fs::read_to_string(d.path().join("profile.csv")).unwrap();
    assert!(profile.starts_with("r,rho0,u0,S0,alpha0,beta0\n"));
    assert_eq!(profile.lines().count(), 34);
    assert_eq!(code(&radlab(&["audit", "--config", &preset("steady.toml"), "--out", out])), 0);
}

#[test]
fn sweep_writes_one_phase_row_per_point() {
    let d = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(configs().join("rarefactive.toml")).unwrap().replace("enabled = true", "enabled = false")
        + "\n[sweep]\naxes = [{ key = \"family.u_slope\", values = [0.3, 0.5] }, { key = \"family.rho\", values = [1.0, -1.0] }]\n";
    let cfg = d.path().join("sweep.toml");
    fs::write(&cfg, text).unwrap();
    let o = radlab(&["sweep", "--config", cfg.to_str().unwrap(), "--out", d.path().to_str().unwrap(), "--resolution", "32", "--workers", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let phase = fs::read_to_string(d.path().join("phase.csv")).unwrap();
    let lines: Vec<_> = phase.lines().collect();
    assert_eq!(lines[0], "point,family.u_slope,family.rho,min_alpha0,min_beta0,n_of_t,outcome,classification,checks_pass,error");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].contains(",error,"), "{}", lines[2]);
}
