use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qlmass")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(cmd: &str, config: &Path, out: &Path) -> Output {
    Command::new(bin()).args([cmd, "--config"]).arg(config).arg("--out").arg(out).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn report(out: &Path, cmd: &str) -> Value {
    let text = std::fs::read_to_string(out.join(format!("{cmd}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn passing_run_exits_zero_and_writes_report() {
    let out = tempfile::tempdir().unwrap();
    let o = run("mass-liu-yau", &configs().join("schwarzschild-sphere.toml"), out.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = report(out.path(), "mass-liu-yau");
    assert_eq!(rep["schema_version"], 1);
    assert_eq!(rep["command"], "mass-liu-yau");
    assert_eq!(rep["passed"], true);
    assert!(rep["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l == "mass-liu-yau: pass"));
}

#[test]
fn failed_check_exits_two_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "coarse.toml",
        "[spacetime]\nkind = \"minkowski\"\n[surface]\nkind = \"graph\"\nr_coeffs = [2.0, 0.0, 0.4]\nt_coeffs = [0.0, 0.3, 0.2]\n[resolution]\nn_theta = 4\nn_phi = 8\n",
    );
    let out = dir.path().join("out");
    let o = run("verify-minkowski-formula", &cfg, &out);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
    let rep = report(&out, "verify-minkowski-formula");
    assert_eq!(rep["passed"], false);
}

#[test]
fn config_errors_exit_one_without_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.toml", "[spacetime]\nkind = \"minkowski\"\nbogus_key = 3\n"),
        ("horizon.toml", "[spacetime]\nkind = \"schwarzschild\"\nmass = 1.0\n[surface]\nkind = \"coordinate-sphere\"\nradius = 1.5\n"),
        ("negative.toml", "[spacetime]\nkind = \"schwarzschild\"\nmass = -1.0\n"),
        ("grid.toml", "[spacetime]\nkind = \"minkowski\"\n[resolution]\nn_theta = 2\nn_phi = 128\n"),
    ];
    for (name, body) in cases {
        let cfg = write_config(dir.path(), name, body);
        let out = dir.path().join(format!("out-{name}"));
        let o = run("mass-liu-yau", &cfg, &out);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(!out.join("mass-liu-yau.json").exists(), "{name} left a report");
    }
    let o = run("mass-liu-yau", &dir.path().join("missing.toml"), dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_key_is_named_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "u.toml", "[spacetime]\nkind = \"minkowski\"\n\n[surface]\nradious = 3.0\n");
    let o = run("mass-liu-yau", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("radious"), "{err}");
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn hypothesis_violation_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "anti.toml",
        "[spacetime]\nkind = \"schwarzschild\"\nmass = 1.0\n[surface]\nkind = \"graph\"\nr_coeffs = [6.0, 0.0, 2.5]\n[reference]\nkind = \"euclidean3\"\n",
    );
    let out = dir.path().join("out");
    let o = run("bound-check", &cfg, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive definite"));
    assert!(!out.join("bound-check.json").exists());
}

#[test]
fn bad_arguments_exit_one() {
    let o = Command::new(bin()).args(["no-such-command", "--config", "x.toml"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(bin()).arg("mass-liu-yau").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["verify-cky", "limit-adm"] {
        let cfg = configs().join(if cmd == "verify-cky" { "cky-schwarzschild.toml" } else { "limit-adm.toml" });
        assert_eq!(run(cmd, &cfg, a.path()).status.code(), Some(0));
        assert_eq!(run(cmd, &cfg, b.path()).status.code(), Some(0));
        let strip = |p: &Path| {
            let mut v = report(p, cmd);
            v.as_object_mut().unwrap().remove("wall_time_seconds");
            serde_json::to_string(&v).unwrap()
        };
        assert_eq!(strip(a.path()), strip(b.path()), "{cmd}");
        let csv = |p: &Path| std::fs::read(p.join(format!("{cmd}.csv"))).ok();
        assert_eq!(csv(a.path()), csv(b.path()));
    }
}

#[test]
fn limit_csv_has_expected_columns() {
    let out = tempfile::tempdir().unwrap();
    let o = run("limit-adm", &configs().join("limit-adm.toml"), out.path());
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_path(out.path().join("limit-adm.csv")).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "radius");
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        for cell in row.iter() {
            assert!(cell.parse::<f64>().unwrap().is_finite());
        }
    }
}
