//! End-to-end CLI behavior: exit codes, artifact formats, selftest.

use std::process::Command;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_aperiodica")
}

#[test]
fn selftest_passes_and_lists() {
    let out = Command::new(exe()).arg("selftest").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("ok ")).count() >= 30);
    assert!(!text.contains("not ok"));

    let list = Command::new(exe()).args(["selftest", "--list"]).output().unwrap();
    assert!(list.status.success());
    let names = String::from_utf8(list.stdout).unwrap();
    assert!(names.contains("quadratic-tau-algebraic-identity"));
    assert!(!names.contains("ok 1"));
}

#[test]
fn generate_roundtrips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("comb.csv");
    let status = Command::new(exe())
        .args([
            "generate",
            "--kind",
            "thue-morse",
            "--window",
            "0,64",
            "--seed",
            "3",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let (comb, sidecar) = aperiodica::io::read_comb_csv(&out).unwrap();
    assert_eq!(comb.len(), 64);
    assert_eq!(sidecar.seed, 3);
    assert!(out.with_extension("json").exists());
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.ini");
    std::fs::write(&cfg, "kind = lattice\neps = -1\n").unwrap();
    let out = Command::new(exe())
        .args(["run", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // unknown preset is a usage error too
    let out2 = Command::new(exe())
        .args(["run", "--preset", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out2.status.code(), Some(2));

    // unknown config key rejected
    let cfg3 = dir.path().join("unknown.ini");
    std::fs::write(&cfg3, "kind = lattice\nwibble = 3\n").unwrap();
    let out3 = Command::new(exe())
        .args(["run", "--config", cfg3.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out3.status.code(), Some(2));
}

#[test]
fn run_preset_produces_artifacts_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(exe())
        .args([
            "run",
            "--preset",
            "fibonacci-fast",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["comb.csv", "comb.json", "gamma.csv", "gamma.json", "spectrum.csv", "spectrum.json", "report.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], true);
    // every gate entry carries value, tolerance and the gate description
    for gate in report["gates"].as_array().unwrap() {
        assert!(gate["value"].is_number());
        assert!(gate["tolerance"].is_number());
        assert!(gate["gate"].is_string());
        assert!(gate["pass"].is_boolean());
    }
}

#[test]
fn run_ini_config_equivalent_to_json() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("run.ini");
    std::fs::write(
        &ini,
        "kind = lattice\nseed = 2\nnmax = 3\nbase = 100\nkrange = -1.5,1.5\nrange = 6\n",
    )
    .unwrap();
    let out_ini = dir.path().join("ini");
    let st = Command::new(exe())
        .args([
            "run",
            "--config",
            ini.to_str().unwrap(),
            "--out",
            out_ini.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(st.success());

    let json_cfg = dir.path().join("run.json");
    std::fs::write(
        &json_cfg,
        r#"{"generator":{"group":"real-line","seed":2,"kind":"lattice","spacing":[1.0],"weights":"constant"},
            "n_max":3,"base":100.0,"range":6.0,"k_range":[-1.5,1.5]}"#,
    )
    .unwrap();
    let out_json = dir.path().join("json");
    let st2 = Command::new(exe())
        .args([
            "run",
            "--config",
            json_cfg.to_str().unwrap(),
            "--out",
            out_json.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(st2.success());
    // identical generator + sizes give byte-identical CSV artifacts
    for f in ["comb.csv", "gamma.csv", "spectrum.csv"] {
        let a = std::fs::read(out_ini.join(f)).unwrap();
        let b = std::fs::read(out_json.join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between INI and JSON runs");
    }
}

#[test]
fn thue_morse_preset_passes_its_gates() {
    let dir = tempfile::tempdir().unwrap();
    // reduced-size variant of the not-pure-point gate set
    let cfg = dir.path().join("tm.ini");
    std::fs::write(
        &cfg,
        "kind = thue-morse\nseed = 1\nnmax = 5\nexpect = not-pure-point\npurity_gate = 0.05\nmax_atom_intensity = 0.01\nkrange = -1.5,1.5\n",
    )
    .unwrap();
    let out = Command::new(exe())
        .args([
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    let gates = report["gates"].as_array().unwrap();
    assert!(gates.iter().any(|g| g["name"] == "max-atom-intensity"));
}

#[test]
fn verify_and_topology_emit_json_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("lat.json");
    std::fs::write(
        &spec,
        r#"{"group":"real-line","seed":1,"kind":"lattice","spacing":[1.0],"weights":"constant"}"#,
    )
    .unwrap();
    let out = Command::new(exe())
        .args([
            "verify",
            "dworkin",
            "--in",
            spec.to_str().unwrap(),
            "--nmax",
            "4",
            "--tol",
            "0.05",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);

    let comb = dir.path().join("comb.csv");
    let st = Command::new(exe())
        .args([
            "generate",
            "--kind",
            "fibonacci",
            "--window=-50,20",
            "--seed",
            "1",
            "--out",
            comb.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let topo = Command::new(exe())
        .args([
            "topology",
            "repetitivity",
            "--in",
            comb.to_str().unwrap(),
            "--K",
            "0,10",
            "--V",
            "0.05",
            "--t-range",
            "0,40",
            "--t-step",
            "0.01",
            "--dense-r",
            "25",
        ])
        .output()
        .unwrap();
    assert_eq!(topo.status.code(), Some(0), "{}", String::from_utf8_lossy(&topo.stdout));
    let v: serde_json::Value = serde_json::from_slice(&topo.stdout).unwrap();
    assert_eq!(v["dense"], true);
}
