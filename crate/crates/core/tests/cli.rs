use std::path::PathBuf;
use std::process::{Command, Output};

fn dsusy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsusy"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_timings(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

fn temp_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dsusy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "run",
        "random-admissible-d3",
        "--seed",
        "3",
        "--suite",
        "background-audit",
        "--suite",
        "bracket-audit",
    ];
    let a = dsusy(&args);
    let b = dsusy(&args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(without_timings(&stdout(&a)), without_timings(&stdout(&b)));
    let text_a = serde_json::to_string(&without_timings(&stdout(&a))).unwrap();
    let text_b = serde_json::to_string(&without_timings(&stdout(&b))).unwrap();
    assert_eq!(text_a, text_b);
}

#[test]
fn list_shows_builtins_and_configs() {
    let o = dsusy(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let builtins: Vec<&str> = out.lines().filter(|l| l.starts_with("builtin")).collect();
    assert_eq!(builtins.len(), 5);
    for name in [
        "flat-d3",
        "flat-d3-killing",
        "random-admissible-d3",
        "g2h3",
        "g2h3-abelian",
    ] {
        assert!(
            builtins
                .iter()
                .any(|l| l.split_whitespace().nth(1) == Some(name)),
            "{name}"
        );
    }
    let configs = out.lines().filter(|l| l.starts_with("config")).count();
    let on_disk = std::fs::read_dir("scenarios")
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == "json")
        })
        .count();
    assert_eq!(configs, on_disk);
}

#[test]
fn exports() {
    let o = dsusy(&[
        "export",
        "X2_1",
        "--scenario",
        "flat-d3",
        "--format",
        "latex",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).trim(), "0");

    let o = dsusy(&[
        "export",
        "a_table",
        "--scenario",
        "flat-d3",
        "--format",
        "json",
    ]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        let k = r["k"].as_u64().unwrap();
        assert_eq!(r["total"].as_u64().unwrap(), 1 << (k - 1));
    }

    let o = dsusy(&["export", "X3_1", "--scenario", "g2h3", "--format", "json"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["arguments"].as_array().unwrap().len(), 3);

    assert_eq!(
        dsusy(&["export", "nonsense", "--scenario", "flat-d3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn flipped_omega_fails_with_residuals() {
    let o = dsusy(&["run", "scenarios/d7-omega-flip.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let suite = &v["suites"][0];
    assert_eq!(suite["suite"], "clifford-audit");
    assert_eq!(suite["passed"], false);
    let failed: Vec<&serde_json::Value> = suite["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert!(!failed.is_empty());
    assert!(failed
        .iter()
        .all(|c| !c["residual"].as_array().unwrap().is_empty()));
}

#[test]
fn config_errors_exit_2() {
    let bad = temp_config("unknown-key.json", "{\n  \"name\": \"x\",\n  \"background\": {\"builtin\": \"flat-d3\"},\n  \"sutes\": []\n}\n");
    let o = dsusy(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("sutes"), "{err}");

    let bad = temp_config(
        "bad-rep.json",
        r#"{"name": "x", "background": {"rep": "d7", "omega_sign": 3}}"#,
    );
    let o = dsusy(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("background.omega_sign"));

    assert_eq!(dsusy(&["run", "no-such-scenario"]).status.code(), Some(2));
}

#[test]
fn writes_to_out_path() {
    let out = std::env::temp_dir().join(format!("dsusy-out-{}.txt", std::process::id()));
    let o = dsusy(&[
        "run",
        "flat-d3",
        "--suite",
        "background-audit",
        "--format",
        "text",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("scenario flat-d3 (seed 0, q_max 2): PASS"));
}
