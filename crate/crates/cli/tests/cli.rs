use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_wiretap");

const WIRETAP: &str = r#"{
  "input_size": 2,
  "legit": [[[0.97, 0.03], [0.03, 0.97]]],
  "eaves": [[[0.65, 0.35], [0.35, 0.65]]],
  "pairing": "matched"
}"#;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ch.json"), WIRETAP).unwrap();
    dir
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn capacity_report_envelope() {
    let dir = setup();
    let out = run(dir.path(), &["capacity", "--channels", "ch.json", "--regime", "no-csi"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "capacity");
    // h(0.35) - h(0.03) at the uniform input
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 0.7396761975).abs() < 1e-6, "{value}");
}

#[test]
fn degraded_on_non_degraded_family_exits_2() {
    let dir = setup();
    fs::write(
        dir.path().join("nd.json"),
        r#"{"input_size": 2, "legit": [[[0.8, 0.2], [0.2, 0.8]]], "eaves": [[[1, 0], [0, 1]]]}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["capacity", "--channels", "nd.json", "--regime", "degraded"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("eavesdropper channel 0") && err.contains("legitimate channel 0"),
        "{err}"
    );
}

#[test]
fn malformed_channel_file_exits_2_with_line() {
    let dir = setup();
    fs::write(
        dir.path().join("bad.json"),
        "{\n  \"input_size\": 2,\n  \"legit\": [[[0.5, 0.6],\n    [0.5, 0.5]]],\n  \"eaves\": [[[1, 0], [0, 1]]]\n}",
    )
    .unwrap();
    let out = run(dir.path(), &["capacity", "--channels", "bad.json", "--regime", "csi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = run(
        dir.path(),
        &["capacity", "--channels", "missing.json", "--regime", "csi"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn long_blocklength_exits_3() {
    let dir = setup();
    let out = run(
        dir.path(),
        &[
            "simulate",
            "--channels",
            "ch.json",
            "--regime",
            "csi",
            "--n",
            "30",
            "--override-J",
            "2",
            "--override-L",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn simulate_sweep_then_attack() {
    let dir = setup();
    let out = run(
        dir.path(),
        &[
            "simulate",
            "--channels",
            "ch.json",
            "--regime",
            "csi",
            "--n",
            "6,8,10",
            "--input",
            "uniform",
            "--override-J",
            "2",
            "--override-L",
            "4",
            "--codebook-out",
            "cb.json",
            "--csv",
            "sweep.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let runs = json(&out)["result"]["runs"].as_array().unwrap().clone();
    assert_eq!(runs.len(), 3);
    assert_eq!(runs[0]["paper_scaled"], false);

    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n,delta,seed,messages,message_rate,avg_error"));
    let errors: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");

    let out = run(
        dir.path(),
        &[
            "attack",
            "--channels",
            "ch.json",
            "--codebook",
            "cb.json",
            "--state",
            "0",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let block = &json(&out)["result"]["blocks"][0];
    assert_eq!(block["decoding"]["holds"], true);
    assert_eq!(block["identification"]["holds"], true);

    let out = run(
        dir.path(),
        &[
            "attack",
            "--channels",
            "ch.json",
            "--codebook",
            "cb.json",
            "--state",
            "4",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_floor_without_override_exits_2() {
    let dir = setup();
    let out = run(
        dir.path(),
        &[
            "simulate",
            "--channels",
            "ch.json",
            "--regime",
            "csi",
            "--n",
            "4",
            "--tau",
            "0.8",
        ],
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn examples_are_byte_identical_across_runs() {
    let dir = setup();
    for cmd in ["example1", "example2"] {
        let a = run(dir.path(), &[cmd]);
        let b = run(dir.path(), &[cmd]);
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v = json(&a);
        assert!(v["result"]["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["passed"] == true));
    }
}

#[test]
fn simulate_is_deterministic_for_fixed_seed() {
    let dir = setup();
    let args = [
        "simulate",
        "--channels",
        "ch.json",
        "--regime",
        "csi",
        "--n",
        "8",
        "--override-J",
        "3",
        "--override-L",
        "2",
        "--seed",
        "7",
    ];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
