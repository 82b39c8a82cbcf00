//! End-to-end runs of the `faldpc` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");

fn artifact() -> PathBuf {
    Path::new(DATA).join("lut_8023an_4p5db_q4_q3_i5.json")
}

fn faldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faldpc"))
        .args(args)
        .env_remove("FALDPC_WORKERS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&faldpc(&["--help"])), 0);
    assert_eq!(code(&faldpc(&["--version"])), 0);
    assert_eq!(code(&faldpc(&["simulate", "--help"])), 0);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&faldpc(&[])), 1);
    assert_eq!(code(&faldpc(&["frobnicate"])), 1);
    assert_eq!(code(&faldpc(&["design", "--q-msg", "1"])), 1);
    assert_eq!(code(&faldpc(&["design", "--tree-shape", "((c c) L"])), 1);
    assert_eq!(code(&faldpc(&["design", "--code", "no-such-code"])), 1);
    assert_eq!(code(&faldpc(&["pipeline-report", "--freq-ghz", "0"])), 1);
    assert_eq!(code(&faldpc(&["pipeline-report", "--n", "0"])), 1);
    assert_eq!(code(&faldpc(&["simulate", "--snr-list", "a,b"])), 1);
}

#[test]
fn design_on_toy_code_writes_artifact_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("toy.json");
    let r = faldpc(&["design", "--code", "3-6-96", "--snr-db", "2.5", "--iters", "1", "--q-ch", "2", "--q-msg", "2", "--out", p(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert!(stdout(&r).contains("iteration 1: I(m; x)"));
    let a = faldpc::artifact::DesignArtifact::load(&out).unwrap();
    assert_eq!((a.vn_trees.len(), a.channel.levels, a.message_levels()), (1, 4, 4));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("toy.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "design");
    assert_eq!(manifest["artifact_hash"], a.hash().unwrap());
    assert_eq!(manifest["config"]["iters"], 1);
}

#[test]
fn design_reproduces_shipped_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lut.json");
    let r = faldpc(&["design", "--code", "802.3an-like", "--snr-db", "4.5", "--iters", "5", "--q-ch", "4", "--q-msg", "3", "--out", p(&out)]);
    assert_eq!(code(&r), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(artifact()).unwrap());
    assert_eq!(stdout(&r).lines().filter(|l| l.starts_with("iteration")).count(), 5);
}

#[test]
fn design_from_alist_matches_generated_code() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let alist = Path::new(DATA).join("regular_3_6_96.alist");
    assert_eq!(code(&faldpc(&["design", "--alist", p(&alist), "--snr-db", "2.5", "--iters", "2", "--out", p(&a)])), 0);
    assert_eq!(code(&faldpc(&["design", "--generated-code", "3-6-96", "--snr-db", "2.5", "--iters", "2", "--out", p(&b)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(code(&faldpc(&["design", "--alist", p(&dir.path().join("missing.alist"))])), 2);
}

#[test]
fn simulate_is_repeatable_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let out = dir.path().join(name);
        let r = faldpc(&[
            "simulate", "--code", "3-6-96", "--decoder", "float", "--snr-list", "1,2.5", "--target-errors", "20",
            "--max-frames", "2000", "--seed", "9", "--workers", workers, "--out", p(&out),
        ]);
        assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "1"));
    assert_eq!(a, run("c.csv", "3"));
    let rows = faldpc::sim::parse_csv(&a).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].1 >= rows[1].1);
    let manifest = std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap();
    assert!(manifest.contains("\"seed\": 9"));
}

#[test]
fn simulate_high_snr_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fer.csv");
    let r = faldpc(&[
        "simulate", "--artifact", p(&artifact()), "--snr-list", "10", "--max-frames", "100", "--extended", "--out", p(&out),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(out).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&row[..7], &[10.0, 0.0, 100.0, 0.0, 0.0, 0.0, 0.0]);
    // Wilson upper bound for zero errors: z^2 / (n + z^2)
    let z2 = 1.959_963_984_540_054f64.powi(2);
    assert!((row[7] - z2 / (100.0 + z2)).abs() < 1e-12);
}

#[test]
fn workers_default_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fer.csv");
    let r = Command::new(env!("CARGO_BIN_EXE_faldpc"))
        .args(["simulate", "--code", "3-6-96", "--decoder", "float", "--snr-list", "3", "--max-frames", "10", "--out", p(&out)])
        .env("FALDPC_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&r), 0);
    let manifest = std::fs::read_to_string(dir.path().join("fer.csv.manifest.json")).unwrap();
    assert!(manifest.contains("\"workers\": 2"));
}

#[test]
fn artifact_code_mismatch_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fer.csv");
    let r = faldpc(&["simulate", "--code", "3-6-96", "--artifact", p(&artifact()), "--snr-list", "3", "--max-frames", "10", "--out", p(&out)]);
    assert_eq!(code(&r), 2);
    let r = faldpc(&["simulate", "--artifact", p(&dir.path().join("absent.json")), "--out", p(&out)]);
    assert_eq!(code(&r), 2);
    std::fs::write(dir.path().join("bad.json"), "{\"format_version\": 1}").unwrap();
    let r = faldpc(&["simulate", "--artifact", p(&dir.path().join("bad.json")), "--out", p(&out)]);
    assert_eq!(code(&r), 2);
}

#[test]
fn decode_strong_positive_frame() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (dir.path().join("llr.txt"), dir.path().join("bits.txt"));
    std::fs::write(&input, "12.5\n".repeat(2048)).unwrap();
    for decoder in ["lut", "float", "fixed"] {
        let r = faldpc(&["decode", "--decoder", decoder, "--artifact", p(&artifact()), "--llr-file", p(&input), "--out", p(&out)]);
        assert_eq!(code(&r), 0, "{decoder}: {}", String::from_utf8_lossy(&r.stderr));
        let bits = std::fs::read_to_string(&out).unwrap();
        assert_eq!(bits, "0\n".repeat(2048));
        assert!(String::from_utf8_lossy(&r.stderr).contains("syndrome satisfied"));
    }
}

#[test]
fn decode_quantized_labels() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (dir.path().join("labels.txt"), dir.path().join("bits.txt"));
    let mut text = "15\n".repeat(2048);
    text.replace_range(0..3, "0\n\n");
    std::fs::write(&input, &text).unwrap();
    let r = faldpc(&["decode", "--artifact", p(&artifact()), "--input", "quantized", "--llr-file", p(&input), "--out", p(&out)]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "0\n".repeat(2048));

    std::fs::write(&input, "16\n".repeat(2048)).unwrap();
    let r = faldpc(&["decode", "--artifact", p(&artifact()), "--input", "quantized", "--llr-file", p(&input), "--out", p(&out)]);
    assert_eq!(code(&r), 2);
}

#[test]
fn decode_rejects_wrong_length_and_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (dir.path().join("llr.txt"), dir.path().join("bits.txt"));
    std::fs::write(&input, "1.0\n".repeat(2047)).unwrap();
    let r = faldpc(&["decode", "--artifact", p(&artifact()), "--llr-file", p(&input), "--out", p(&out)]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("expected 2048, got 2047"));
    std::fs::write(&input, "x\n".repeat(2048)).unwrap();
    let r = faldpc(&["decode", "--artifact", p(&artifact()), "--llr-file", p(&input), "--out", p(&out)]);
    assert_eq!(code(&r), 2);
}

#[test]
fn pipeline_report_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let r = faldpc(&["pipeline-report", "--json", p(&json)]);
    assert_eq!(code(&r), 0);
    let text = stdout(&r);
    for needle in ["1665", "1014", "12.30", "20.20", "407552", "647168", "0.6000", "0.6286"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["variants"][0]["report"]["registers"]["total_bits"], 407_552);
    assert_eq!(v["variants"][1]["report"]["registers"]["total_bits"], 647_168);

    let r = faldpc(&["pipeline-report", "--variant", "lut"]);
    assert!(stdout(&r).contains("LUT-based") && !stdout(&r).contains("Adder-based"));
}
