use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_editdict");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("EDITDICT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_words(dir: &Path, name: &str, words: &[&str]) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, words.join("\n")).unwrap();
    p
}

fn sample_words() -> Vec<String> {
    let mut out = vec!["ALABAMA".to_string(), "ALASKA".into(), "ARIZONA".into()];
    let mut x = 12345u32;
    for _ in 0..400 {
        let len = 3 + (x % 8) as usize;
        let w: String = (0..len)
            .map(|_| {
                x = x.wrapping_mul(1_103_515_245).wrapping_add(12345);
                (b'a' + (x >> 16) as u8 % 6) as char
            })
            .collect();
        out.push(w);
    }
    out
}

fn build_sample(dir: &TempDir, extra: &[&str]) -> (PathBuf, PathBuf) {
    let words = sample_words();
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let input = write_words(dir.path(), "words.txt", &refs);
    let output = dir.path().join("ix.bin");
    let mut args = vec!["build", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (input, output)
}

#[test]
fn build_then_query() {
    let dir = TempDir::new().unwrap();
    let (_, ix) = build_sample(&dir, &["--errors", "1", "--load-factor", "0.7", "--signatures", "--compact"]);
    let o = run(&["query", "--index", ix.to_str().unwrap(), "--k", "1", "--pattern", "ALABAMX"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ALABAMA\n");
}

#[test]
fn build_reports_sizes() {
    let dir = TempDir::new().unwrap();
    let input = write_words(dir.path(), "w.txt", &["abc", "abd", "abc", "", "x\r"]);
    let ix = dir.path().join("ix.bin");
    let o = run(&["build", "--input", input.to_str().unwrap(), "--output", ix.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("d 3\n"), "{text}");
    assert!(text.contains("n 7\n"), "{text}");
    let bytes = std::fs::metadata(&ix).unwrap().len();
    assert!(text.contains(&format!("file_bytes {bytes}\n")));
    assert!(text.contains("build_seconds "));
}

#[test]
fn stdin_mode() {
    let dir = TempDir::new().unwrap();
    let (_, ix) = build_sample(&dir, &["--errors", "2"]);
    let mut child = Command::new(BIN)
        .args(["query", "--index", ix.to_str().unwrap(), "--k", "2", "--stdin"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"AXABAYA\r\nZZZZZZZZZZZZZ\nALASKA\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(lines, vec!["ALABAMA", "", "ALASKA"]);
}

#[test]
fn verify_passes_on_matching_input() {
    let dir = TempDir::new().unwrap();
    let (input, ix) = build_sample(&dir, &["--errors", "2", "--signatures"]);
    let o = run(&[
        "verify", "--index", ix.to_str().unwrap(), "--input", input.to_str().unwrap(), "--k", "2", "--samples", "300",
        "--seed", "7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 mismatches"));
}

#[test]
fn verify_flags_a_different_dictionary() {
    let dir = TempDir::new().unwrap();
    let (_, ix) = build_sample(&dir, &[]);
    let other = write_words(dir.path(), "other.txt", &["ALABAMA", "ALASKA", "ARIZONA", "OREGON"]);
    let o = run(&["verify", "--index", ix.to_str().unwrap(), "--input", other.to_str().unwrap(), "--samples", "200"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn bench_json_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (_, ix) = build_sample(&dir, &["--errors", "2"]);
    let args = [
        "bench", "--index", ix.to_str().unwrap(), "--queries", "50", "--rounds", "3", "--seed", "4", "--k", "2", "--json",
    ];
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let means: Vec<f64> = v["round_means_us"].as_array().unwrap().iter().map(|m| m.as_f64().unwrap()).collect();
    assert_eq!(means.len(), 3);
    let avg = means.iter().sum::<f64>() / 3.0;
    assert!((v["mean_us"].as_f64().unwrap() - avg).abs() < 1e-9);
    assert_eq!(v["empty_results"], 0);

    // counters depend only on the generated queries, not on timing or threads
    let mut threaded: Vec<&str> = args.to_vec();
    threaded.extend(["--threads", "4"]);
    let t: serde_json::Value = serde_json::from_slice(&run(&threaded).stdout).unwrap();
    assert_eq!(v["totals"], t["totals"]);
    let again: serde_json::Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    assert_eq!(v["totals"], again["totals"]);
}

#[test]
fn bench_single_sample() {
    let dir = TempDir::new().unwrap();
    let (_, ix) = build_sample(&dir, &[]);
    let o = run(&["bench", "--index", ix.to_str().unwrap(), "--queries", "1", "--rounds", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["round_means_us"].as_array().unwrap().len(), 1);
}

#[test]
fn seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let input = write_words(dir.path(), "w.txt", &["alpha", "beta"]);
    let build = |out: &str, env: Option<&str>, seed_flag: Option<&str>| {
        let p = dir.path().join(out);
        let mut c = Command::new(BIN);
        c.args(["build", "--input", input.to_str().unwrap(), "--output", p.to_str().unwrap()]);
        if let Some(s) = seed_flag {
            c.args(["--seed", s]);
        }
        c.env_remove("EDITDICT_SEED");
        if let Some(e) = env {
            c.env("EDITDICT_SEED", e);
        }
        assert!(c.output().unwrap().status.success());
        std::fs::read(p).unwrap()
    };
    let from_env = build("a.bin", Some("99"), None);
    let from_flag = build("b.bin", None, Some("99"));
    let default = build("c.bin", None, None);
    assert_eq!(from_env, from_flag);
    assert_ne!(from_env, default);
}

#[test]
fn stats_histograms() {
    let dir = TempDir::new().unwrap();
    let input = write_words(dir.path(), "w.txt", &["ab", "cb"]);
    let o = run(&["stats", "--input", input.to_str().unwrap(), "--errors", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["histograms"][0]["rows"].as_array().unwrap();
    assert_eq!(rows[0][1].as_f64().unwrap(), 50.0);
    assert_eq!(rows[1][1].as_f64().unwrap(), 50.0);

    let (_, ix) = build_sample(&dir, &["--errors", "2"]);
    let o = run(&["stats", "--index", ix.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("level 1 substitution lists"));
    assert!(text.contains("level 2 substitution lists"));
    assert!(text.contains("occupancy"));
}

#[test]
fn heuristic_binary_worst_case() {
    let dir = TempDir::new().unwrap();
    let words: Vec<String> = (0u32..256).map(|v| format!("{v:08b}")).collect();
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let input = write_words(dir.path(), "bin.txt", &refs);
    let o = run(&["heuristic-bench", "--input", input.to_str().unwrap()]);
    assert_eq!(stdout(&o), "d 256\naverage 32.00\nmax 32\n");
    let single = write_words(dir.path(), "one.txt", &["word"]);
    let o = run(&["heuristic-bench", "--input", single.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["average"].as_f64().unwrap(), v["max"].as_u64().unwrap()), (2.0, 2));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["query", "--index", "x.bin"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    let o = run(&["build", "--input", missing.to_str().unwrap(), "--output", "/dev/null"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.txt"));

    let junk = dir.path().join("junk.bin");
    std::fs::write(&junk, b"not an index").unwrap();
    let o = run(&["query", "--index", junk.to_str().unwrap(), "--pattern", "a"]);
    assert_eq!(o.status.code(), Some(4));

    let (_, ix) = build_sample(&dir, &[]);
    let mut bytes = std::fs::read(&ix).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    std::fs::write(&ix, &bytes).unwrap();
    let o = run(&["query", "--index", ix.to_str().unwrap(), "--pattern", "a"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));

    let (_, ix) = build_sample(&dir, &[]);
    let o = run(&["query", "--index", ix.to_str().unwrap(), "--k", "2", "--pattern", "a"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["build", "--input", "/dev/null", "--output", "/dev/null", "--load-factor", "0.99"]);
    assert_eq!(o.status.code(), Some(2));
}
