use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grc_core::stats::{Aggregates, LevelStats};

struct Sandbox {
    dir: tempfile::TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn grc(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_grc")).current_dir(self.dir.path()).args(args).output().unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.grc(args);
        assert!(out.status.success(), "grc {args:?}: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    }

    fn code(&self, args: &[&str]) -> i32 {
        self.grc(args).status.code().unwrap()
    }
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap()
}

#[test]
fn every_pipeline_produces_the_same_grammar() {
    let sb = Sandbox::new();
    sb.ok(&["gen", "--family", "random", "--param", "3000", "--sigma", "3", "--seed", "7", "-o", "t.txt"]);
    sb.ok(&["build-slp", "-i", "t.txt", "-o", "t.slp"]);
    sb.ok(&["repair", "-i", "t.txt", "--engine", "naive", "-o", "naive.rpg"]);
    sb.ok(&["repair", "-i", "t.txt", "-o", "list.rpg"]);
    sb.ok(&["recompress", "-i", "t.slp", "-o", "scan.rpg"]);
    sb.ok(&["recompress", "-i", "t.slp", "--engine", "fast", "--debug-verify", "-o", "fast.rpg"]);
    sb.ok(&["hybrid", "-i", "t.slp", "-t", "3", "-o", "h3.rpg"]);
    sb.ok(&["hybrid", "-i", "t.slp", "-t", "inf", "--phase1", "fast", "-o", "hinf.rpg"]);
    let reference = read(&sb.path("naive.rpg"));
    for other in ["list.rpg", "scan.rpg", "fast.rpg", "h3.rpg", "hinf.rpg"] {
        assert_eq!(read(&sb.path(other)), reference, "{other}");
    }
    sb.ok(&["decompress", "-i", "scan.rpg", "-o", "back.txt"]);
    sb.ok(&["decompress", "-i", "t.slp", "-o", "slp.txt"]);
    assert_eq!(read(&sb.path("back.txt")), read(&sb.path("t.txt")));
    assert_eq!(read(&sb.path("slp.txt")), read(&sb.path("t.txt")));
    assert!(sb.ok(&["verify", "-a", "t.txt", "-b", "fast.rpg"]).starts_with("identical"));
}

#[test]
fn recursive_fibonacci_slp() {
    let sb = Sandbox::new();
    sb.ok(&["gen", "--family", "fib", "--param", "22", "--emit", "slp", "-o", "f.slp"]);
    sb.ok(&["gen", "--family", "fib", "--param", "22", "-o", "f.txt"]);
    sb.ok(&["recompress", "-i", "f.slp", "--engine", "fast", "-o", "f.rpg"]);
    sb.ok(&["verify", "-a", "f.rpg", "-b", "f.txt"]);
    let agg: Aggregates = serde_json::from_str(sb.ok(&["stats", "-i", "f.slp"]).trim()).unwrap();
    assert_eq!(agg.n, 20);
    assert!(agg.max < 5000);
}

#[test]
fn runs_are_deterministic() {
    let sb = Sandbox::new();
    sb.ok(&["gen", "--family", "thue-morse", "--param", "11", "-o", "t.txt"]);
    sb.ok(&["build-slp", "-i", "t.txt", "-o", "t.slp"]);
    for run in ["a", "b"] {
        let (out, stats) = (format!("{run}.rpg"), format!("{run}.jsonl"));
        sb.ok(&["recompress", "-i", "t.slp", "--engine", "fast", "-o", &out, "--stats", &stats]);
    }
    assert_eq!(read(&sb.path("a.rpg")), read(&sb.path("b.rpg")));
    assert_eq!(read(&sb.path("a.jsonl")), read(&sb.path("b.jsonl")));
}

#[test]
fn stats_aggregates_match_the_level_records() {
    let sb = Sandbox::new();
    sb.ok(&["gen", "--family", "file-copy-mutate", "--param", "6", "--sigma", "4", "--seed", "1", "-o", "t.txt"]);
    sb.ok(&["build-slp", "-i", "t.txt", "-o", "t.slp"]);
    sb.ok(&["recompress", "-i", "t.slp", "-o", "g.rpg", "--stats", "s.jsonl"]);
    let text = fs::read_to_string(sb.path("s.jsonl")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let (agg_line, record_lines) = lines.split_last().unwrap();
    let records: Vec<LevelStats> = record_lines.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
    let agg: Aggregates = serde_json::from_str(agg_line).unwrap();
    let sizes: Vec<u64> = records.iter().map(|r| r.grammar_size.unwrap()).collect();
    assert_eq!(agg.m, records.len() as u64 - 1);
    assert_eq!(agg.max, *sizes.iter().max().unwrap());
    assert_eq!(agg.sum_grammar_size, sizes.iter().sum::<u64>());
    assert_eq!(agg.sum_live_vars, records.iter().map(|r| r.live_vars.unwrap()).sum::<u64>());
    assert_eq!(agg.r, records.last().unwrap().cumulative_r);
    for w in records.windows(2) {
        assert_eq!(w[1].text_len, w[0].text_len - w[0].freq);
    }
    let rpg: serde_json::Value = serde_json::from_str(sb.ok(&["stats", "-i", "g.rpg"]).trim()).unwrap();
    assert_eq!(rpg["m"], agg.m);
    assert_eq!(rpg["textLen"], read(&sb.path("t.txt")).len() as u64);
}

#[test]
fn hybrid_reports_its_switch() {
    let sb = Sandbox::new();
    sb.ok(&["gen", "--family", "fib", "--param", "18", "-o", "t.txt"]);
    sb.ok(&["build-slp", "-i", "t.txt", "-o", "t.slp"]);
    let summary: serde_json::Value =
        serde_json::from_str(sb.ok(&["hybrid", "-i", "t.slp", "-t", "4", "--stats", "s.jsonl", "-o", "g.rpg"]).trim())
            .unwrap();
    let n = read(&sb.path("t.txt")).len() as u64;
    assert!(summary["switchLen"].as_u64().unwrap() * 4 < n);
    let stats = fs::read_to_string(sb.path("s.jsonl")).unwrap();
    assert_eq!(serde_json::from_str::<serde_json::Value>(stats.lines().last().unwrap()).unwrap(), summary);
    assert!(stats.contains("\"phase\":\"text\""));
    assert!(stats.contains("\"phase\":\"recompress\""));
}

#[test]
fn text_formats_are_accepted_everywhere() {
    let sb = Sandbox::new();
    fs::write(sb.path("t.txt"), b"abracadabra abracadabra").unwrap();
    sb.ok(&["build-slp", "-i", "t.txt", "--text", "-o", "t.slp.txt"]);
    assert!(fs::read_to_string(sb.path("t.slp.txt")).unwrap().starts_with("SLPv1\n"));
    sb.ok(&["recompress", "-i", "t.slp.txt", "--text", "-o", "g.rpg.txt"]);
    assert!(fs::read_to_string(sb.path("g.rpg.txt")).unwrap().starts_with("RPGv1\n"));
    sb.ok(&["repair", "-i", "t.txt", "-o", "g.rpg"]);
    sb.ok(&["verify", "-a", "g.rpg.txt", "-b", "g.rpg"]);
    sb.ok(&["verify", "-a", "g.rpg.txt", "-b", "t.txt"]);
}

#[test]
fn exit_codes() {
    let sb = Sandbox::new();
    fs::write(sb.path("t.txt"), b"mississippi").unwrap();
    fs::write(sb.path("u.txt"), b"mississippo").unwrap();
    sb.ok(&["build-slp", "-i", "t.txt", "-o", "t.slp"]);
    let bytes = read(&sb.path("t.slp"));

    assert_eq!(sb.code(&["verify", "-a", "t.txt", "-b", "u.txt"]), 3);
    let stderr = String::from_utf8(sb.grc(&["verify", "-a", "t.slp", "-b", "u.txt"]).stderr).unwrap();
    assert!(stderr.contains("mismatch at offset 10"), "{stderr}");

    let mut bad = bytes.clone();
    bad[0] = b'Z';
    fs::write(sb.path("bad.slp"), &bad).unwrap();
    assert_eq!(sb.code(&["recompress", "-i", "bad.slp", "-o", "x.rpg"]), 2);
    assert_eq!(sb.code(&["decompress", "-i", "bad.slp", "-o", "x.txt"]), 2);

    fs::write(sb.path("cut.slp"), &bytes[..bytes.len() - 1]).unwrap();
    assert_eq!(sb.code(&["recompress", "-i", "cut.slp", "-o", "x.rpg"]), 2);
    assert_eq!(sb.code(&["verify", "-a", "cut.slp", "-b", "t.txt"]), 2);

    fs::write(sb.path("one.txt"), b"a").unwrap();
    assert_eq!(sb.code(&["build-slp", "-i", "one.txt", "-o", "x.slp"]), 2);
    assert_eq!(sb.code(&["recompress", "-i", "missing.slp", "-o", "x.rpg"]), 1);
    assert_ne!(sb.code(&["hybrid", "-i", "t.slp", "-t", "0", "-o", "x.rpg"]), 0);
}
