use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn recforge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("RECFORGE_BUDGET")
        .output()
        .expect("spawn recforge")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, kind: &str, size: usize, name: &str, extra: &[&str]) -> PathBuf {
    let size = size.to_string();
    let mut args = vec!["generate", kind, "--size", &size, "--out", name];
    args.extend_from_slice(extra);
    let o = recforge(dir, &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir.join(name)
}

#[test]
fn usage_errors() {
    let t = TempDir::new().unwrap();
    assert_eq!(code(&recforge(t.path(), &["construct", "md"])), 64);
    assert_eq!(code(&recforge(t.path(), &["construct", "md", "--input", "x", "--frobnicate"])), 64);
    assert_eq!(code(&recforge(t.path(), &[])), 64);
    assert_eq!(code(&recforge(t.path(), &["--help"])), 0);
    assert_eq!(code(&recforge(t.path(), &["--version"])), 0);
}

#[test]
fn data_and_input_errors() {
    let t = TempDir::new().unwrap();
    generate(t.path(), "thue-morse", 64, "w.txt", &[]);
    // kmax bound is H/4 = 16.
    assert_eq!(code(&recforge(t.path(), &["subshift-analyze", "--word", "w.txt", "--kmax", "999999"])), 65);
    assert_eq!(code(&recforge(t.path(), &["subshift-analyze", "--word", "w.txt", "--kmax", "16"])), 0);
    assert_eq!(code(&recforge(t.path(), &["subshift-analyze", "--word", "missing.txt"])), 66);
    fs::write(t.path().join("short.txt"), "0101\n").unwrap();
    assert_eq!(code(&recforge(t.path(), &["subshift-analyze", "--word", "short.txt"])), 65);
    fs::write(t.path().join("bad.txt"), "01201\n").unwrap();
    assert_eq!(code(&recforge(t.path(), &["subshift-analyze", "--word", "bad.txt"])), 65);
    assert_eq!(code(&recforge(t.path(), &["construct", "md", "--input", "w.txt", "--stages", "0"])), 65);
    assert_eq!(code(&recforge(t.path(), &["subshift-analyze", "--word", "w.txt", "--threads", "0"])), 65);
}

#[test]
fn partial_and_inapplicable() {
    let t = TempDir::new().unwrap();
    generate(t.path(), "four-power-runs", 2000, "c.ind", &[]);
    let o = recforge(t.path(), &["construct", "md", "--input", "c.ind", "--stages", "5", "--out", "b"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("stopped: stage"));
    let trace = fs::read_to_string(t.path().join("b/trace.txt")).unwrap();
    assert!(trace.contains("stop_stage"));
    // A partial bundle still verifies.
    assert_eq!(code(&recforge(t.path(), &["--verify", "b"])), 0);

    generate(t.path(), "periodic", 1000, "p.txt", &[]);
    assert_eq!(code(&recforge(t.path(), &["demo", "fps", "--input", "p.txt", "--block", "0"])), 3);
    // Four patterns against a budget of two.
    generate(t.path(), "zeros", 64, "z.txt", &[]);
    assert_eq!(code(&recforge(t.path(), &["independence", "check", "--word", "z.txt", "--set", "0,1", "--budget", "2"])), 3);
}

#[test]
fn budget_from_environment() {
    let t = TempDir::new().unwrap();
    generate(t.path(), "de-bruijn", 4096, "d.txt", &["--order", "10"]);
    let args = ["independence", "check", "--word", "d.txt", "--set", "0,1,2,3"];
    let o = Command::new(env!("CARGO_BIN_EXE_recforge"))
        .args(args)
        .current_dir(t.path())
        .env("RECFORGE_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(code(&recforge(t.path(), &args)), 0);
}

#[test]
fn fps_bundle_verifies_and_tampering_is_caught() {
    let t = TempDir::new().unwrap();
    generate(t.path(), "powers-of-two", 1 << 14, "p2.ind", &[]);
    let o = recforge(t.path(), &["demo", "fps", "--input", "p2.ind", "--out", "b"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("joint return set: {0}"));
    let b = t.path().join("b");
    for f in ["report.txt", "certificates.txt", "word.txt", "trace.txt", "target.txt", "joint.txt", "manifest.txt"] {
        assert!(b.join(f).exists(), "{f}");
    }
    assert!(b.join("inputs/0/p2.ind").exists());
    assert_eq!(code(&recforge(t.path(), &["--verify", "b"])), 0);

    // Moving the bundle does not matter: inputs travel with it.
    fs::rename(&b, t.path().join("moved")).unwrap();
    fs::remove_file(t.path().join("p2.ind")).unwrap();
    assert_eq!(code(&recforge(t.path(), &["--verify", "moved"])), 0);

    let word = t.path().join("moved/word.txt");
    let mut w = fs::read_to_string(&word).unwrap().into_bytes();
    let one = w.iter().rposition(|&c| c == b'1').unwrap();
    w[one] = b'0';
    fs::write(&word, w).unwrap();
    assert_eq!(code(&recforge(t.path(), &["--verify", "moved"])), 4);
}

#[test]
fn headers_only_in_report() {
    let t = TempDir::new().unwrap();
    generate(t.path(), "thue-morse", 1024, "w.txt", &[]);
    recforge(t.path(), &["subshift-analyze", "--word", "w.txt", "--out", "a"]);
    recforge(t.path(), &["subshift-analyze", "--word", "w.txt", "--out", "b", "--no-header"]);
    let a = fs::read_to_string(t.path().join("a/report.txt")).unwrap();
    let b = fs::read_to_string(t.path().join("b/report.txt")).unwrap();
    assert!(a.starts_with("# recforge"));
    assert!(!b.starts_with('#'));
    assert!(a.ends_with(&b));
    for f in ["certificates.txt", "manifest.txt"] {
        assert_eq!(
            fs::read(t.path().join("a").join(f)).unwrap(),
            fs::read(t.path().join("b").join(f)).unwrap()
        );
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let t = TempDir::new().unwrap();
    generate(t.path(), "de-bruijn", 4096, "d.txt", &["--order", "10"]);
    for (threads, out) in [("1", "one"), ("4", "four")] {
        let o = recforge(
            t.path(),
            &["independence", "probe", "--word", "d.txt", "--gap", "3", "--size", "4", "--threads", threads, "--no-header", "--out", out],
        );
        assert_eq!(code(&o), 0);
    }
    for f in ["report.txt", "certificates.txt", "manifest.txt"] {
        assert_eq!(
            fs::read(t.path().join("one").join(f)).unwrap(),
            fs::read(t.path().join("four").join(f)).unwrap()
        );
    }
}

#[test]
fn every_command_verifies() {
    let t = TempDir::new().unwrap();
    let d = t.path();
    generate(d, "thue-morse", 1 << 14, "tm.txt", &[]);
    generate(d, "periodic", 1000, "per.txt", &[]);
    generate(d, "four-power-runs", 20000, "c.ind", &[]);
    generate(d, "arithmetic-complement", 60000, "f.ind", &["--modulus", "101"]);
    generate(d, "octaves", 1 << 16, "o0.ind", &[]);
    generate(d, "octaves", 1 << 16, "o1.ind", &["--residue", "1"]);
    generate(d, "factorials", 100000, "fact.ind", &[]);
    let runs: &[&[&str]] = &[
        &["families-check", "--input", "c.ind"],
        &["subshift-analyze", "--word", "tm.txt", "--block", "0110"],
        &["construct", "md", "--input", "c.ind"],
        &["construct", "sm", "--input", "f.ind", "--stages", "2"],
        &["construct", "rapid-ip", "--input", "o0.ind", "--depth", "6"],
        &["construct", "ip-extract", "--input", "tm.txt"],
        &["demo", "fs", "--input", "fact.ind", "--stages", "2"],
        &["demo", "desert", "--input", "o0.ind", "--input", "o1.ind"],
        &["independence", "check", "--word", "per.txt", "--set", "0 1"],
        &["independence", "probe", "--word", "tm.txt", "--gap", "3", "--size", "3"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let out = format!("b{i}");
        let mut a = args.to_vec();
        a.extend(["--out", &out]);
        let o = recforge(d, &a);
        assert_eq!(code(&o), 0, "{args:?}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
        let v = recforge(d, &["--verify", &out]);
        assert_eq!(code(&v), 0, "{args:?}: {}", stdout(&v));
    }
}
