use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantum-baker"))
        .args(args)
        .env_remove("QUANTUM_BAKER_THREADS")
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quantum-baker-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_exit_codes() {
    let ok = bin(&["check", "--qubits", "8", "--dot", "4", "--left", "2", "--right", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = bin(&["check", "--qubits", "8", "--dot", "4", "--left", "5", "--right", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("l < n violated"));
    let k = bin(&["full-histories", "--qubits", "8", "--dot", "4", "--left", "2", "--right", "3", "--steps", "3"]);
    assert_eq!(k.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&k.stderr).contains("k < r violated"));
}

#[test]
fn resource_limit_exit_code() {
    let out = bin(&["full-histories", "--qubits", "24", "--dot", "12", "--steps", "8"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn flags_override_config_file() {
    let cfg = tmp("run.cfg");
    std::fs::write(&cfg, "qubits = 10\ndot = 5\nleft = 4\nright = 4\nsteps = 1\nformat = json\n").unwrap();
    let out = bin(&["coarse-entropy", "--config", cfg.to_str().unwrap(), "--steps", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["config"]["steps"], "2");
    assert_eq!(json["config"]["qubits"], "10");
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn empty_sweep_writes_header_only() {
    let out = bin(&["sweep", "--sweep-left", ""]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 1);
    assert!(body[0].starts_with("left,right,dot,qubits,steps"));
}

#[test]
fn output_is_identical_across_thread_counts() {
    for format in ["csv", "json"] {
        let mut files = Vec::new();
        for threads in ["1", "4", "1"] {
            let path = tmp(&format!("fh-{threads}-{}.{format}", files.len()));
            let out = bin(&[
                "full-histories",
                "--qubits",
                "12",
                "--steps",
                "2",
                "--threads",
                threads,
                "--format",
                format,
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
            files.push(std::fs::read(&path).unwrap());
        }
        assert!(files.windows(2).all(|w| w[0] == w[1]), "{format} output differs");
    }
}

#[test]
fn thread_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_quantum-baker"))
        .args(["check", "--qubits", "6"])
        .env("QUANTUM_BAKER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
