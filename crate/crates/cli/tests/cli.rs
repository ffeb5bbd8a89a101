use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_lusim");

struct Workdir {
    dir: TempDir,
}

impl Workdir {
    fn new() -> Self {
        let w = Workdir {
            dir: TempDir::new().unwrap(),
        };
        w.file("xx.json", r#"{"diag": [1, 0, 0]}"#);
        let third = 1.0_f64 / 3.0;
        w.file("iso.json", &format!(r#"{{"diag": [{third}, {third}, {third}]}}"#));
        w.file("mixed.json", r#"{"pauli": {"a": [0.3, 0, 0.1], "b": [0, -0.2, 0], "M": [[0.9, 0.1, 0], [0, 0.5, 0.2], [0.1, 0, -0.3]]}}"#);
        w
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        self.run_with_input(args, None)
    }

    fn run_with_input(&self, args: &[&str], input: Option<&[u8]>) -> Output {
        let mut child = Command::new(BIN)
            .args(args)
            .current_dir(self.dir.path())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        let mut stdin = child.stdin.take().unwrap();
        if let Some(bytes) = input {
            stdin.write_all(bytes).unwrap();
        }
        drop(stdin);
        child.wait_with_output().unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn factor_reports_the_worked_examples() {
    let w = Workdir::new();
    let fwd = w.run(&["factor", "--source", "xx.json", "--target", "iso.json"]);
    assert_eq!(code(&fwd), 0);
    assert!(stdout(&fwd).starts_with("s = 1.000000, case 1\n"), "{}", stdout(&fwd));

    let back = w.run(&["factor", "--source", "iso.json", "--target", "xx.json"]);
    assert_eq!(code(&back), 0);
    assert!(stdout(&back).starts_with("s = 0.333333, case 3\n"), "{}", stdout(&back));
}

#[test]
fn factor_json_is_machine_readable() {
    let w = Workdir::new();
    let out = w.run(&["factor", "--source", "iso.json", "--target", "xx.json", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["s"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["case"], 3);
}

#[test]
fn synthesize_then_verify_passes() {
    let w = Workdir::new();
    for (src, dst) in [("xx.json", "iso.json"), ("mixed.json", "xx.json"), ("iso.json", "mixed.json")] {
        let prot = w.run(&["synthesize", "--source", src, "--target", dst]);
        assert_eq!(code(&prot), 0);
        let check = w.run_with_input(&["verify", "--source", src], Some(&prot.stdout));
        assert_eq!(code(&check), 0, "{}", stdout(&check));
        assert!(stdout(&check).contains(": PASS"), "{}", stdout(&check));
    }
}

#[test]
fn verify_fails_against_the_wrong_target() {
    let w = Workdir::new();
    let out = w.path("p.json");
    let made = w.run(&["synthesize", "--source", "xx.json", "--target", "iso.json", "--output", arg(&out)]);
    assert_eq!(code(&made), 0);
    let check = w.run(&["verify", "--protocol", arg(&out), "--target", "mixed.json"]);
    assert_eq!(code(&check), 1);
    assert!(stdout(&check).contains(": FAIL"));
}

#[test]
fn baseline_and_inversions_verify() {
    let w = Workdir::new();
    let runs: [&[&str]; 3] = [
        &["baseline", "--source", "mixed.json", "--target", "iso.json"],
        &["invert", "--source", "mixed.json"],
        &["invert", "--source", "mixed.json", "--strategy", "universal"],
    ];
    for args in runs {
        let prot = w.run(args);
        assert_eq!(code(&prot), 0, "{args:?}");
        let check = w.run_with_input(&["verify"], Some(&prot.stdout));
        assert!(stdout(&check).contains(": PASS"), "{args:?}: {}", stdout(&check));
    }
}

#[test]
fn strobe_converges_on_the_worked_example() {
    let w = Workdir::new();
    let out = w.path("p.json");
    w.run(&["synthesize", "--source", "xx.json", "--target", "iso.json", "--output", arg(&out)]);
    let s = w.run(&["strobe", "--protocol", arg(&out), "--time", "0.1", "--cycles", "100"]);
    assert_eq!(code(&s), 0, "{}", stdout(&s));
    assert!(stdout(&s).contains("PASS"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let w = Workdir::new();
    let cases: [&[&str]; 3] = [
        &["synthesize", "--source", "mixed.json", "--target", "iso.json"],
        &["decouple", "--source", "mixed.json"],
        &["generic-ddim", "--source", "mixed.json", "--target", "xx.json", "--seed", "7"],
    ];
    for args in cases {
        let a = w.run(args);
        let b = w.run(args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn malformed_json_exits_2() {
    let w = Workdir::new();
    w.file("bad.json", r#"{"diag": [1, 0"#);
    let out = w.run(&["factor", "--source", "bad.json", "--target", "xx.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse"));
}

#[test]
fn contract_violations_exit_3() {
    let w = Workdir::new();
    w.file("skew.json", r#"{"matrix": [[[0,0],[1,0]],[[0,0],[0,0]]]}"#);
    let not_hermitian = w.run(&["decompose", "--source", "skew.json"]);
    assert_eq!(code(&not_hermitian), 3);
    assert!(String::from_utf8_lossy(&not_hermitian.stderr).contains("ermitian"));

    let two_forms = w.file("both.json", r#"{"diag": [1, 0, 0], "pauli": {"a": [0,0,0], "b": [0,0,0], "M": [[1,0,0],[0,0,0],[0,0,0]]}}"#);
    assert_eq!(code(&w.run(&["decompose", "--source", arg(&two_forms)])), 3);

    let unknown = w.run(&["invert", "--source", "xx.json", "--strategy", "fastest"]);
    assert_eq!(code(&unknown), 3);
}

#[test]
fn local_source_exits_4() {
    let w = Workdir::new();
    w.file("local.json", r#"{"pauli": {"a": [1, 0, 0], "b": [0, 0.5, 0], "M": [[0,0,0],[0,0,0],[0,0,0]]}}"#);
    let out = w.run(&["synthesize", "--source", "local.json", "--target", "xx.json"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("local"));
}

#[test]
fn decouple_emits_pauli_and_clock_shift_twirls() {
    let w = Workdir::new();
    let pauli = w.run(&["decouple", "--source", "mixed.json", "--qubits", "1"]);
    assert_eq!(code(&pauli), 0);
    let v: serde_json::Value = serde_json::from_slice(&pauli.stdout).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 16);

    let clock = w.run(&["decouple", "--source", "mixed.json", "--side", "A"]);
    let v: serde_json::Value = serde_json::from_slice(&clock.stdout).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn generic_ddim_handles_qutrits() {
    let w = Workdir::new();
    // Diagonal qutrit coupling diag(1,-1,0) on each side.
    let mut rows = Vec::new();
    let a = [1.0, -1.0, 0.0];
    for i in 0..9 {
        let row: Vec<String> = (0..9)
            .map(|j| if i == j { format!("[{}, 0]", a[i / 3] * a[i % 3]) } else { "[0, 0]".into() })
            .collect();
        rows.push(format!("[{}]", row.join(", ")));
    }
    w.file("q.json", &format!(r#"{{"matrix": [{}], "dims": [3, 3]}}"#, rows.join(", ")));
    let out = w.run(&["generic-ddim", "--source", "q.json", "--target", "q.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["factor"].as_f64().unwrap() > 0.0);
    assert!(!v["steps"].as_array().unwrap().is_empty());
}
