use std::path::Path;
use std::process::{Command, Output};

use orthoreal::cdga::write_morphism;
use orthoreal::realizable::{parse_family, symmetric_family};
use orthoreal::realization::parse_model;
use orthoreal::QMatrix;
use tempfile::TempDir;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthoreal")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const S3: &str = "# transposition and 3-cycle\n0 1 0\n1 0 0\n0 0 1\n\n0 1 0\n0 0 1\n1 0 0\n";

#[test]
fn family_from_sigma3_generators() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "g.txt", S3);
    let o = run(&["family", "g.txt", "--out", "f.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(report.contains("group order: 6"));
    assert!(report.contains("degrees: [2, 5, 9, 14, 16]"));
    assert!(report.contains("lambda: 6 6 6"));
    let text = std::fs::read_to_string(dir.path().join("f.txt")).unwrap();
    assert!(text.starts_with("# basis change\n"));
    let fam = parse_family(&text).unwrap().into_family().unwrap();
    assert_eq!(fam.degrees(), vec![2, 5, 9, 14, 16]);
    // artifact on stdout, report on stderr without --out
    let o = run(&["family", "g.txt"], dir.path());
    assert_eq!(stdout(&o), text);
    assert_eq!(stderr(&o), report);
}

#[test]
fn family_errors() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "shear.txt", "1 1\n0 1\n");
    assert_eq!(run(&["family", "shear.txt", "--max-order", "100"], dir.path()).status.code(), Some(3));
    write(dir.path(), "bad.txt", "1 x\n0 1\n");
    assert_eq!(run(&["family", "bad.txt"], dir.path()).status.code(), Some(2));
    write(dir.path(), "triv.txt", "1\n");
    let o = run(&["family", "triv.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("group order: 1"));
}

#[test]
fn examples_command() {
    let dir = TempDir::new().unwrap();
    let o = run(&["examples", "sigma_n", "--n", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let fam = parse_family(&stdout(&o)).unwrap().into_family().unwrap();
    assert_eq!(fam, symmetric_family(3, None).unwrap());
    assert_eq!(fam.s(), 8);

    let o = run(&["examples", "g2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("s: 7"));
    assert!(stderr(&o).contains("-2*v1^2"));
    let g2 = parse_family(&stdout(&o)).unwrap().into_family().unwrap();
    assert_eq!((g2.nvars(), g2.d(), g2.s()), (7, 2, 7));

    assert_eq!(run(&["examples", "sigma_n", "--n", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["examples", "e8"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["bogus"], dir.path()).status.code(), Some(2));
}

fn sigma3_model(dir: &Path) -> String {
    assert!(run(&["examples", "sigma_n", "--out", "sig.txt"], dir).status.success());
    let o = run(&["model", "sig.txt", "--k", "8", "--out", "model.txt"], dir);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("|z|: 679"));
    std::fs::read_to_string(dir.join("model.txt")).unwrap()
}

#[test]
fn model_and_verify() {
    let dir = TempDir::new().unwrap();
    let text = sigma3_model(dir.path());
    assert!(text.contains("\nz 679\n"));
    let parsed = parse_model(&text).unwrap();
    assert_eq!(parsed.model.unwrap().z_degree(), 679);

    let o = run(&["verify", "model.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for line in ["degree audit: pass", "d^2 = 0: pass", "minimal: pass", "metadata: pass"] {
        assert!(stdout(&o).contains(line), "{line}");
    }

    assert_eq!(run(&["model", "sig.txt", "--k", "7"], dir.path()).status.code(), Some(4));

    write(dir.path(), "spec.txt", "family: sig.txt\nk: 9\n");
    let o = run(&["model", "--spec", "spec.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\nz 759\n"));

    // deterministic output
    let again = run(&["model", "sig.txt", "--k", "8"], dir.path());
    assert_eq!(stdout(&again), text);
}

#[test]
fn verify_reports_failures() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "wrong_degree.txt", "generators:\nx 2\ny 5\nd(y) = x^2\n");
    let o = run(&["verify", "wrong_degree.txt"], dir.path());
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("degree audit: FAIL"));

    write(dir.path(), "not_minimal.txt", "generators:\na 2\nb 4\nc 3\nd(c) = b\n");
    let o = run(&["verify", "not_minimal.txt"], dir.path());
    assert_eq!(o.status.code(), Some(5), "{}", stdout(&o));
    assert!(stdout(&o).contains("minimal: FAIL"));

    let text = sigma3_model(dir.path()).replace("x2^68", "2*x2^68");
    write(dir.path(), "tampered.txt", &text);
    let o = run(&["verify", "tampered.txt"], dir.path());
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("metadata: FAIL"));

    write(dir.path(), "garbage.txt", "hello\n");
    assert_eq!(run(&["verify", "garbage.txt"], dir.path()).status.code(), Some(2));
}

#[test]
fn g2_model_builds() {
    let dir = TempDir::new().unwrap();
    assert!(run(&["examples", "g2", "--out", "g2.txt"], dir.path()).status.success());
    let o = run(&["model", "g2.txt", "--k", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("|z|: 679"));
}

#[test]
fn classify_lifts_and_faults() {
    let dir = TempDir::new().unwrap();
    let text = sigma3_model(dir.path());
    let model = parse_model(&text).unwrap().model.unwrap();

    let transposition = QMatrix::permutation(&[1, 0, 2]);
    let f = model.lift_group_element(&transposition).unwrap();
    write(dir.path(), "f.txt", &write_morphism(&f));
    let o = run(&["classify", "model.txt", "f.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("result: homotopic to f_g with g =\n0 1 0\n1 0 0\n0 0 1\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("step ")).count(), 9);

    let bad = write_morphism(&f).replace("f(z) = z", "f(z) = z + y1*y2*y3*x1^3*x2^3*v1^13");
    write(dir.path(), "bad.txt", &bad);
    let o = run(&["classify", "model.txt", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("step D = 0: FAIL"));
    assert!(stdout(&o).contains("D ≠ 0"));

    write(dir.path(), "partial.txt", "f(x1) = x1\n");
    assert_eq!(run(&["classify", "model.txt", "partial.txt"], dir.path()).status.code(), Some(2));

    let bare: String = text.lines().filter(|l| !l.contains(':') || l.starts_with("generators")).map(|l| format!("{l}\n")).collect();
    write(dir.path(), "bare.txt", &bare);
    assert_eq!(run(&["classify", "bare.txt", "f.txt"], dir.path()).status.code(), Some(2));
}
