use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn normcone(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normcone"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const EXAMPLE: &str = "2\n2\n-1 2\n2 -1\n0\n";

#[test]
fn example_with_all_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("example.in"), EXAMPLE).unwrap();
    let out = normcone(dir.path(), &["compute", "example.in", "--allf", "--hilb"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let gen = fs::read_to_string(dir.path().join("example.gen")).unwrap();
    assert_eq!(gen, "4 2\n-1 2\n0 1\n1 0\n2 -1\n");
    let inv = fs::read_to_string(dir.path().join("example.inv")).unwrap();
    for line in [
        "integer hilbert_basis_elements = 4",
        "integer number_support_hyperplanes = 2",
        "integer rank = 2",
        "integer index = 3",
        "vector 2 homogeneous_weights = 1 1",
        "integer height_1_elements = 4",
        "integer multiplicity = 3",
        "vector 2 h_vector = 1 2",
    ] {
        assert!(inv.lines().any(|l| l == line), "missing `{}` in\n{}", line, inv);
    }
    for suffix in ["sup", "typ", "equ", "cgr", "out"] {
        assert!(dir.path().join(format!("example.{}", suffix)).exists(), "{}", suffix);
    }

    let check = normcone(dir.path(), &["check", "example.in"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
}

#[test]
fn zero_cone_has_empty_basis() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.in"), "4\n2\n1 0\n-1 0\n0 1\n0 -1\n4\n").unwrap();
    let out = normcone(dir.path(), &["compute", "empty.in"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(dir.path().join("empty.gen")).unwrap(), "0 2\n");
}

#[test]
fn check_names_violated_invariants() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("example.in"), EXAMPLE).unwrap();
    assert_eq!(normcone(dir.path(), &["compute", "example.in"]).status.code(), Some(0));
    fs::write(dir.path().join("example.gen"), "5 2\n-1 2\n0 1\n1 0\n2 -1\n2 4\n").unwrap();

    let out = normcone(dir.path(), &["check", "example.in"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("minimality: (2,4)"), "{}", err);
    assert!(err.contains("hilbert basis elements: inv says 4, the files give 5"), "{}", err);
}

#[test]
fn check_detects_missing_element() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("example.in"), EXAMPLE).unwrap();
    assert_eq!(normcone(dir.path(), &["compute", "example.in", "--hilb"]).status.code(), Some(0));
    fs::write(dir.path().join("example.gen"), "3 2\n-1 2\n0 1\n2 -1\n").unwrap();
    fs::remove_file(dir.path().join("example.in")).unwrap();

    let out = normcone(dir.path(), &["check", "example"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("series: the h-vector predicts 4 elements of degree 1"), "{}", stderr(&out));
}

#[test]
fn parse_error_names_line_and_token() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.in"), "1\n2\n1 x\n0\n").unwrap();
    let out = normcone(dir.path(), &["compute", "bad.in"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.in:3") && err.contains("`x`"), "{}", err);
    assert!(!dir.path().join("bad.gen").exists());
}

#[test]
fn not_pointed_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("line.in"), "2\n2\n1 0\n-1 0\n0\n").unwrap();
    let out = normcone(dir.path(), &["compute", "line.in"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not pointed"), "{}", stderr(&out));
}

#[test]
fn missing_result_files_are_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let out = normcone(dir.path(), &["print", "nothing"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn usage_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(normcone(dir.path(), &["compute"]).status.code(), Some(2));
    assert_eq!(normcone(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = "3\n3\n1 0 0\n1 3 0\n1 0 5\n2\n";
    fs::write(dir.path().join("tri.in"), input).unwrap();
    let read_all = |dir: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    assert_eq!(normcone(dir.path(), &["compute", "tri.in", "--allf", "--hilb"]).status.code(), Some(0));
    let first = read_all(dir.path());
    assert_eq!(normcone(dir.path(), &["compute", "tri.in", "--allf", "--hilb"]).status.code(), Some(0));
    assert_eq!(first, read_all(dir.path()));
}

#[test]
fn dual_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("example.in"), EXAMPLE).unwrap();
    let out = normcone(dir.path(), &["compute", "example.in", "--dual", "--out-dir", "res"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let gen = fs::read_to_string(dir.path().join("res/example.gen")).unwrap();
    assert_eq!(gen, "4 2\n-1 2\n0 1\n1 0\n2 -1\n");
    let check = normcone(dir.path(), &["check", "example.in", "--out-dir", "res"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
}

#[test]
fn supp_mode_writes_extreme_rays() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("example.in"), EXAMPLE).unwrap();
    let out = normcone(dir.path(), &["compute", "example.in", "--supp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(dir.path().join("example.gen")).unwrap(), "2 2\n-1 2\n2 -1\n");
    let check = normcone(dir.path(), &["check", "example.in"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
}
