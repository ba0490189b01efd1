use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use subrep::format::{parse_representation, write_representation};
use subrep::posetrep::{Quiver, Representation};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn subrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_m() {
    let o = subrep(&["validate", path(&fixture("m.rep"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "ok");
}

#[test]
fn validate_names_a_non_commuting_square() {
    let dir = tempfile::tempdir().unwrap();
    // 1 -> 2 becomes multiplication by 1 + T, so the two paths to * differ
    let text = fs::read_to_string(fixture("m.rep"))
        .unwrap()
        .replace("map 1->2 2x2 [[1,0],[0,1]]", "map 1->2 2x2 [[1,0],[1,1]]");
    let f = dir.path().join("bad.rep");
    fs::write(&f, text).unwrap();
    let o = subrep(&["validate", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("violation"), "{err}");
    assert!(err.contains('2') && err.contains('3'), "{err}");
}

#[test]
fn malformed_matrix_is_a_parse_error_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("m.rep"))
        .unwrap()
        .replace("map 1->3 2x2", "map 1->3 3x2");
    let line = text.lines().position(|l| l.starts_with("map 1->3")).unwrap() + 1;
    let f = dir.path().join("bad.rep");
    fs::write(&f, text).unwrap();
    let o = subrep(&["validate", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("line {line}")), "{}", stderr(&o));
}

#[test]
fn right_approx_of_a_subspace_rep_is_itself() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.rep");
    let o = subrep(&["approx", path(&fixture("n.rep")), "--kind", "right", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let n = parse_representation(&fs::read_to_string(fixture("n.rep")).unwrap()).unwrap();
    let r = parse_representation(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r, n);
    assert!(dir.path().join("r.rep.map").exists());
}

/// Λ at 2, 3 and *, zero at 1, with the arrow 3 -> * zero.
fn non_mono() -> Representation {
    let m = parse_representation(&fs::read_to_string(fixture("m.rep")).unwrap()).unwrap();
    let mut file = subrep::format::RepFile::from_representation(&m);
    for s in &mut file.spaces {
        if s.vertex == "1" {
            s.t = subrep::format::MatrixLiteral {
                rows: 0,
                cols: 0,
                entries: vec![],
            };
        }
    }
    for map in &mut file.maps {
        match (map.source.as_str(), map.target.as_str()) {
            ("1", _) => {
                map.matrix = subrep::format::MatrixLiteral {
                    rows: 2,
                    cols: 0,
                    entries: vec![vec![], vec![]],
                }
            }
            ("3", "*") => map.matrix.entries = vec![vec![0, 0], vec![0, 0]],
            _ => {}
        }
    }
    file.to_representation().unwrap()
}

#[test]
fn mimo_at_three_and_left_approx() {
    let dir = tempfile::tempdir().unwrap();
    let x = non_mono();
    let input = dir.path().join("x.rep");
    fs::write(&input, write_representation(&x)).unwrap();
    let out = dir.path().join("mimo.rep");
    let o = subrep(&["approx", path(&input), "--kind", "mimo", "--vertex", "3", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let y = parse_representation(&fs::read_to_string(&out).unwrap()).unwrap();
    // injective envelope of Λ adjoined at 2 and *
    assert_eq!(y.dims(), vec![0, 4, 2, 4]);
    let q = y.quiver().clone();
    let k = q.arrow_index(q.vertex("3").unwrap(), q.top()).unwrap();
    assert!(y.map(k).has_full_column_rank());

    let out = dir.path().join("left.rep");
    let o = subrep(&["approx", path(&input), "--kind", "left", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let l = parse_representation(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(l.is_subspace_rep());
    assert!(l.maps().iter().all(|m| m.has_full_column_rank()));
    assert_eq!(l.dims(), vec![0, 2, 0, 2]);
}

#[test]
fn decompose_m_plus_n_by_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for method in ["idempotent", "chase"] {
        let out = dir.path().join(method);
        let o = subrep(&[
            "decompose",
            path(&fixture("m_plus_n.rep")),
            "--method",
            method,
            "--out",
            path(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(fs::read_dir(&out).unwrap().count(), 2);
        tables.push(stdout(&o));
    }
    assert_eq!(tables[0], tables[1]);
    assert_eq!(tables[0], "\"(1,3,3,4)\": 1\n\"(2,2,2,2)\": 1\n");
}

#[test]
fn decompose_zero_gives_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let zero = Representation::zero(
        std::sync::Arc::new(Quiver::example()),
        subrep::lambdamod::LambdaAlgebra::dual_numbers(2).unwrap(),
    );
    let f = dir.path().join("zero.rep");
    fs::write(&f, write_representation(&zero)).unwrap();
    let o = subrep(&["decompose", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn catalog_writes_25_objects_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let o = subrep(&["catalog", "--field", "2", "--verify", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("objects 25"));
    assert!(stdout(&o).contains("verification ok"));
    let objects = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("object_"))
        .count();
    assert_eq!(objects, 25);
    // the shipped fixtures match a fresh build
    for i in 0..25 {
        let name = format!("object_{i:02}.rep");
        let fresh = fs::read_to_string(dir.path().join(&name)).unwrap();
        let shipped = fs::read_to_string(fixture("catalog_p2").join(&name)).unwrap();
        assert_eq!(fresh, shipped, "{name}");
    }
}

#[test]
fn arquiver_has_25_nodes() {
    let o = subrep(&["arquiver", "--field", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=\"(")).count(), 25);
    assert!(dot.contains("(2,2,2,2) {2}{2}{2}{2}"));
}

#[test]
fn birkhoff_on_m() {
    let o = subrep(&["birkhoff", path(&fixture("m.subspace"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("(2,2,2,2) 1"), "{out}");
    assert!(out.contains("compatibility ok"));
}

#[test]
fn birkhoff_rejects_a_non_invariant_subspace() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("m.subspace"))
        .unwrap()
        .replace("v1 [[1,0],[0,1]]", "v1 []")
        .replace("v2 [[1,0],[0,1]]", "v2 [[1,0]]");
    let f = dir.path().join("bad.subspace");
    fs::write(&f, text).unwrap();
    let o = subrep(&["birkhoff", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NotInvariant(2)"), "{}", stderr(&o));
}

#[test]
fn birkhoff_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.subspace");
    fs::write(&f, "field 2\ndim two\n").unwrap();
    assert_eq!(subrep(&["birkhoff", path(&f)]).status.code(), Some(2));
}

#[test]
fn checks_pass() {
    let o = subrep(&["check", "harada-sai", "--samples", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("10000 chains"));
    let o = subrep(&["check", "lemma9", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("10/10 ok"));
    let o = subrep(&["check", "lemma12", "--samples", "3", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn runs_are_deterministic() {
    let a = subrep(&["decompose", path(&fixture("m_plus_n.rep")), "--seed", "5"]);
    let b = subrep(&["decompose", path(&fixture("m_plus_n.rep")), "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let a = subrep(&["check", "harada-sai", "--samples", "50"]);
    let b = subrep(&["check", "harada-sai", "--samples", "50"]);
    assert_eq!(a.stdout, b.stdout);
}
