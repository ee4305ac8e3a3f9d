use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const SQUARE: &str = r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]], "cells": [[0,1,2,3]]}"#;
const COMB: &str = r#"{"vertices": [[0,0],[5,0],[5,3],[4,3],[4,1],[3,1],[3,3],[2,3],[2,1],[1,1],[1,3],[0,3]],
                       "cells": [[0,1,2,3,4,5,6,7,8,9,10,11]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vem-plate")).args(args).output().unwrap()
}

fn mesh_file(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_generated_mesh() {
    let out = run(&["solve", "--family", "mixed", "--n", "3", "--k", "2", "--case", "bump", "--stab", "boundary-tn"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("h2_pd"));
    assert!(text.contains("boundary-tn"));
}

#[test]
fn solve_mesh_file_with_csv() {
    let mesh = mesh_file(
        r#"{"vertices": [[0,0],[0.5,0],[1,0],[0,0.5],[0.45,0.55],[1,0.5],[0,1],[0.5,1],[1,1]],
            "cells": [[0,1,4,3],[1,2,5,4],[3,4,7,6],[4,5,8,7]]}"#,
    );
    let csv = NamedTempFile::new().unwrap();
    let out = run(&[
        "solve",
        "--mesh",
        mesh.path().to_str().unwrap(),
        "--k",
        "3",
        "--case",
        "poly",
        "--rho",
        "0.05",
        "--csv",
        csv.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("exact"));
    let written = std::fs::read_to_string(csv.path()).unwrap();
    assert!(written.starts_with("h,ndof,e_h2_pd"));
    assert_eq!(written.lines().count(), 2);
}

#[test]
fn converge_writes_csv() {
    let csv = NamedTempFile::new().unwrap();
    let out = run(&[
        "converge",
        "--family",
        "uniform-quad",
        "--levels",
        "2,4,8",
        "--k",
        "2",
        "--case",
        "sinsq",
        "--csv",
        csv.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(csv.path()).unwrap();
    let header = written.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 14);
    assert!(header.ends_with("eoc_l2_p0"));
    assert_eq!(written.lines().count(), 4);
}

#[test]
fn check_mesh_reports() {
    let square = mesh_file(SQUARE);
    let out = run(&["check-mesh", "--mesh", square.path().to_str().unwrap(), "--rho", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));

    let comb = mesh_file(COMB);
    let out = run(&["check-mesh", "--mesh", comb.path().to_str().unwrap(), "--rho", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("NOT STAR-SHAPED"));
}

#[test]
fn exit_codes() {
    let square = mesh_file(SQUARE);
    let comb = mesh_file(COMB);
    let bad = mesh_file("{\"vertices\": [[0,0]]");
    // usage errors
    assert_eq!(run(&["check-mesh", "--mesh", square.path().to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--family", "uniform-quad", "--n", "2", "--k", "5"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--family", "uniform-quad", "--n", "2", "--k", "2", "--case", "cosh"]).status.code(), Some(1));
    assert_eq!(run(&["converge", "--family", "mixed", "--levels", "2,4", "--k", "2"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    // mesh and regularity errors
    assert_eq!(run(&["solve", "--mesh", comb.path().to_str().unwrap(), "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--mesh", bad.path().to_str().unwrap(), "--k", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "--mesh", square.path().to_str().unwrap(), "--k", "2", "--rho", "0.9"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
