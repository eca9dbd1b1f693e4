use std::io::Write;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use su2lift::{random_rotation, Rotation3, Tolerance};
use su2lift_cli::{parse_document, parse_documents, to_stable_string, MatrixDocument, Payload};

fn su2lift(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_su2lift"))
        .args(args)
        .env("NO_COLOR", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // the process may exit before reading its input
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rotation_doc(o: &Rotation3) -> String {
    to_stable_string(&MatrixDocument::new(Payload::Rotation(*o)).to_json(vec![]))
}

const IDENTITY: &str = r#"{"kind":"rotation","data":[[1,0,0],[0,1,0],[0,0,1]]}"#;

const EXAMPLE_RHO: &str = r#"{"kind":"density","data":[
    [[0.25,0],[-0.25,0],[0,0.25],[0,0.25]],
    [[-0.25,0],[0.25,0],[0,-0.25],[0,-0.25]],
    [[0,-0.25],[0,0.25],[0.25,0],[0.25,0]],
    [[0,-0.25],[0,0.25],[0.25,0],[0.25,0]]]}"#;

#[test]
fn lift_identity_exits_zero() {
    let o = su2lift(&["lift"], IDENTITY);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.ends_with('\n'));
    assert!(out.starts_with(r#"{"kind":"unitary","data":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],"branch":"real""#), "{out}");
    assert!(out.contains(r#""residual":0.0"#));
    assert!(out.contains("pair_note"));
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], &str, i32, &str); 7] = [
        (&["lift"], "{oops", 2, "malformed"),
        (&["lift"], r#"{"kind":"rotation","data":[[1,0],[0,1]]}"#, 2, "malformed"),
        (&["adjoint"], IDENTITY, 2, "expects a unitary"),
        (&["lift"], r#"{"kind":"rotation","data":[[2,0,0],[0,1,0],[0,0,1]]}"#, 3, "orthogonality"),
        (&["lift"], r#"{"kind":"rotation","data":[[1,0,0],[0,1,0],[0,0,-1]]}"#, 3, "determinant"),
        (
            &["diagonalize"],
            r#"{"kind":"density","data":[[1.5,0,0,0],[0,-0.5,0,0],[0,0,0,0],[0,0,0,0]]}"#,
            3,
            "positive semidefinite",
        ),
        (&["bogus"], "", 2, "invalid value"),
    ];
    for (args, input, code, needle) in cases {
        let o = su2lift(args, input);
        assert_eq!(o.status.code(), Some(code), "{args:?} {input}: {}", stderr(&o));
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn missing_input_file_is_malformed() {
    let o = su2lift(&["lift", "--in", "/definitely/not/here.json"], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));
}

#[test]
fn bad_tolerance_is_malformed() {
    let o = su2lift(&["lift", "--tol=-1"], IDENTITY);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn files_in_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("rho.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, EXAMPLE_RHO).unwrap();
    let o = su2lift(
        &["diagonalize", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()],
        "",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&output).unwrap();
    let docs = parse_documents(&text, Tolerance::default()).unwrap();
    assert_eq!(docs.len(), 3);
    assert_eq!(docs[0].meta["role"], "left");
    let Payload::Density(rho) = &docs[2].payload else {
        panic!("expected density");
    };
    let phi = su2lift::DensityMatrix4::bell(su2lift::Bell::PhiPlus);
    assert!((rho.matrix() - phi.matrix()).norm() < 1e-9);
}

#[test]
fn output_is_byte_stable() {
    let a = su2lift(&["diagonalize"], EXAMPLE_RHO);
    let b = su2lift(&["diagonalize"], EXAMPLE_RHO);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn one_sided_commands_reparse() {
    for cmd in ["triangularize", "symmetrize"] {
        for side in ["left", "right"] {
            let o = su2lift(&[cmd, "--side", side], EXAMPLE_RHO);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            let docs = parse_documents(&stdout(&o), Tolerance::default()).unwrap();
            assert_eq!(docs.len(), 2);
            assert_eq!(docs[0].meta["role"], side);
        }
    }
}

#[test]
fn ortho_and_transform() {
    let pair = r#"[{"kind":"unitary","data":[[[1,0],[0,0]],[[0,0],[1,0]]]},
                   {"kind":"unitary","data":[[[0,0],[0,1]],[[0,1],[0,0]]]}]"#;
    let o = su2lift(&["ortho"], pair);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = parse_document(&stdout(&o), Tolerance::default()).unwrap();
    let Payload::Report(data) = report.payload else {
        panic!("expected report");
    };
    assert_eq!(data["orthogonal"], true);

    let l = r#"{"kind":"rotation","data":[[0,1,0],[0,0,1],[1,0,0]]}"#;
    let r = r#"{"kind":"rotation","data":[[0,0,-1],[1,0,0],[0,-1,0]]}"#;
    let o = su2lift(&["transform"], &format!("[{EXAMPLE_RHO},{l},{r}]"));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let Payload::Density(rho) = parse_document(&stdout(&o), Tolerance::default()).unwrap().payload else {
        panic!("expected density");
    };
    let phi = su2lift::DensityMatrix4::bell(su2lift::Bell::PhiPlus);
    assert!((rho.matrix() - phi.matrix()).norm() < 1e-12);
}

#[test]
fn verify_small_run() {
    let o = su2lift(&["verify", "--seeds", "200"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains(r#""passed":true"#), "{out}");
}

fn pipe_round_trip(o: &Rotation3) -> f64 {
    let lifted = su2lift(&["lift"], &rotation_doc(o));
    assert_eq!(lifted.status.code(), Some(0), "{}", stderr(&lifted));
    let back = su2lift(&["adjoint"], &stdout(&lifted));
    assert_eq!(back.status.code(), Some(0), "{}", stderr(&back));
    let Payload::Rotation(r) = parse_document(&stdout(&back), Tolerance::default()).unwrap().payload else {
        panic!("expected rotation");
    };
    (r.matrix() - o.matrix()).norm()
}

#[test]
fn pipe_round_trip_half_turns() {
    for (o, _) in su2lift::half_turn_suite(5).iter().step_by(5) {
        assert!(pipe_round_trip(o) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lift_then_adjoint_reproduces_rotation(seed in any::<u64>()) {
        prop_assert!(pipe_round_trip(&random_rotation(seed)) < 1e-9);
    }
}
