//! Subcommand dispatch. Each command takes the raw input text, parses the
//! documents it expects, calls into the library and returns the JSON value to
//! print.

use nalgebra::Matrix3;
use serde_json::{json, Map, Value};
use su2lift::{
    adjoint_so3, apply_local, check_orthogonality, diagonalize, lift, symmetrize_one_sided, to_bloch,
    transform_bloch, triangularize, verify_suite, BlochForm, Branch, LiftResult, OneSided, Rotation3,
    Side, SpecialUnitary2, Tolerance, VectorCase,
};

use su2lift::lift::MAX_LIFT_RESIDUAL;

use crate::document::{complex_json, parse_documents, vec3_json, Kind, MatrixDocument, Payload};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Lift,
    Adjoint,
    Diagonalize,
    Triangularize,
    Symmetrize,
    Ortho,
    Transform,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub tol: Tolerance,
    pub seeds: u64,
    pub side: Side,
    /// rotations checked against the brute-force oracle by `verify`
    pub oracle_rotations: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            seeds: 10_000,
            side: Side::Left,
            oracle_rotations: 16,
        }
    }
}

/// Runs `command` on `input` (ignored by `verify`).
pub fn run(command: Command, input: &str, opts: &Options) -> Result<Value, CliError> {
    if command == Command::Verify {
        return verify(opts);
    }
    let docs = parse_documents(input, opts.tol)?;
    match command {
        Command::Lift => lift_cmd(single(&docs)?, opts),
        Command::Adjoint => adjoint_cmd(single(&docs)?),
        Command::Diagonalize => diagonalize_cmd(single(&docs)?, opts),
        Command::Triangularize => one_sided_cmd(single(&docs)?, opts, triangularize),
        Command::Symmetrize => one_sided_cmd(single(&docs)?, opts, symmetrize_one_sided),
        Command::Ortho => ortho_cmd(&docs, opts),
        Command::Transform => transform_cmd(&docs, opts),
        Command::Verify => unreachable!(),
    }
}

fn single(docs: &[MatrixDocument]) -> Result<&MatrixDocument, CliError> {
    match docs {
        [d] => Ok(d),
        _ => Err(CliError::Malformed(format!("expected one document, got {}", docs.len()))),
    }
}

fn wrong_kind(command: &str, got: Kind, want: &str) -> CliError {
    CliError::Malformed(format!("{command} expects {want}, got {}", got.as_str()))
}

fn branch_str(b: Branch) -> &'static str {
    match b {
        Branch::Real => "real",
        Branch::Vector => "vector",
    }
}

fn case_json(c: Option<VectorCase>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!(c as u8 + 1),
    }
}

fn lift_extras(r: &LiftResult) -> Vec<(&'static str, Value)> {
    let q = r.quaternion.components();
    vec![
        ("branch", json!(branch_str(r.branch))),
        ("formula", json!(branch_str(r.formula))),
        ("vector_case", case_json(r.vector_case)),
        ("quaternion", json!(q)),
        ("residual", json!(r.residual)),
        ("pair_note", json!("-U induces the same rotation and is equally valid")),
    ]
}

fn unitary_doc(r: &LiftResult, role: Option<&str>) -> Value {
    let mut d = MatrixDocument::new(Payload::Unitary(r.representative));
    if let Some(role) = role {
        d = d.with_meta("role", role);
    }
    d.to_json(lift_extras(r))
}

fn lift_cmd(doc: &MatrixDocument, opts: &Options) -> Result<Value, CliError> {
    let Payload::Rotation(o) = &doc.payload else {
        return Err(wrong_kind("lift", doc.kind(), "a rotation"));
    };
    Ok(unitary_doc(&lift(o, opts.tol)?, None))
}

fn adjoint_cmd(doc: &MatrixDocument) -> Result<Value, CliError> {
    let Payload::Unitary(u) = &doc.payload else {
        return Err(wrong_kind("adjoint", doc.kind(), "a unitary"));
    };
    let o = adjoint_so3(u)?;
    // orthogonality defect of the computed matrix
    let residual = (o.matrix().transpose() * o.matrix() - Matrix3::identity()).norm();
    Ok(MatrixDocument::new(Payload::Rotation(o)).to_json(vec![("residual", json!(residual))]))
}

/// The Bloch form of a state-like document, or `None` for other kinds.
fn bloch_of(doc: &MatrixDocument, tol: Tolerance) -> Result<Option<BlochForm>, CliError> {
    Ok(match &doc.payload {
        Payload::Density(rho) => Some(to_bloch(rho, tol)?),
        Payload::Bloch(bf) => Some(*bf),
        Payload::Correlation(t) => Some(BlochForm::from_correlation(*t)),
        _ => None,
    })
}

/// Re-emits `out` in the kind of `input`; for density input the state is
/// evolved by the unitaries themselves and the residual compares its Bloch
/// form against `out`.
fn state_result(
    input: &MatrixDocument,
    out: &BlochForm,
    ul: &SpecialUnitary2,
    ur: &SpecialUnitary2,
    tol: Tolerance,
) -> Result<(Payload, f64), CliError> {
    Ok(match &input.payload {
        Payload::Density(rho) => {
            let evolved = apply_local(rho, ul, ur);
            let bf = to_bloch(&evolved, tol)?;
            let residual = (bf.a - out.a).norm() + (bf.b - out.b).norm() + (bf.t - out.t).norm();
            if residual > MAX_LIFT_RESIDUAL {
                return Err(CliError::Internal(format!(
                    "evolved state disagrees with the transformed Bloch form by {residual:e}"
                )));
            }
            (Payload::Density(evolved), residual)
        }
        Payload::Bloch(_) => (Payload::Bloch(*out), 0.0),
        _ => (Payload::Correlation(out.t), 0.0),
    })
}

fn diagonalize_cmd(doc: &MatrixDocument, opts: &Options) -> Result<Value, CliError> {
    let bf = bloch_of(doc, opts.tol)?
        .ok_or_else(|| wrong_kind("diagonalize", doc.kind(), "a density, bloch or correlation document"))?;
    let d = diagonalize(&bf, opts.tol)?;
    let (payload, state_residual) =
        state_result(doc, &d.out, &d.ul.representative, &d.ur.representative, opts.tol)?;
    let off_diagonal = (d.out.t - Matrix3::from_diagonal(&d.out.t.diagonal())).norm();
    let out = MatrixDocument::new(payload).with_meta("role", "result").to_json(vec![
        ("sigma", vec3_json(&d.out.t.diagonal())),
        ("residual", json!(state_residual.max(off_diagonal))),
    ]);
    Ok(Value::Array(vec![
        unitary_doc(&d.ul, Some("left")),
        unitary_doc(&d.ur, Some("right")),
        out,
    ]))
}

fn one_sided_cmd(
    doc: &MatrixDocument,
    opts: &Options,
    op: fn(&BlochForm, Side, Tolerance) -> su2lift::Result<OneSided>,
) -> Result<Value, CliError> {
    let bf = bloch_of(doc, opts.tol)?
        .ok_or_else(|| wrong_kind("this command", doc.kind(), "a density, bloch or correlation document"))?;
    let r = op(&bf, opts.side, opts.tol)?;
    let id = SpecialUnitary2::identity();
    let (ul, ur, role) = match opts.side {
        Side::Left => (r.u.representative, id, "left"),
        Side::Right => (id, r.u.representative, "right"),
    };
    let (payload, residual) = state_result(doc, &r.out, &ul, &ur, opts.tol)?;
    let out = MatrixDocument::new(payload)
        .with_meta("role", "result")
        .to_json(vec![("residual", json!(residual.max(r.u.residual)))]);
    Ok(Value::Array(vec![unitary_doc(&r.u, Some(role)), out]))
}

fn ortho_cmd(docs: &[MatrixDocument], opts: &Options) -> Result<Value, CliError> {
    let [a, b] = docs else {
        return Err(CliError::Malformed(format!("ortho expects two unitaries, got {} documents", docs.len())));
    };
    let (Payload::Unitary(u1), Payload::Unitary(u2)) = (&a.payload, &b.payload) else {
        return Err(CliError::Malformed("ortho expects two unitary documents".into()));
    };
    let c = check_orthogonality(u1, u2, opts.tol)?;
    let mut data = Map::new();
    data.insert("su2_trace".into(), complex_json(c.su2_trace));
    data.insert("so3_trace".into(), json!(c.so3_trace));
    data.insert("orthogonal".into(), json!(c.orthogonal));
    // an orthogonal pair must have so3_trace = -1
    let residual = if c.orthogonal { (c.so3_trace + 1.0).abs() } else { 0.0 };
    Ok(MatrixDocument::new(Payload::Report(data)).to_json(vec![("residual", json!(residual))]))
}

fn as_unitary(doc: &MatrixDocument, tol: Tolerance) -> Result<SpecialUnitary2, CliError> {
    match &doc.payload {
        Payload::Unitary(u) => Ok(*u),
        Payload::Rotation(o) => Ok(lift(o, tol)?.representative),
        _ => Err(wrong_kind("transform", doc.kind(), "a rotation or unitary")),
    }
}

fn as_rotation(doc: &MatrixDocument) -> Result<Rotation3, CliError> {
    match &doc.payload {
        Payload::Rotation(o) => Ok(*o),
        Payload::Unitary(u) => Ok(adjoint_so3(u)?),
        _ => Err(wrong_kind("transform", doc.kind(), "a rotation or unitary")),
    }
}

fn transform_cmd(docs: &[MatrixDocument], opts: &Options) -> Result<Value, CliError> {
    let [state, l, r] = docs else {
        return Err(CliError::Malformed(format!(
            "transform expects [state, left, right], got {} documents",
            docs.len()
        )));
    };
    let payload = match &state.payload {
        Payload::Density(rho) => {
            Payload::Density(apply_local(rho, &as_unitary(l, opts.tol)?, &as_unitary(r, opts.tol)?))
        }
        Payload::Bloch(bf) => Payload::Bloch(transform_bloch(bf, &as_rotation(l)?, &as_rotation(r)?)),
        Payload::Correlation(t) => {
            let out = transform_bloch(&BlochForm::from_correlation(*t), &as_rotation(l)?, &as_rotation(r)?);
            Payload::Correlation(out.t)
        }
        _ => return Err(wrong_kind("transform", state.kind(), "a density, bloch or correlation document")),
    };
    Ok(MatrixDocument::new(payload).to_json(vec![]))
}

fn verify(opts: &Options) -> Result<Value, CliError> {
    let s = verify_suite(opts.seeds, opts.oracle_rotations, opts.tol)?;
    let mut data = Map::new();
    data.insert("passed".into(), json!(s.passed));
    data.insert("seeds".into(), json!(s.seeds));
    data.insert("max_roundtrip_residual".into(), json!(s.max_roundtrip_residual));
    data.insert("max_trace_identity_error".into(), json!(s.max_trace_identity_error));
    data.insert("half_turns".into(), json!(s.half_turns));
    data.insert("half_turn_cases_hit".into(), json!(s.half_turn_cases_hit));
    data.insert("max_half_turn_residual".into(), json!(s.max_half_turn_residual));
    data.insert("oracle_rotations".into(), json!(s.oracle_rotations));
    data.insert("max_oracle_distance".into(), json!(s.max_oracle_distance));
    let doc = MatrixDocument::new(Payload::Report(data)).to_json(vec![("residual", json!(s.max_roundtrip_residual))]);
    if s.passed {
        Ok(doc)
    } else {
        Err(CliError::Internal(format!(
            "verification failed: {}",
            crate::format::to_stable_string(&doc).trim_end()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::parse_document;
    use su2lift::{Bell, DensityMatrix4};

    const IDENTITY: &str = r#"{"kind":"rotation","data":[[1,0,0],[0,1,0],[0,0,1]]}"#;

    const EXAMPLE_RHO: &str = r#"{"kind":"density","data":[
        [[0.25,0],[-0.25,0],[0,0.25],[0,0.25]],
        [[-0.25,0],[0.25,0],[0,-0.25],[0,-0.25]],
        [[0,-0.25],[0,0.25],[0.25,0],[0.25,0]],
        [[0,-0.25],[0,0.25],[0.25,0],[0.25,0]]]}"#;

    fn opts() -> Options {
        Options::default()
    }

    fn reparse(v: &Value) -> MatrixDocument {
        parse_document(&v.to_string(), Tolerance::default()).unwrap()
    }

    #[test]
    fn lift_identity() {
        let v = run(Command::Lift, IDENTITY, &opts()).unwrap();
        assert_eq!(v["branch"], "real");
        assert_eq!(v["residual"], 0.0);
        assert_eq!(reparse(&v).payload, Payload::Unitary(SpecialUnitary2::identity()));
    }

    #[test]
    fn adjoint_of_identity() {
        let u = r#"{"kind":"unitary","data":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        let v = run(Command::Adjoint, u, &opts()).unwrap();
        assert_eq!(reparse(&v).payload, Payload::Rotation(Rotation3::identity()));
    }

    #[test]
    fn diagonalize_example_state() {
        let v = run(Command::Diagonalize, EXAMPLE_RHO, &opts()).unwrap();
        let docs = v.as_array().unwrap();
        assert_eq!(docs.len(), 3);
        assert_eq!(docs[0]["meta"]["role"], "left");
        assert_eq!(docs[1]["meta"]["role"], "right");
        let Payload::Density(out) = reparse(&docs[2]).payload else {
            panic!("expected density");
        };
        let phi = DensityMatrix4::bell(Bell::PhiPlus);
        assert!((out.matrix() - phi.matrix()).norm() < 1e-9);
        assert!(docs[2]["residual"].as_f64().unwrap() < 1e-9);
    }

    #[test]
    fn one_sided_example_state() {
        let t = r#"{"kind":"correlation","data":[[0,-1,0],[0,0,-1],[-1,0,0]]}"#;
        for side in [Side::Left, Side::Right] {
            let o = Options { side, ..opts() };
            let v = run(Command::Triangularize, t, &o).unwrap();
            let Payload::Correlation(r) = reparse(&v[1]).payload else {
                panic!("expected correlation");
            };
            let below = |i: usize, j: usize| if side == Side::Left { i > j } else { i < j };
            for i in 0..3 {
                for j in 0..3 {
                    if below(i, j) {
                        assert!(r[(i, j)].abs() < 1e-12, "{side:?} {r}");
                    }
                }
            }
            let v = run(Command::Symmetrize, t, &o).unwrap();
            let Payload::Correlation(s) = reparse(&v[1]).payload else {
                panic!("expected correlation");
            };
            assert!((s - s.transpose()).norm() < 1e-12);
        }
    }

    #[test]
    fn ortho_pair() {
        let pair = r#"[{"kind":"unitary","data":[[[1,0],[0,0]],[[0,0],[1,0]]]},
                       {"kind":"unitary","data":[[[0,1],[0,0]],[[0,0],[0,-1]]]}]"#;
        let v = run(Command::Ortho, pair, &opts()).unwrap();
        assert_eq!(v["data"]["orthogonal"], true);
        assert!((v["data"]["so3_trace"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn transform_density_matches_bloch() {
        let l = r#"{"kind":"rotation","data":[[0,1,0],[0,0,1],[1,0,0]]}"#;
        let r = r#"{"kind":"rotation","data":[[0,0,-1],[1,0,0],[0,-1,0]]}"#;
        let dens = run(Command::Transform, &format!("[{EXAMPLE_RHO},{l},{r}]"), &opts()).unwrap();
        let Payload::Density(rho) = reparse(&dens).payload else {
            panic!("expected density");
        };
        assert!((rho.matrix() - DensityMatrix4::bell(Bell::PhiPlus).matrix()).norm() < 1e-12);
        let corr = r#"{"kind":"correlation","data":[[0,-1,0],[0,0,-1],[-1,0,0]]}"#;
        let v = run(Command::Transform, &format!("[{corr},{l},{r}]"), &opts()).unwrap();
        let Payload::Correlation(t) = reparse(&v).payload else {
            panic!("expected correlation");
        };
        assert!((t - Bell::PhiPlus.correlation()).norm() < 1e-12);
    }

    #[test]
    fn kind_mismatch_is_malformed() {
        assert_eq!(run(Command::Adjoint, IDENTITY, &opts()).unwrap_err().exit_code(), 2);
        assert_eq!(run(Command::Lift, &format!("[{IDENTITY},{IDENTITY}]"), &opts()).unwrap_err().exit_code(), 2);
        assert_eq!(run(Command::Ortho, IDENTITY, &opts()).unwrap_err().exit_code(), 2);
        assert_eq!(run(Command::Transform, IDENTITY, &opts()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn small_verify() {
        let o = Options { seeds: 100, oracle_rotations: 1, ..opts() };
        let v = run(Command::Verify, "", &o).unwrap();
        assert_eq!(v["kind"], "report");
        assert_eq!(v["data"]["passed"], true);
        assert!(v["data"]["max_roundtrip_residual"].as_f64().unwrap() < 1e-9);
    }
}
