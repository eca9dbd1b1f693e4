//! Closed-form lift from SO(3) to SU(2).
//!
//! Magnitudes of the four quaternion parameters come from traces against the
//! Bell correlation matrices, `|a1| = 1/2 sqrt(1 - tr(O T_Psi-))` and so on.
//! Relative signs come from traces against the so(3) basis: `tr(O L1) = 4 a1 a2`,
//! `tr(O L2) = 4 a1 b1`, `tr(O L3) = 4 a1 b2`, `tr(O |L1|) = 4 b1 b2`,
//! `tr(O |L2|) = 4 a2 b2`, `tr(O |L3|) = 4 a2 b1`.
//!
//! When `a1 != 0` (equivalently `tr O != -1`) fixing `a1 > 0` determines every
//! other sign. When `a1 = 0` the rotation is a half turn and the remaining signs
//! are recovered from the `|L_i|` traces, with one selector term per pattern of
//! vanishing components.

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{
    adjoint_so3, quat_from_su2_unchecked, sgn_eps, so3_basis, so3_basis_abs,
    su2_from_quat_unchecked, trace_product, Bell, Rotation3, SpecialUnitary2, UnitQuaternion,
};
use crate::tolerance::Tolerance;

/// Residuals above this after both branches mean the closed form failed.
pub const MAX_LIFT_RESIDUAL: f64 = 1e-6;

/// Which closed form applies: `Real` when `1 + tr O > 0`, `Vector` for half turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Real,
    Vector,
}

/// Pattern of vanishing components `(a2, b1, b2)` for a half turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorCase {
    /// all three nonzero
    Case1,
    /// `a2 = 0`
    Case2,
    /// `b1 = 0`
    Case3,
    /// `b2 = 0`
    Case4,
    /// only `a2`
    Case5,
    /// only `b1`
    Case6,
    /// only `b2`
    Case7,
}

/// Output of [`lift`]. Both `representative` and its negation induce the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftResult {
    pub representative: SpecialUnitary2,
    /// `Vector` iff `|1 + tr O| <= tol.zero`.
    pub branch: Branch,
    /// Formula that produced `representative`. Differs from `branch` only in
    /// the band `tol.zero < 1 + tr O < tol.band` when the vector form won.
    pub formula: Branch,
    pub vector_case: Option<VectorCase>,
    pub quaternion: UnitQuaternion,
    /// `||adjoint_so3(representative) - O||_F`
    pub residual: f64,
}

impl LiftResult {
    /// The other member of the `{U, -U}` pair.
    pub fn partner(&self) -> SpecialUnitary2 {
        self.representative.neg()
    }
}

/// `|a1|, |a2|, |b1|, |b2|` of a rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellMagnitudes {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl BellMagnitudes {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }
}

fn bell_magnitude(o: &Matrix3<f64>, bell: Bell, tol: Tolerance) -> Result<f64> {
    let r = 1.0 - trace_product(o, &bell.correlation());
    if r < -tol.radicand {
        return Err(Error::NegativeRadicand(r));
    }
    Ok(0.5 * r.clamp(0.0, 4.0).sqrt())
}

pub fn bell_trace_magnitudes(o: &Rotation3, tol: Tolerance) -> Result<BellMagnitudes> {
    let m = o.matrix();
    Ok(BellMagnitudes {
        a1: bell_magnitude(m, Bell::PsiMinus, tol)?,
        a2: bell_magnitude(m, Bell::PsiPlus, tol)?,
        b1: bell_magnitude(m, Bell::PhiPlus, tol)?,
        b2: bell_magnitude(m, Bell::PhiMinus, tol)?,
    })
}

/// Signs of `tr(O L1), tr(O L2), tr(O L3), tr(O |L1|), tr(O |L2|), tr(O |L3|)`,
/// i.e. of `a1 a2, a1 b1, a1 b2, b1 b2, a2 b2, a2 b1`.
pub fn sign_table(o: &Rotation3, eps: f64) -> [i8; 6] {
    let m = o.matrix();
    let l = so3_basis();
    let la = so3_basis_abs();
    [
        sgn_eps(trace_product(m, &l[0]), eps),
        sgn_eps(trace_product(m, &l[1]), eps),
        sgn_eps(trace_product(m, &l[2]), eps),
        sgn_eps(trace_product(m, &la[0]), eps),
        sgn_eps(trace_product(m, &la[1]), eps),
        sgn_eps(trace_product(m, &la[2]), eps),
    ]
}

/// Lift for rotations whose quaternion has a nonzero scalar part.
/// Returns the member of the pair with `a1 > 0`.
pub fn lift_real(o: &Rotation3, tol: Tolerance) -> Result<SpecialUnitary2> {
    if 1.0 + o.trace() <= tol.zero {
        return Err(Error::Precondition("lift_real needs 1 + tr(O) > 0"));
    }
    let mag = bell_trace_magnitudes(o, tol)?;
    let s = sign_table(o, tol.zero);
    let q = UnitQuaternion::from_components_unchecked([
        mag.a1,
        f64::from(s[0]) * mag.a2,
        f64::from(s[1]) * mag.b1,
        f64::from(s[2]) * mag.b2,
    ]);
    Ok(su2_from_quat_unchecked(&q))
}

/// Traceless matrix `[[i a2, b1 + i b2], [-b1 + i b2, -i a2]]` whose component
/// magnitudes come from the Bell traces and whose signs are those of
/// `tr(O x)`, `tr(O y)`, `tr(O z)`.
pub fn w_matrix(
    o: &Rotation3,
    x: &Matrix3<f64>,
    y: &Matrix3<f64>,
    z: &Matrix3<f64>,
    tol: Tolerance,
) -> Result<Matrix2<Complex64>> {
    let m = o.matrix();
    let mag = bell_trace_magnitudes(o, tol)?;
    let a2 = f64::from(sgn_eps(trace_product(m, x), tol.zero)) * mag.a2;
    let b1 = f64::from(sgn_eps(trace_product(m, y), tol.zero)) * mag.b1;
    let b2 = f64::from(sgn_eps(trace_product(m, z), tol.zero)) * mag.b2;
    Ok(Matrix2::new(
        Complex64::new(0.0, a2),
        Complex64::new(b1, b2),
        Complex64::new(-b1, b2),
        Complex64::new(0.0, -a2),
    ))
}

/// Which half-turn case the `|L_i|` selectors pick, or `None` when the sign
/// pattern matches no case (inconsistent input at this tolerance).
pub fn vector_case(o: &Rotation3, tol: Tolerance) -> Result<Option<VectorCase>> {
    let s = sign_table(o, tol.zero);
    // gamma_i = 1 - sgn(tr(O |L_i|))^2
    let g = [s[3], s[4], s[5]].map(|x| 1 - x * x);
    let case = match g {
        [0, 0, 0] => Some(VectorCase::Case1),
        [0, 1, 1] => Some(VectorCase::Case2),
        [1, 0, 1] => Some(VectorCase::Case3),
        [1, 1, 0] => Some(VectorCase::Case4),
        [1, 1, 1] => {
            let mag = bell_trace_magnitudes(o, tol)?;
            Some(if mag.a2 >= mag.b1 && mag.a2 >= mag.b2 {
                VectorCase::Case5
            } else if mag.b1 >= mag.b2 {
                VectorCase::Case6
            } else {
                VectorCase::Case7
            })
        }
        _ => None,
    };
    Ok(case)
}

fn lift_vector_with_case(o: &Rotation3, tol: Tolerance) -> Result<(SpecialUnitary2, VectorCase)> {
    if 1.0 + o.trace() >= tol.band {
        return Err(Error::Precondition("lift_vector needs 1 + tr(O) = 0"));
    }
    let la = so3_basis_abs();
    let id = Matrix3::identity();
    let s = sign_table(o, tol.zero);
    let g = [s[3], s[4], s[5]].map(|x| f64::from(1 - x * x));
    let [g1, g2, g3] = g;

    let mut uv = w_matrix(o, &la[0], &la[1], &la[2], tol)?;
    let terms: [(f64, [Matrix3<f64>; 3]); 4] = [
        ((1.0 - g1) * g2 * g3, [id, id, -la[0]]),
        (g1 * (1.0 - g2) * g3, [-la[1], id, id]),
        (g1 * g2 * (1.0 - g3), [id, -la[2], id]),
        (g1 * g2 * g3, [-id, -id, -id]),
    ];
    for (weight, [x, y, z]) in &terms {
        if *weight != 0.0 {
            uv += w_matrix(o, x, y, z, tol)? * Complex64::new(*weight, 0.0);
        }
    }

    let case = vector_case(o, tol)?.ok_or_else(|| {
        Error::Internal("half-turn sign pattern matches no selector case".into())
    })?;
    // The selected case asserts some components are exactly zero; enforce it so
    // that rounding noise under the square roots does not leak in.
    let [_, mut a2, mut b1, mut b2] = quat_from_su2_unchecked(&SpecialUnitary2::from_matrix_unchecked(uv)).components();
    match case {
        VectorCase::Case1 => {}
        VectorCase::Case2 => a2 = 0.0,
        VectorCase::Case3 => b1 = 0.0,
        VectorCase::Case4 => b2 = 0.0,
        VectorCase::Case5 => (b1, b2) = (0.0, 0.0),
        VectorCase::Case6 => (a2, b2) = (0.0, 0.0),
        VectorCase::Case7 => (a2, b1) = (0.0, 0.0),
    }
    let q = UnitQuaternion::normalize(0.0, a2, b1, b2)
        .map_err(|_| Error::Internal("half-turn formula produced the zero matrix".into()))?;
    Ok((su2_from_quat_unchecked(&q), case))
}

/// Lift for half turns (`tr O = -1`), where the scalar part vanishes.
pub fn lift_vector(o: &Rotation3, tol: Tolerance) -> Result<SpecialUnitary2> {
    lift_vector_with_case(o, tol).map(|(u, _)| u)
}

fn residual(u: &SpecialUnitary2, o: &Rotation3) -> Result<f64> {
    Ok((adjoint_so3(u)?.matrix() - o.matrix()).norm())
}

/// The SU(2) pair inducing `o`, returned as one canonical representative.
pub fn lift(o: &Rotation3, tol: Tolerance) -> Result<LiftResult> {
    let o = Rotation3::new(*o.matrix(), tol)?;
    let gap = 1.0 + o.trace();
    let branch = if gap <= tol.zero {
        Branch::Vector
    } else {
        Branch::Real
    };

    let (u, formula, vector_case, res) = match branch {
        Branch::Vector => {
            let (u, case) = lift_vector_with_case(&o, tol)?;
            (u, Branch::Vector, Some(case), residual(&u, &o)?)
        }
        Branch::Real if gap < tol.band => {
            let real = lift_real(&o, tol).and_then(|u| Ok((u, residual(&u, &o)?)));
            let vector = lift_vector_with_case(&o, tol).and_then(|(u, c)| Ok((u, c, residual(&u, &o)?)));
            match (real, vector) {
                (Ok((_, rr)), Ok((uv, case, rv))) if rv < rr => (uv, Branch::Vector, Some(case), rv),
                (Ok((ur, rr)), _) => (ur, Branch::Real, None, rr),
                (Err(_), Ok((uv, case, rv))) => (uv, Branch::Vector, Some(case), rv),
                (Err(e), Err(_)) => return Err(e),
            }
        }
        Branch::Real => {
            let u = lift_real(&o, tol)?;
            (u, Branch::Real, None, residual(&u, &o)?)
        }
    };

    if res > MAX_LIFT_RESIDUAL {
        return Err(Error::Internal(format!(
            "lift residual {res:e} exceeds {MAX_LIFT_RESIDUAL:e}"
        )));
    }
    let quaternion = quat_from_su2_unchecked(&u).canonical(tol.zero);
    let representative = su2_from_quat_unchecked(&quaternion);
    Ok(LiftResult {
        representative,
        branch,
        formula,
        vector_case,
        quaternion,
        residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{axis_rotation, euler_rodrigues_unchecked, Axis};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn rot(rows: [[f64; 3]; 3]) -> Rotation3 {
        Rotation3::from_rows(rows).unwrap()
    }

    fn cm(re: [f64; 4], im: [f64; 4], scale: f64) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(re[0], im[0]),
            Complex64::new(re[1], im[1]),
            Complex64::new(re[2], im[2]),
            Complex64::new(re[3], im[3]),
        ) * Complex64::new(scale, 0.0)
    }

    fn half_turn(n: [f64; 3]) -> Rotation3 {
        let v = nalgebra::Vector3::from(n).normalize();
        Rotation3::new(2.0 * v * v.transpose() - Matrix3::identity(), tol()).unwrap()
    }

    /// Worked-example factors: T = L diag(1,-1,1) R.
    fn example_l() -> Rotation3 {
        rot([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    }
    fn example_r() -> Rotation3 {
        rot([[0.0, 0.0, -1.0], [1.0, 0.0, 0.0], [0.0, -1.0, 0.0]])
    }

    #[test]
    fn magnitudes() {
        let m = bell_trace_magnitudes(&Rotation3::identity(), tol()).unwrap();
        assert_eq!(m.as_array(), [1.0, 0.0, 0.0, 0.0]);

        let (z, _) = axis_rotation(Axis::Z, FRAC_PI_2);
        let m = bell_trace_magnitudes(&z, tol()).unwrap().as_array();
        let want = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0];
        for (a, b) in m.iter().zip(want) {
            assert!((a - b).abs() < 1e-15, "{m:?}");
        }

        let d = rot([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(bell_trace_magnitudes(&d, tol()).unwrap().as_array(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn magnitudes_reject_bad_radicand() {
        // a matrix that slipped past validation: tr(O T_Psi-) = 3 > 1
        let bad = Rotation3::from_matrix_unchecked(-Matrix3::identity());
        assert!(matches!(
            bell_trace_magnitudes(&bad, tol()),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn signs() {
        assert_eq!(sign_table(&Rotation3::identity(), 1e-9), [0; 6]);
        let (z, _) = axis_rotation(Axis::Z, FRAC_PI_2);
        assert_eq!(sign_table(&z, 1e-9), [-1, 0, 0, 0, 0, 0]);
        assert_eq!(sign_table(&example_l().transpose(), 1e-9), [1; 6]);
    }

    #[test]
    fn real_branch_examples() {
        let u = lift_real(&Rotation3::identity(), tol()).unwrap();
        assert_eq!(*u.matrix(), Matrix2::identity());

        let u = lift_real(&example_l().transpose(), tol()).unwrap();
        let want = cm([1.0, 1.0, -1.0, 1.0], [1.0, 1.0, 1.0, -1.0], 0.5);
        assert!((u.matrix() - want).norm() < 1e-15);

        let u = lift_real(&example_r(), tol()).unwrap();
        let want = cm([1.0, 1.0, -1.0, 1.0], [-1.0, 1.0, 1.0, 1.0], 0.5);
        assert!((u.matrix() - want).norm() < 1e-15);
        assert!(u.matrix()[(0, 0)].re > 0.0);
    }

    #[test]
    fn real_branch_rejects_half_turn() {
        let d = rot([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(lift_real(&d, tol()), Err(Error::Precondition(_))));
        assert!(matches!(
            lift_vector(&Rotation3::identity(), tol()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn w_matrix_examples() {
        // L1 traces vanish on a diagonal O
        let d = rot([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]);
        let l = so3_basis();
        let w = w_matrix(&d, &l[0], &l[0], &l[0], tol()).unwrap();
        assert_eq!(w, Matrix2::zeros());

        let n = half_turn([1.0, 1.0, 1.0]);
        let la = so3_basis_abs();
        let w = w_matrix(&n, &la[0], &la[1], &la[2], tol()).unwrap();
        let want = cm([0.0, 1.0, -1.0, 0.0], [1.0, 1.0, 1.0, -1.0], 1.0 / 3f64.sqrt());
        assert!((w - want).norm() < 1e-14 || (w + want).norm() < 1e-14, "{w}");

        let id = Matrix3::identity();
        let w = w_matrix(&d, &id, &id, &id, tol()).unwrap();
        let want = cm([0.0; 4], [-1.0, 0.0, 0.0, 1.0], 1.0);
        assert_eq!(w, want);
    }

    #[test]
    fn vector_branch_examples() {
        let d = rot([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]);
        let u = lift_vector(&d, tol()).unwrap();
        let want = cm([0.0; 4], [1.0, 0.0, 0.0, -1.0], 1.0);
        assert!(u.pair_distance(&SpecialUnitary2::new(want, tol()).unwrap()) < 1e-15);
        assert_eq!(vector_case(&d, tol()).unwrap(), Some(VectorCase::Case5));

        let s = rot([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]]);
        let u = lift_vector(&s, tol()).unwrap();
        let want = cm([0.0, 1.0, -1.0, 0.0], [0.0, 1.0, 1.0, 0.0], FRAC_1_SQRT_2);
        assert!(u.pair_distance(&SpecialUnitary2::new(want, tol()).unwrap()) < 1e-15);
        assert_eq!(vector_case(&s, tol()).unwrap(), Some(VectorCase::Case2));

        let n = half_turn([1.0, 1.0, 1.0]);
        let u = lift_vector(&n, tol()).unwrap();
        let want = cm([0.0, 1.0, -1.0, 0.0], [1.0, 1.0, 1.0, -1.0], 1.0 / 3f64.sqrt());
        assert!(u.pair_distance(&SpecialUnitary2::new(want, tol()).unwrap()) < 1e-14);
        assert_eq!(vector_case(&n, tol()).unwrap(), Some(VectorCase::Case1));
        assert!(u.trace().norm() < 1e-15);
    }

    #[test]
    fn lift_examples() {
        let r = lift(&Rotation3::identity(), tol()).unwrap();
        assert_eq!(*r.representative.matrix(), Matrix2::identity());
        assert_eq!(r.branch, Branch::Real);
        assert_eq!(r.residual, 0.0);

        let r = lift(&example_l().transpose(), tol()).unwrap();
        let want = cm([1.0, 1.0, -1.0, 1.0], [1.0, 1.0, 1.0, -1.0], 0.5);
        assert!((r.representative.matrix() - want).norm() < 1e-15);

        let x = rot([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);
        let r = lift(&x, tol()).unwrap();
        assert_eq!(r.branch, Branch::Vector);
        let want = cm([0.0; 4], [0.0, 1.0, 1.0, 0.0], 1.0);
        assert!((r.representative.matrix() - want).norm() < 1e-15);
        assert!((r.partner().matrix() + want).norm() < 1e-15);
    }

    #[test]
    fn every_half_turn_case_is_reached() {
        let cases = [
            ([1.0, 2.0, 3.0], VectorCase::Case1),
            ([1.0, 1.0, 0.0], VectorCase::Case2),
            ([-1.0, 1.0, 0.0], VectorCase::Case2),
            ([1.0, 0.0, 1.0], VectorCase::Case3),
            ([0.0, 1.0, -1.0], VectorCase::Case4),
            ([0.0, 0.0, 1.0], VectorCase::Case5),
            ([0.0, 1.0, 0.0], VectorCase::Case6),
            ([1.0, 0.0, 0.0], VectorCase::Case7),
        ];
        for (n, case) in cases {
            let o = half_turn(n);
            let r = lift(&o, tol()).unwrap();
            assert_eq!(r.vector_case, Some(case), "{n:?}");
            assert!(r.residual < 1e-12, "{n:?}: {}", r.residual);
        }
    }

    #[test]
    fn band_picks_smaller_residual() {
        // a1 = 1e-4 gives 1 + tr O = 4e-8, inside (zero, band)
        let q = UnitQuaternion::normalize(1e-4, 0.6, -0.48, 0.64).unwrap();
        let o = euler_rodrigues_unchecked(&q);
        let gap = 1.0 + o.trace();
        assert!(gap > 1e-9 && gap < 1e-6);
        let r = lift(&o, tol()).unwrap();
        assert_eq!(r.branch, Branch::Real);
        assert!(r.residual < 1e-9);
        assert!(r.quaternion.pair_distance(&q) < 1e-8);
    }

    #[test]
    fn lift_rejects_non_rotation() {
        let bad = Rotation3::from_matrix_unchecked(Matrix3::new(
            2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0,
        ));
        assert!(matches!(lift(&bad, tol()), Err(Error::NotOrthogonal(_))));
    }
}
