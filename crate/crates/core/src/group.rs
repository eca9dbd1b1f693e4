//! SU(2) and SO(3) value types and the maps between them.
//!
//! An element of SU(2) is written through its quaternion parameters
//! `(a1, a2, b1, b2)` as
//!
//! ```text
//!     [  a1 + i a2    b1 + i b2 ]
//!     [ -b1 + i b2    a1 - i a2 ]
//! ```
//!
//! and is sent to SO(3) by the adjoint action `O_ij = 1/2 tr(s_i U s_j U^dag)`
//! on the Pauli matrices `s_1 = X`, `s_2 = Y`, `s_3 = Z`. The map is two to
//! one: `U` and `-U` give the same rotation.

use std::ops::Mul;

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The Pauli matrices `[X, Y, Z]`.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = c(0.0);
    let l = c(1.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -I, I, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// Quaternion parameters of an SU(2) element. `a1` is the scalar part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self {
        a1: 1.0,
        a2: 0.0,
        b1: 0.0,
        b2: 0.0,
    };

    /// Checked constructor; the squared norm must be within `tol.unitary` of 1.
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64, tol: Tolerance) -> Result<Self> {
        let q = Self { a1, a2, b1, b2 };
        if !q.components().iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = q.norm_sqr() - 1.0;
        if dev.abs() > tol.unitary {
            return Err(Error::NotUnitNorm(dev));
        }
        Ok(q)
    }

    /// Scales an arbitrary nonzero 4-vector onto the unit sphere.
    pub fn normalize(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self> {
        let n = (a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2).sqrt();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n == 0.0 {
            return Err(Error::NotUnitNorm(-1.0));
        }
        Ok(Self {
            a1: a1 / n,
            a2: a2 / n,
            b1: b1 / n,
            b2: b2 / n,
        })
    }

    pub(crate) fn from_components_unchecked(q: [f64; 4]) -> Self {
        Self {
            a1: q[0],
            a2: q[1],
            b1: q[2],
            b2: q[3],
        }
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }
    pub fn a2(&self) -> f64 {
        self.a2
    }
    pub fn b1(&self) -> f64 {
        self.b1
    }
    pub fn b2(&self) -> f64 {
        self.b2
    }

    /// `[a1, a2, b1, b2]`
    pub fn components(&self) -> [f64; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components().iter().map(|x| x * x).sum()
    }

    pub fn neg(&self) -> Self {
        Self::from_components_unchecked(self.components().map(|x| -x))
    }

    /// Picks the member of `{q, -q}` with `a1 > 0`, or when `|a1| <= eps` the
    /// one whose first component above `eps` among `(a2, b1, b2)` is positive.
    pub fn canonical(&self, eps: f64) -> Self {
        let lead = self
            .components()
            .into_iter()
            .find(|x| x.abs() > eps)
            .unwrap_or(self.a1);
        if lead < 0.0 {
            self.neg()
        } else {
            *self
        }
    }

    /// `min(|p - q|, |p + q|)`, the distance between the rotations' SU(2) pairs.
    pub fn pair_distance(&self, other: &Self) -> f64 {
        let p = self.components();
        let q = other.components();
        let minus: f64 = p.iter().zip(&q).map(|(x, y)| (x - y).powi(2)).sum();
        let plus: f64 = p.iter().zip(&q).map(|(x, y)| (x + y).powi(2)).sum();
        minus.min(plus).sqrt()
    }
}

/// A 2x2 complex matrix with `U U^dag = I` and `det U = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialUnitary2(Matrix2<Complex64>);

impl SpecialUnitary2 {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn new(m: Matrix2<Complex64>, tol: Tolerance) -> Result<Self> {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let unit_dev = (m * m.adjoint() - Matrix2::identity()).norm();
        if unit_dev > tol.unitary {
            return Err(Error::NotUnitary(unit_dev));
        }
        let det_dev = (m.determinant() - c(1.0)).norm();
        if det_dev > tol.unitary {
            return Err(Error::BadDeterminant(det_dev));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix2<Complex64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Frobenius distance to `other`, minimised over the sign of `other`.
    pub fn pair_distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm().min((self.0 + other.0).norm())
    }
}

impl Mul for SpecialUnitary2 {
    type Output = SpecialUnitary2;

    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// A 3x3 real matrix with `O^T O = I` and `det O = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(Matrix3<f64>);

impl Rotation3 {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn new(m: Matrix3<f64>, tol: Tolerance) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let orth_dev = (m.transpose() * m - Matrix3::identity()).norm();
        if orth_dev > tol.rotation {
            return Err(Error::NotOrthogonal(orth_dev));
        }
        let det_dev = (m.determinant() - 1.0).abs();
        if det_dev > tol.rotation {
            return Err(Error::BadDeterminant(det_dev));
        }
        Ok(Self(m))
    }

    /// Row-major convenience constructor with default tolerances.
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(Matrix3::from_fn(|i, j| rows[i][j]), Tolerance::default())
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

impl Mul for Rotation3 {
    type Output = Rotation3;

    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// Builds the SU(2) matrix of a unit quaternion.
pub fn su2_from_quat(q: &UnitQuaternion, tol: Tolerance) -> Result<SpecialUnitary2> {
    let q = UnitQuaternion::new(q.a1, q.a2, q.b1, q.b2, tol)?;
    Ok(su2_from_quat_unchecked(&q))
}

pub(crate) fn su2_from_quat_unchecked(q: &UnitQuaternion) -> SpecialUnitary2 {
    SpecialUnitary2(Matrix2::new(
        Complex64::new(q.a1, q.a2),
        Complex64::new(q.b1, q.b2),
        Complex64::new(-q.b1, q.b2),
        Complex64::new(q.a1, -q.a2),
    ))
}

/// Reads the quaternion parameters off the first row of `u`.
pub fn quat_from_su2(u: &SpecialUnitary2, tol: Tolerance) -> Result<UnitQuaternion> {
    let u = SpecialUnitary2::new(u.0, tol)?;
    let (u11, u12) = (u.0[(0, 0)], u.0[(0, 1)]);
    UnitQuaternion::new(u11.re, u11.im, u12.re, u12.im, tol)
}

pub(crate) fn quat_from_su2_unchecked(u: &SpecialUnitary2) -> UnitQuaternion {
    let (u11, u12) = (u.0[(0, 0)], u.0[(0, 1)]);
    UnitQuaternion::from_components_unchecked([u11.re, u11.im, u12.re, u12.im])
}

/// Imaginary parts of the adjoint entries above this are a bug, not noise.
const ADJOINT_IMAG_LIMIT: f64 = 1e-9;

/// The adjoint representation `O_ij = 1/2 tr(s_i U s_j U^dag)`.
pub fn adjoint_so3(u: &SpecialUnitary2) -> Result<Rotation3> {
    let s = pauli();
    let ud = u.0.adjoint();
    let mut o = Matrix3::zeros();
    let mut worst_imag = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let z = (s[i] * u.0 * s[j] * ud).trace() * 0.5;
            worst_imag = worst_imag.max(z.im.abs());
            o[(i, j)] = z.re;
        }
    }
    if worst_imag > ADJOINT_IMAG_LIMIT {
        return Err(Error::Internal(format!(
            "adjoint map produced imaginary residue {worst_imag:e}"
        )));
    }
    Ok(Rotation3(o))
}

/// Closed-form rotation matrix of a unit quaternion (Euler-Rodrigues).
pub fn euler_rodrigues(q: &UnitQuaternion, tol: Tolerance) -> Result<Rotation3> {
    let q = UnitQuaternion::new(q.a1, q.a2, q.b1, q.b2, tol)?;
    Ok(euler_rodrigues_unchecked(&q))
}

pub(crate) fn euler_rodrigues_unchecked(q: &UnitQuaternion) -> Rotation3 {
    let alpha = [q.a1, q.a2];
    let beta = [q.b1, q.b2];
    // 1-based indices to line up with the usual chi/mu/nu notation.
    let chi = |i: usize, j: usize| alpha[i - 1] * beta[j - 1];
    let mu12 = alpha[0] * alpha[1];
    let nu12 = beta[0] * beta[1];
    let (a1s, a2s, b1s, b2s) = (q.a1 * q.a1, q.a2 * q.a2, q.b1 * q.b1, q.b2 * q.b2);
    let tau1 = a1s - a2s - b1s + b2s;
    let tau2 = a1s - a2s + b1s - b2s;
    let tau3 = a1s + a2s - b1s - b2s;
    Rotation3(Matrix3::new(
        tau1,
        2.0 * (mu12 + nu12),
        2.0 * (-chi(1, 1) + chi(2, 2)),
        2.0 * (-mu12 + nu12),
        tau2,
        2.0 * (chi(2, 1) + chi(1, 2)),
        2.0 * (chi(1, 1) + chi(2, 2)),
        2.0 * (chi(2, 1) - chi(1, 2)),
        tau3,
    ))
}

/// Sign of `t` with a dead zone: 0 when `|t| <= eps`.
pub fn sgn_eps(t: f64, eps: f64) -> i8 {
    if t.abs() <= eps {
        0
    } else if t > 0.0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Rotation by `theta` about a coordinate axis, paired with the SU(2)
/// element `cos(theta/2) I - i sin(theta/2) s_axis` that induces it.
pub fn axis_rotation(axis: Axis, theta: f64) -> (Rotation3, SpecialUnitary2) {
    let (ct, st) = (theta.cos(), theta.sin());
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (o, q) = match axis {
        Axis::X => (
            Matrix3::new(1.0, 0.0, 0.0, 0.0, ct, -st, 0.0, st, ct),
            [ch, 0.0, 0.0, -sh],
        ),
        Axis::Y => (
            Matrix3::new(ct, 0.0, st, 0.0, 1.0, 0.0, -st, 0.0, ct),
            [ch, 0.0, -sh, 0.0],
        ),
        Axis::Z => (
            Matrix3::new(ct, -st, 0.0, st, ct, 0.0, 0.0, 0.0, 1.0),
            [ch, -sh, 0.0, 0.0],
        ),
    };
    (
        Rotation3(o),
        su2_from_quat_unchecked(&UnitQuaternion::from_components_unchecked(q)),
    )
}

pub fn rotate_vector(o: &Rotation3, w: &Vector3<f64>) -> Vector3<f64> {
    o.0 * w
}

/// Outcome of comparing two SU(2) elements and their rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityCheck {
    /// `tr(U1 U2^dag)`
    pub su2_trace: Complex64,
    /// `tr(O1^T O2)`
    pub so3_trace: f64,
    /// `|tr(U1 U2^dag)| <= tol.zero`
    pub orthogonal: bool,
}

/// Hilbert-Schmidt orthogonality of `u1, u2` alongside the trace of their
/// rotations. Orthogonal pairs always have `tr(O1^T O2) = -1`.
pub fn check_orthogonality(
    u1: &SpecialUnitary2,
    u2: &SpecialUnitary2,
    tol: Tolerance,
) -> Result<OrthogonalityCheck> {
    let u1 = SpecialUnitary2::new(u1.0, tol)?;
    let u2 = SpecialUnitary2::new(u2.0, tol)?;
    let su2_trace = (u1.0 * u2.0.adjoint()).trace();
    let o1 = adjoint_so3(&u1)?;
    let o2 = adjoint_so3(&u2)?;
    let so3_trace = (o1.0.transpose() * o2.0).trace();
    Ok(OrthogonalityCheck {
        su2_trace,
        so3_trace,
        orthogonal: su2_trace.norm() <= tol.zero,
    })
}

/// Bell states in the basis order `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    /// Diagonal correlation matrix `t_ij = <s_i (x) s_j>` of the Bell state.
    pub fn correlation(self) -> Matrix3<f64> {
        let d = match self {
            Bell::PhiPlus => [1.0, -1.0, 1.0],
            Bell::PhiMinus => [-1.0, 1.0, 1.0],
            Bell::PsiPlus => [1.0, 1.0, -1.0],
            Bell::PsiMinus => [-1.0, -1.0, -1.0],
        };
        Matrix3::from_diagonal(&Vector3::from(d))
    }

    /// Amplitudes on `|00>, |01>, |10>, |11>`.
    pub fn amplitudes(self) -> [f64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Bell::PhiPlus => [h, 0.0, 0.0, h],
            Bell::PhiMinus => [h, 0.0, 0.0, -h],
            Bell::PsiPlus => [0.0, h, h, 0.0],
            Bell::PsiMinus => [0.0, h, -h, 0.0],
        }
    }
}

/// so(3) basis `L1, L2, L3` used for the sign traces.
pub fn so3_basis() -> [Matrix3<f64>; 3] {
    [
        Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0),
    ]
}

/// Entrywise absolute values `|L1|, |L2|, |L3|`.
pub fn so3_basis_abs() -> [Matrix3<f64>; 3] {
    so3_basis().map(|l| l.abs())
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    a.component_mul(&b.transpose()).sum()
}
