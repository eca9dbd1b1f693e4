//! Two-qubit density matrices and their Bloch form
//! `rho = 1/4 (I(x)I + a.s(x)I + I(x)b.s + sum t_ij s_i(x)s_j)`.
//!
//! Basis order is `|00>, |01>, |10>, |11>`, qubit A being the left factor.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{adjoint_so3, pauli, Bell, Rotation3, SpecialUnitary2};
use crate::tolerance::Tolerance;

/// A 4x4 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(Matrix4<Complex64>);

impl DensityMatrix4 {
    pub fn new(m: Matrix4<Complex64>, tol: Tolerance) -> Result<Self> {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > tol.hermitian {
            return Err(Error::NotHermitian(herm));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol.hermitian {
            return Err(Error::BadTrace(tr.re));
        }
        let rho = Self(m);
        let low = rho.min_eigenvalue();
        if low < -tol.zero {
            return Err(Error::NotAState(low));
        }
        Ok(rho)
    }

    /// `|psi><psi|` for a normalized amplitude vector.
    pub fn pure(psi: &nalgebra::Vector4<Complex64>, tol: Tolerance) -> Result<Self> {
        Self::new(psi * psi.adjoint(), tol)
    }

    pub fn bell(b: Bell) -> Self {
        let psi = nalgebra::Vector4::from(b.amplitudes().map(|x| Complex64::new(x, 0.0)));
        Self(psi * psi.adjoint())
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity() * Complex64::new(0.25, 0.0))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let hermitian = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let ev = hermitian.symmetric_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

/// Local Bloch vectors `a`, `b` and correlation matrix `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochForm {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl BlochForm {
    pub fn new(a: Vector3<f64>, b: Vector3<f64>, t: Matrix3<f64>) -> Self {
        Self { a, b, t }
    }

    pub fn from_correlation(t: Matrix3<f64>) -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros(), t)
    }
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let k = a.kronecker(b);
    Matrix4::from_fn(|i, j| k[(i, j)])
}

pub fn to_bloch(rho: &DensityMatrix4, tol: Tolerance) -> Result<BlochForm> {
    let s = pauli();
    let id = Matrix2::identity();
    let m = rho.matrix();
    let mut worst = 0.0_f64;
    let mut expect = |op: Matrix4<Complex64>| {
        let z = (op * m).trace();
        worst = worst.max(z.im.abs());
        z.re
    };
    let a = Vector3::from_fn(|i, _| expect(kron(&s[i], &id)));
    let b = Vector3::from_fn(|j, _| expect(kron(&id, &s[j])));
    let t = Matrix3::from_fn(|i, j| expect(kron(&s[i], &s[j])));
    if worst > tol.hermitian {
        return Err(Error::ImaginaryResidue(worst));
    }
    Ok(BlochForm { a, b, t })
}

/// Reassembles the 4x4 matrix and checks it is a state.
pub fn from_bloch(bf: &BlochForm, tol: Tolerance) -> Result<DensityMatrix4> {
    if !(bf.a.iter().chain(bf.b.iter()).chain(bf.t.iter())).all(|x| x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let s = pauli();
    let id = Matrix2::identity();
    let r = |x: f64| Complex64::new(x, 0.0);
    let mut m = kron(&id, &id);
    for i in 0..3 {
        m += kron(&s[i], &id) * r(bf.a[i]);
        m += kron(&id, &s[i]) * r(bf.b[i]);
        for j in 0..3 {
            m += kron(&s[i], &s[j]) * r(bf.t[(i, j)]);
        }
    }
    DensityMatrix4::new(m * r(0.25), tol)
}

/// `(UL (x) UR) rho (UL (x) UR)^dag`
pub fn apply_local(rho: &DensityMatrix4, ul: &SpecialUnitary2, ur: &SpecialUnitary2) -> DensityMatrix4 {
    let k = kron(ul.matrix(), ur.matrix());
    DensityMatrix4(k * rho.matrix() * k.adjoint())
}

/// `a -> L a`, `b -> R b`, `T -> L T R^T`
pub fn transform_bloch(bf: &BlochForm, l: &Rotation3, r: &Rotation3) -> BlochForm {
    BlochForm {
        a: l.matrix() * bf.a,
        b: r.matrix() * bf.b,
        t: l.matrix() * bf.t * r.matrix().transpose(),
    }
}

/// The rotations a pair of local unitaries induces on the Bloch form.
pub fn local_rotations(ul: &SpecialUnitary2, ur: &SpecialUnitary2) -> Result<(Rotation3, Rotation3)> {
    Ok((adjoint_so3(ul)?, adjoint_so3(ur)?))
}
