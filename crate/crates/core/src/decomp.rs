//! Factorizations of 3x3 correlation matrices over SO(3) and the local
//! operations built from them.
//!
//! A local unitary pair acts on the Bloch form as `T -> L T R^T`, so any
//! factorization `T = L S R` with `L, R` in SO(3) tells which rotations to
//! lift. Two-sided access diagonalizes `T`; one-sided access can still make it
//! triangular (QR) or symmetric.

use nalgebra::{Matrix3, Vector3};

use crate::error::Result;
use crate::lift::{lift, LiftResult};
use crate::group::Rotation3;
use crate::state::{transform_bloch, BlochForm};
use crate::tolerance::Tolerance;

/// `T = L diag(sigma) R` with `L, R` in SO(3).
///
/// `|sigma_1| >= |sigma_2| >= |sigma_3|`, `sigma_1, sigma_2 >= 0`, and the sign of
/// `det T` is carried by `sigma_3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedSvd {
    pub l: Rotation3,
    pub sigma: Vector3<f64>,
    pub r: Rotation3,
}

impl SignedSvd {
    /// Factors supplied by the caller, e.g. a known factorization. Only
    /// the rotations are checked.
    pub fn from_parts(l: Matrix3<f64>, sigma: Vector3<f64>, r: Matrix3<f64>, tol: Tolerance) -> Result<Self> {
        Ok(Self {
            l: Rotation3::new(l, tol)?,
            sigma,
            r: Rotation3::new(r, tol)?,
        })
    }

    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.l.matrix() * Matrix3::from_diagonal(&self.sigma) * self.r.matrix()
    }
}

/// `T = Q r` with `Q` in SO(3) and `r` upper triangular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrResult {
    pub q: Rotation3,
    pub r: Matrix3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// qubit A; rotates `a` and multiplies `T` from the left
    Left,
    /// qubit B; rotates `b` and multiplies `T` from the right by the transpose
    Right,
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Some unit vector orthogonal to the unit vector `u`, chosen from `u x e_k`
/// for the first axis `e_k` that is not nearly parallel to `u`.
fn perpendicular(u: &Vector3<f64>) -> Vector3<f64> {
    let k = (0..3).find(|&k| u[k] * u[k] <= 0.5).unwrap_or(0);
    u.cross(&Vector3::ith(k, 1.0)).normalize()
}

/// Signed SVD via one-sided Jacobi: plane rotations `V` orthogonalize the
/// columns of `T V` (equivalently diagonalize `T^T T`), the column norms are
/// the singular values, and the left factor is completed with a cross product
/// so that any reflection ends up in `sigma_3`.
pub fn signed_svd(t: &Matrix3<f64>) -> SignedSvd {
    let mut b = *t;
    let mut v = Matrix3::<f64>::identity();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = b.column(p).norm_squared();
            let beta = b.column(q).norm_squared();
            let gamma = b.column(p).dot(&b.column(q));
            if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                continue;
            }
            let zeta = (beta - alpha) / (2.0 * gamma);
            let tan = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let cos = 1.0 / (1.0 + tan * tan).sqrt();
            let sin = cos * tan;
            for m in [&mut b, &mut v] {
                let cp = m.column(p).clone_owned();
                let cq = m.column(q).clone_owned();
                m.set_column(p, &(cp * cos - cq * sin));
                m.set_column(q, &(cp * sin + cq * cos));
            }
            rotated = true;
        }
        if !rotated {
            break;
        }
    }

    // descending column norm; stable so ties keep the sweep order
    let mut order = [0usize, 1, 2];
    let norms = [b.column(0).norm(), b.column(1).norm(), b.column(2).norm()];
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let cols = order.map(|k| b.column(k).clone_owned());
    let mut v = Matrix3::from_columns(&order.map(|k| v.column(k).clone_owned()));

    let u1 = if norms[order[0]] > 0.0 {
        cols[0] / norms[order[0]]
    } else {
        Vector3::x()
    };
    let w2 = cols[1] - u1 * u1.dot(&cols[1]);
    let u2 = if w2.norm() > 0.0 {
        w2.normalize()
    } else {
        perpendicular(&u1)
    };
    let u3 = u1.cross(&u2);
    let mut sigma = Vector3::new(u1.dot(&cols[0]), u2.dot(&cols[1]), u3.dot(&cols[2]));

    if v.determinant() < 0.0 {
        v.set_column(2, &(-v.column(2)));
        sigma[2] = -sigma[2];
    }
    let u = Matrix3::from_columns(&[u1, u2, u3]);
    SignedSvd {
        l: Rotation3::from_matrix_unchecked(u),
        sigma,
        r: Rotation3::from_matrix_unchecked(v.transpose()),
    }
}

/// QR by modified Gram-Schmidt with `Q` forced into SO(3); a reflection shows
/// up as a negative `r[(2, 2)]`.
pub fn qr_so3(t: &Matrix3<f64>) -> QrResult {
    let scale = t.norm();
    let thresh = 1e-14 * scale;
    let c = [t.column(0).clone_owned(), t.column(1).clone_owned(), t.column(2).clone_owned()];
    let mut r = Matrix3::zeros();

    let q1 = if c[0].norm() > thresh {
        c[0].normalize()
    } else {
        Vector3::x()
    };
    r[(0, 0)] = q1.dot(&c[0]);

    let mut w = c[1] - q1 * q1.dot(&c[1]);
    w -= q1 * q1.dot(&w);
    let q2 = if w.norm() > thresh {
        w.normalize()
    } else {
        perpendicular(&q1)
    };
    r[(0, 1)] = q1.dot(&c[1]);
    r[(1, 1)] = q2.dot(&c[1]);

    let q3 = q1.cross(&q2);
    r[(0, 2)] = q1.dot(&c[2]);
    r[(1, 2)] = q2.dot(&c[2]);
    r[(2, 2)] = q3.dot(&c[2]);

    QrResult {
        q: Rotation3::from_matrix_unchecked(Matrix3::from_columns(&[q1, q2, q3])),
        r,
    }
}

/// Result of a two-sided diagonalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagonalized {
    /// lift of `L^T`, to apply on qubit A
    pub ul: LiftResult,
    /// lift of `R`, to apply on qubit B
    pub ur: LiftResult,
    pub out: BlochForm,
    pub factors: SignedSvd,
}

/// Result of a one-sided operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSided {
    pub side: Side,
    /// the rotation induced on `side`
    pub rotation: Rotation3,
    pub u: LiftResult,
    pub out: BlochForm,
}

/// Diagonalizes `bf.t` with local unitaries on both qubits.
///
/// When `det T < 0` the negative entry is placed in the middle slot, so the
/// diagonal follows the sign pattern `(+, -, +)` of `T` for `|Phi+>`.
pub fn diagonalize(bf: &BlochForm, tol: Tolerance) -> Result<Diagonalized> {
    let mut svd = signed_svd(&bf.t);
    if svd.sigma[2] < 0.0 {
        // L S R = (L D)(D S) R with D = diag(1, -1, -1) in SO(3)
        let d = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
        svd.l = Rotation3::from_matrix_unchecked(svd.l.matrix() * d);
        svd.sigma = Vector3::new(svd.sigma[0], -svd.sigma[1], -svd.sigma[2]);
    }
    diagonalize_with_factors(bf, &svd, tol)
}

/// Diagonalizes using a given factorization `bf.t = L S R`.
pub fn diagonalize_with_factors(bf: &BlochForm, factors: &SignedSvd, tol: Tolerance) -> Result<Diagonalized> {
    let left = factors.l.transpose();
    let right = factors.r;
    Ok(Diagonalized {
        ul: lift(&left, tol)?,
        ur: lift(&right, tol)?,
        out: transform_bloch(bf, &left, &right),
        factors: *factors,
    })
}

fn one_sided(bf: &BlochForm, side: Side, rotation: Rotation3, tol: Tolerance) -> Result<OneSided> {
    let id = Rotation3::identity();
    let out = match side {
        Side::Left => transform_bloch(bf, &rotation, &id),
        Side::Right => transform_bloch(bf, &id, &rotation),
    };
    Ok(OneSided {
        side,
        rotation,
        u: lift(&rotation, tol)?,
        out,
    })
}

/// Makes `T` upper triangular (`Left`) or lower triangular (`Right`) by acting
/// on one qubit only.
pub fn triangularize(bf: &BlochForm, side: Side, tol: Tolerance) -> Result<OneSided> {
    let rotation = match side {
        // Q^T T = R
        Side::Left => qr_so3(&bf.t).q.transpose(),
        // T^T = Q R  =>  T Q = R^T
        Side::Right => qr_so3(&bf.t.transpose()).q.transpose(),
    };
    one_sided(bf, side, rotation, tol)
}

/// Makes `T` symmetric by acting on one qubit: `R^T S R` from the left or
/// `L S L^T` from the right, where `T = L S R`.
pub fn symmetrize_one_sided(bf: &BlochForm, side: Side, tol: Tolerance) -> Result<OneSided> {
    symmetrize_with_factors(bf, side, &signed_svd(&bf.t), tol)
}

pub fn symmetrize_with_factors(bf: &BlochForm, side: Side, factors: &SignedSvd, tol: Tolerance) -> Result<OneSided> {
    let rotation = match side {
        Side::Left => factors.r.transpose() * factors.l.transpose(),
        Side::Right => factors.l * factors.r,
    };
    one_sided(bf, side, rotation, tol)
}
