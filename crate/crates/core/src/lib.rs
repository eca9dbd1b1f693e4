//! Explicit SO(3) to SU(2) lifting and local-unitary control of two-qubit
//! correlation matrices.
//!
//! Given a rotation `O` of the Bloch sphere, [`lift`] returns the pair `{U, -U}`
//! of special unitaries with `adjoint_so3(U) = O`, using a closed form built
//! from traces of `O` against fixed matrices. On top of it the [`decomp`]
//! module diagonalizes, triangularizes or symmetrizes the correlation matrix
//! `T` of a two-qubit state with local operations `U_A (x) U_B`, which act as
//! `a -> L a`, `b -> R b`, `T -> L T R^T` on the Bloch form.

pub mod decomp;
pub mod error;
pub mod group;
pub mod lift;
pub mod oracle;
pub mod state;
pub mod tolerance;

pub use decomp::{
    diagonalize, diagonalize_with_factors, qr_so3, signed_svd, symmetrize_one_sided,
    symmetrize_with_factors, triangularize, Diagonalized, OneSided, QrResult, Side, SignedSvd,
};
pub use error::{Error, Result};
pub use group::{
    adjoint_so3, axis_rotation, check_orthogonality, euler_rodrigues, pauli, quat_from_su2,
    rotate_vector, sgn_eps, so3_basis, so3_basis_abs, su2_from_quat, Axis, Bell,
    OrthogonalityCheck, Rotation3, SpecialUnitary2, UnitQuaternion,
};
pub use lift::{
    bell_trace_magnitudes, lift, lift_real, lift_vector, sign_table, vector_case, w_matrix,
    BellMagnitudes, Branch, LiftResult, VectorCase,
};
pub use oracle::{
    brute_lift, half_turn_suite, oracle_check, random_quaternion, random_rotation, random_su2,
    roundtrip_residual, verify_suite, BruteConfig, BruteLift, OracleReport, VerifySummary,
};
pub use state::{
    apply_local, from_bloch, local_rotations, to_bloch, transform_bloch, BlochForm, DensityMatrix4,
};
pub use tolerance::Tolerance;
