/// Numerical thresholds shared by every routine in the crate.
///
/// `zero` is the single threshold for sign decisions: `sgn_eps` treats
/// `|t| <= zero` as zero, the vector branch of the lift is taken when
/// `1 + tr(O) <= zero`, and state checks accept eigenvalues down to `-zero`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub zero: f64,
    /// Upper edge of the band `zero < 1 + tr(O) < band` in which both lift
    /// branches are evaluated and the smaller residual wins.
    pub band: f64,
    /// Orthogonality / determinant check on `Rotation3` inputs.
    pub rotation: f64,
    /// Unitarity / determinant / unit-norm check on SU(2) inputs.
    pub unitary: f64,
    /// How far below zero a Bell-trace radicand may fall before it is rejected.
    pub radicand: f64,
    /// Hermiticity, trace and imaginary-residue checks on density matrices.
    pub hermitian: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            zero: 1e-9,
            band: 1e-6,
            rotation: 1e-8,
            unitary: 1e-10,
            radicand: 1e-8,
            hermitian: 1e-10,
        }
    }
}

impl Tolerance {
    /// Defaults with the zero threshold replaced. Validation thresholds are
    /// widened to `zero` when it is looser than their defaults.
    pub fn with_zero(zero: f64) -> Self {
        let d = Self::default();
        Self {
            zero,
            band: d.band.max(zero),
            rotation: d.rotation.max(zero),
            unitary: d.unitary.max(zero),
            radicand: d.radicand.max(zero),
            hermitian: d.hermitian.max(zero),
        }
    }
}
