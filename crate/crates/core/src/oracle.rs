//! Independent checks of the closed-form lift.
//!
//! Random inputs come from `ChaCha8Rng::seed_from_u64(seed)` drawing standard
//! normals (`rand_distr::StandardNormal`); four normals normalized onto the
//! 3-sphere give a Haar-distributed unit quaternion. The brute-force lift only
//! ever evaluates the Euler-Rodrigues matrix, never the closed-form lift.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::{
    adjoint_so3, euler_rodrigues_unchecked, su2_from_quat_unchecked, Rotation3, SpecialUnitary2,
    UnitQuaternion,
};
use crate::lift::{lift, VectorCase};
use crate::tolerance::Tolerance;

/// Haar-random unit quaternion from any RNG.
pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        if let Ok(q) = UnitQuaternion::normalize(g[0], g[1], g[2], g[3]) {
            return q;
        }
    }
}

pub fn random_su2(seed: u64) -> SpecialUnitary2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    su2_from_quat_unchecked(&random_quaternion(&mut rng))
}

/// Deterministic Haar-random rotation for `seed`.
pub fn random_rotation(seed: u64) -> Rotation3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    euler_rodrigues_unchecked(&random_quaternion(&mut rng))
}

/// `||adjoint_so3(lift(O)) - O||_F`
pub fn roundtrip_residual(o: &Rotation3, tol: Tolerance) -> Result<f64> {
    let r = lift(o, tol)?;
    Ok((adjoint_so3(&r.representative)?.matrix() - o.matrix()).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteConfig {
    /// random quaternions drawn before refinement (at least 1000)
    pub samples: usize,
    /// pattern-search rounds; the step starts at 0.1 and halves after a round
    /// without improvement
    pub refine_rounds: usize,
    pub seed: u64,
}

impl Default for BruteConfig {
    fn default() -> Self {
        Self {
            samples: 50_000,
            refine_rounds: 200,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteLift {
    pub quaternion: UnitQuaternion,
    pub residual: f64,
    /// best residual after sampling, then after each refinement round
    pub history: Vec<f64>,
}

fn er_residual(q: &UnitQuaternion, o: &Rotation3) -> f64 {
    (euler_rodrigues_unchecked(q).matrix() - o.matrix()).norm()
}

/// Derivative-free search for a quaternion whose rotation matches `o`.
pub fn brute_lift(o: &Rotation3, cfg: BruteConfig) -> Result<BruteLift> {
    if cfg.samples < 1000 {
        return Err(Error::Precondition("brute_lift needs at least 1000 samples"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = random_quaternion(&mut rng);
    let mut best_res = er_residual(&best, o);
    for _ in 1..cfg.samples {
        let q = random_quaternion(&mut rng);
        let r = er_residual(&q, o);
        if r < best_res {
            best = q;
            best_res = r;
        }
    }

    let mut history = Vec::with_capacity(cfg.refine_rounds + 1);
    history.push(best_res);
    let mut step = 0.1;
    for _ in 0..cfg.refine_rounds {
        let mut improved = false;
        for k in 0..4 {
            for dir in [1.0, -1.0] {
                let mut c = best.components();
                c[k] += dir * step;
                let Ok(q) = UnitQuaternion::normalize(c[0], c[1], c[2], c[3]) else {
                    continue;
                };
                let r = er_residual(&q, o);
                if r < best_res {
                    best = q;
                    best_res = r;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        history.push(best_res);
    }
    Ok(BruteLift {
        quaternion: best,
        residual: best_res,
        history,
    })
}

/// Closed form versus brute force on one rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub residual_closed_form: f64,
    pub residual_brute: f64,
    /// `min(|q_c - q_b|, |q_c + q_b|)`, in `[0, 2]`
    pub quaternion_distance: f64,
    pub samples: usize,
}

pub fn oracle_check(o: &Rotation3, cfg: BruteConfig, tol: Tolerance) -> Result<OracleReport> {
    let closed = lift(o, tol)?;
    let brute = brute_lift(o, cfg)?;
    Ok(OracleReport {
        residual_closed_form: closed.residual,
        residual_brute: brute.residual,
        quaternion_distance: closed.quaternion.pair_distance(&brute.quaternion),
        samples: cfg.samples,
    })
}

/// Half turns `2 n n^T - I` covering every vanishing pattern of the axis `n`,
/// tagged with the case each should select: 14 generic axes, 10 in each
/// coordinate plane, and each coordinate axis with both signs.
pub fn half_turn_suite(seed: u64) -> Vec<(Rotation3, VectorCase)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axis = |zero: Option<usize>| loop {
        let mut n: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        if let Some(k) = zero {
            n[k] = 0.0;
        }
        // keep every nonzero component well away from the sign threshold
        if n.iter().enumerate().all(|(i, x)| Some(i) == zero || x.abs() > 0.05) {
            break Vector3::from(n).normalize();
        }
    };
    let mut axes = Vec::with_capacity(50);
    for _ in 0..14 {
        axes.push((axis(None), VectorCase::Case1));
    }
    // a2 pairs with the z axis, b1 with y, b2 with x
    for (zero, case) in [(2, VectorCase::Case2), (1, VectorCase::Case3), (0, VectorCase::Case4)] {
        for _ in 0..10 {
            axes.push((axis(Some(zero)), case));
        }
    }
    for (k, case) in [(2, VectorCase::Case5), (1, VectorCase::Case6), (0, VectorCase::Case7)] {
        for sign in [1.0, -1.0] {
            axes.push((Vector3::ith(k, sign), case));
        }
    }
    axes.into_iter()
        .map(|(n, case)| {
            let o = 2.0 * n * n.transpose() - Matrix3::identity();
            (Rotation3::from_matrix_unchecked(o), case)
        })
        .collect()
}

/// Pass thresholds used by [`verify_suite`].
pub const ROUNDTRIP_LIMIT: f64 = 1e-9;
pub const TRACE_IDENTITY_LIMIT: f64 = 1e-10;
pub const HALF_TURN_LIMIT: f64 = 1e-10;
pub const ORACLE_DISTANCE_LIMIT: f64 = 1e-4;

/// Aggregate of the verification checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub seeds: u64,
    pub max_roundtrip_residual: f64,
    /// `max |1 + tr(adjoint(U)) - 4 a1^2|` over random unitaries
    pub max_trace_identity_error: f64,
    pub half_turns: usize,
    pub half_turn_cases_hit: usize,
    pub max_half_turn_residual: f64,
    pub oracle_rotations: usize,
    pub max_oracle_distance: f64,
    pub passed: bool,
}

/// Round trips over `seeds` random rotations, the trace identity over as many
/// random unitaries, the constructed half-turn suite, and the brute-force
/// oracle on the first `oracle_rotations` seeds.
pub fn verify_suite(seeds: u64, oracle_rotations: usize, tol: Tolerance) -> Result<VerifySummary> {
    let mut max_roundtrip = 0.0_f64;
    let mut max_trace = 0.0_f64;
    for seed in 0..seeds {
        max_roundtrip = max_roundtrip.max(roundtrip_residual(&random_rotation(seed), tol)?);
        let u = random_su2(seed ^ 0x9e37_79b9_7f4a_7c15);
        let a1 = u.matrix()[(0, 0)].re;
        let err = (1.0 + adjoint_so3(&u)?.trace() - 4.0 * a1 * a1).abs();
        max_trace = max_trace.max(err);
    }

    let suite = half_turn_suite(seeds);
    let mut max_half = 0.0_f64;
    let mut hit = std::collections::HashSet::new();
    for (o, case) in &suite {
        let r = lift(o, tol)?;
        if r.vector_case == Some(*case) {
            hit.insert(*case);
        }
        max_half = max_half.max(r.residual);
    }

    let mut max_dist = 0.0_f64;
    let oracle_rotations = oracle_rotations.min(seeds as usize);
    for seed in 0..oracle_rotations as u64 {
        let rep = oracle_check(&random_rotation(seed), BruteConfig::default(), tol)?;
        max_dist = max_dist.max(rep.quaternion_distance);
    }

    let passed = max_roundtrip < ROUNDTRIP_LIMIT
        && max_trace < TRACE_IDENTITY_LIMIT
        && max_half < HALF_TURN_LIMIT
        && hit.len() == 7
        && max_dist < ORACLE_DISTANCE_LIMIT;
    Ok(VerifySummary {
        seeds,
        max_roundtrip_residual: max_roundtrip,
        max_trace_identity_error: max_trace,
        half_turns: suite.len(),
        half_turn_cases_hit: hit.len(),
        max_half_turn_residual: max_half,
        oracle_rotations,
        max_oracle_distance: max_dist,
        passed,
    })
}
