//! Simultaneous-correlation measures over mutually unbiased bases:
//! `C1` (best single basis), `C2` (best MUB pair), `C3` (best MUB triad).
//!
//! Each measure maximizes the minimum Holevo quantity across the basis set.
//! The numeric routes accept arbitrary two-qubit states; the closed forms
//! are specific to Bell-diagonal states and refuse inadmissible correlation
//! vectors.

use nalgebra::Vector3;
use thiserror::Error;

use crate::infotheory::{binary_entropy_clamped, holevo};
use crate::mub::{basis_from_direction, frame_from_angles};
use crate::optim::{
    multi_start_maximize, sample_euler_angles, sample_sphere_angles, unit_from_angles,
    MultiStartConfig, OptimError,
};
use crate::qstate::{CorrelationVector, DensityMatrix};
use crate::steering::SQRT_3;

/// Restarts for the single-basis (2-angle) maximization.
pub const C1_RESTARTS: usize = 32;
/// Restarts for the frame (3-angle) maximizations, whose min-of-Holevo
/// objective is only piecewise smooth.
pub const FRAME_RESTARTS: usize = 64;

#[derive(Debug, Error)]
pub enum ScmubError {
    #[error("correlation vector is not Bell-diagonal admissible: smallest eigenvalue = {0:.3e}")]
    NotAdmissible(f64),
    #[error("square-root argument {0:.3e} is negative")]
    Domain(f64),
    #[error(transparent)]
    Convergence(#[from] OptimError),
}

/// Where the optimizer found the maximum.
#[derive(Clone, Debug)]
pub enum OptimizerChoice {
    /// Best single Alice direction (for `C1`).
    Direction(Vector3<f64>),
    /// Euler angles of the best frame (for `C2`/`C3`).
    FrameAngles { alpha: f64, beta: f64, gamma: f64 },
}

/// Result of a numeric SCMUB maximization.
#[derive(Clone, Debug)]
pub struct ScmubReport {
    /// `min` of the per-basis Holevo quantities at the optimum, in bits.
    pub value: f64,
    pub choice: OptimizerChoice,
    pub per_basis_holevo: Vec<f64>,
}

/// `C1`: Holevo quantity maximized over all Alice directions.
pub fn c1_numeric(rho: &DensityMatrix, seed: u64) -> Result<ScmubReport, ScmubError> {
    let objective = |params: &[f64]| {
        let basis = basis_from_direction(unit_from_angles(params[0], params[1]))
            .expect("spherical angles give a unit vector");
        holevo(rho, &basis)
    };
    let mut sampler = |rng: &mut rand_chacha::ChaCha8Rng| {
        let (theta, phi) = sample_sphere_angles(rng);
        vec![theta, phi]
    };
    let cfg = MultiStartConfig::with_restarts(C1_RESTARTS);
    let max = multi_start_maximize(&objective, &mut sampler, seed, &cfg)?;
    let direction = unit_from_angles(max.point[0], max.point[1]);
    Ok(ScmubReport {
        value: max.value,
        choice: OptimizerChoice::Direction(direction),
        per_basis_holevo: vec![max.value],
    })
}

fn min_holevo_over_frame(rho: &DensityMatrix, params: &[f64], axes: usize) -> Vec<f64> {
    let frame = frame_from_angles(params[0], params[1], params[2]);
    frame
        .bases()
        .into_iter()
        .take(axes)
        .map(|basis| holevo(rho, basis))
        .collect()
}

fn frame_maximize(
    rho: &DensityMatrix,
    axes: usize,
    seed: u64,
) -> Result<ScmubReport, ScmubError> {
    let objective = |params: &[f64]| {
        min_holevo_over_frame(rho, params, axes)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    };
    let mut sampler = |rng: &mut rand_chacha::ChaCha8Rng| {
        let (alpha, beta, gamma) = sample_euler_angles(rng);
        vec![alpha, beta, gamma]
    };
    let cfg = MultiStartConfig::with_restarts(FRAME_RESTARTS);
    let max = multi_start_maximize(&objective, &mut sampler, seed, &cfg)?;
    let per_basis = min_holevo_over_frame(rho, &max.point, axes);
    Ok(ScmubReport {
        value: max.value,
        choice: OptimizerChoice::FrameAngles {
            alpha: max.point[0],
            beta: max.point[1],
            gamma: max.point[2],
        },
        per_basis_holevo: per_basis,
    })
}

/// `C2`: max over MUB pairs (first two axes of a frame) of the smaller
/// Holevo quantity.
pub fn c2_numeric(rho: &DensityMatrix, seed: u64) -> Result<ScmubReport, ScmubError> {
    frame_maximize(rho, 2, seed)
}

/// `C3`: max over MUB triads of the smallest Holevo quantity.
pub fn c3_numeric(rho: &DensityMatrix, seed: u64) -> Result<ScmubReport, ScmubError> {
    frame_maximize(rho, 3, seed)
}

fn require_admissible(c: &CorrelationVector) -> Result<(), ScmubError> {
    if !c.is_bell_diagonal_admissible() {
        return Err(ScmubError::NotAdmissible(c.min_bell_eigenvalue()));
    }
    Ok(())
}

/// Bell-diagonal closed form
/// `C2 = 1 - h((1 + sqrt((c^2 - c_min^2)/2))/2)`.
pub fn c2_closed(c: &CorrelationVector) -> Result<f64, ScmubError> {
    require_admissible(c)?;
    let arg = (c.norm_squared() - c.c_min() * c.c_min()) / 2.0;
    if arg < -1e-12 {
        return Err(ScmubError::Domain(arg));
    }
    Ok(1.0 - binary_entropy_clamped((1.0 + arg.max(0.0).sqrt()) / 2.0))
}

/// Bell-diagonal closed form `C3 = 1 - h((1 + c/sqrt(3))/2)`.
pub fn c3_closed(c: &CorrelationVector) -> Result<f64, ScmubError> {
    require_admissible(c)?;
    Ok(1.0 - binary_entropy_clamped((1.0 + c.norm() / SQRT_3) / 2.0))
}
