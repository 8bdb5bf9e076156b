//! CJWR linear steering functionals and the normalized steering measures
//! built on their maximal violation.
//!
//! `F_n(rho, mu) = |sum_k <A_k (x) B_k>| / sqrt(n)` for `n` dichotomic
//! settings per side. The maximization runs over arbitrary unit directions
//! for Alice and over orthonormal direction sets for Bob; the inequality
//! bound `F_n <= 1` (and with it the closed forms `F2 = sqrt(c^2 - c_min^2)`
//! and `F3 = c`) holds for that family of settings. The measure
//! `S_n = max{0, (F_n - 1)/(F_n^max - 1)}` normalizes the violation to
//! `[0, 1]` with the maximum attained on Bell states.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::mub::frame_from_angles;
use crate::optim::{
    multi_start_maximize, sample_euler_angles, sample_sphere_angles, unit_from_angles,
    MultiStartConfig, OptimError,
};
use crate::qstate::{bloch_decompose, CorrelationVector, DensityMatrix};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;
/// Largest two-setting value over all states, attained on Bell states.
pub const F2_MAX: f64 = std::f64::consts::SQRT_2;
/// Largest three-setting value over all states, attained on Bell states.
pub const F3_MAX: f64 = SQRT_3;

/// Number of random restarts for `cjwr_maximize`.
pub const CJWR_RESTARTS: usize = 32;

#[derive(Debug, Error)]
pub enum SteeringError {
    #[error("expected {expected} direction pairs, got {got}")]
    WrongSettingCount { expected: usize, got: usize },
    #[error("measurement direction has zero norm")]
    ZeroVector,
    #[error(transparent)]
    Convergence(#[from] OptimError),
}

/// Number of settings in the CJWR functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SettingCount {
    Two,
    Three,
}

impl SettingCount {
    pub fn count(self) -> usize {
        match self {
            SettingCount::Two => 2,
            SettingCount::Three => 3,
        }
    }

    pub fn f_max(self) -> f64 {
        match self {
            SettingCount::Two => F2_MAX,
            SettingCount::Three => F3_MAX,
        }
    }
}

/// `n` pairs of unit directions `(a_k, b_k)` defining dichotomic
/// observables `a_k . sigma` and `b_k . sigma`.
#[derive(Clone, Debug)]
pub struct MeasurementSettings {
    n: SettingCount,
    alice: Vec<Vector3<f64>>,
    bob: Vec<Vector3<f64>>,
}

impl MeasurementSettings {
    /// Normalizes all directions; rejects zero vectors and count mismatches.
    pub fn new(
        n: SettingCount,
        alice: Vec<Vector3<f64>>,
        bob: Vec<Vector3<f64>>,
    ) -> Result<Self, SteeringError> {
        let expected = n.count();
        for dirs in [&alice, &bob] {
            if dirs.len() != expected {
                return Err(SteeringError::WrongSettingCount {
                    expected,
                    got: dirs.len(),
                });
            }
        }
        let normalize = |dirs: Vec<Vector3<f64>>| -> Result<Vec<Vector3<f64>>, SteeringError> {
            dirs.into_iter()
                .map(|v| {
                    let norm = v.norm();
                    if norm < 1e-12 {
                        Err(SteeringError::ZeroVector)
                    } else {
                        Ok(v / norm)
                    }
                })
                .collect()
        };
        Ok(Self {
            n,
            alice: normalize(alice)?,
            bob: normalize(bob)?,
        })
    }

    pub fn setting_count(&self) -> SettingCount {
        self.n
    }

    pub fn alice_directions(&self) -> &[Vector3<f64>] {
        &self.alice
    }

    pub fn bob_directions(&self) -> &[Vector3<f64>] {
        &self.bob
    }
}

/// CJWR functional value for explicit settings:
/// `(1/sqrt(n)) |sum_k tr(rho (a_k.sigma (x) b_k.sigma))|`, evaluated
/// through the correlation matrix as `(1/sqrt(n)) |sum_k a_k^T T b_k|`.
pub fn cjwr_value(rho: &DensityMatrix, settings: &MeasurementSettings) -> f64 {
    cjwr_value_with_t(&bloch_decompose(rho).t, settings)
}

/// Same as [`cjwr_value`] given a precomputed correlation matrix.
pub fn cjwr_value_with_t(t: &Matrix3<f64>, settings: &MeasurementSettings) -> f64 {
    let sum: f64 = settings
        .alice
        .iter()
        .zip(settings.bob.iter())
        .map(|(a, b)| a.dot(&(t * b)))
        .sum();
    sum.abs() / (settings.n.count() as f64).sqrt()
}

/// Outcome of a steering evaluation.
#[derive(Clone, Debug)]
pub struct SteeringReport {
    pub f_value: f64,
    pub s_value: f64,
    pub n: SettingCount,
    /// Present only when a numeric maximization produced the value.
    pub optimal_settings: Option<MeasurementSettings>,
}

impl SteeringReport {
    /// Report for a functional value obtained without optimization.
    pub fn from_f(f_value: f64, n: SettingCount) -> Self {
        Self {
            f_value,
            s_value: steering_measure(f_value, n),
            n,
            optimal_settings: None,
        }
    }
}

/// `S_n = max{0, (F - 1)/(F_n^max - 1)}`.
pub fn steering_measure(f: f64, n: SettingCount) -> f64 {
    ((f - 1.0) / (n.f_max() - 1.0)).max(0.0)
}

/// Two-setting closed form `F2 = sqrt(c^2 - c_min^2)`.
pub fn f2_closed(c: &CorrelationVector) -> f64 {
    let arg = c.norm_squared() - c.c_min() * c.c_min();
    arg.max(0.0).sqrt()
}

/// Three-setting closed form `F3 = c`.
pub fn f3_closed(c: &CorrelationVector) -> f64 {
    c.norm()
}

fn settings_from_params(n: SettingCount, params: &[f64]) -> MeasurementSettings {
    let k = n.count();
    let frame = frame_from_angles(params[0], params[1], params[2]);
    let bob: Vec<Vector3<f64>> = frame.directions().into_iter().take(k).collect();
    let alice: Vec<Vector3<f64>> = (0..k)
        .map(|i| unit_from_angles(params[3 + 2 * i], params[4 + 2 * i]))
        .collect();
    MeasurementSettings::new(n, alice, bob).expect("parametrized directions are unit vectors")
}

/// Maximizes the CJWR functional over measurement settings by multi-start
/// Nelder-Mead: three Euler angles for Bob's orthonormal directions plus two
/// spherical angles per Alice direction.
pub fn cjwr_maximize(
    rho: &DensityMatrix,
    n: SettingCount,
    seed: u64,
) -> Result<SteeringReport, SteeringError> {
    let t = bloch_decompose(rho).t;
    let k = n.count();
    let objective = |params: &[f64]| cjwr_value_with_t(&t, &settings_from_params(n, params));
    let mut sampler = |rng: &mut rand_chacha::ChaCha8Rng| {
        let (alpha, beta, gamma) = sample_euler_angles(rng);
        let mut params = vec![alpha, beta, gamma];
        for _ in 0..k {
            let (theta, phi) = sample_sphere_angles(rng);
            params.push(theta);
            params.push(phi);
        }
        params
    };
    let cfg = MultiStartConfig::with_restarts(CJWR_RESTARTS);
    let max = multi_start_maximize(&objective, &mut sampler, seed, &cfg)?;
    Ok(SteeringReport {
        f_value: max.value,
        s_value: steering_measure(max.value, n),
        n,
        optimal_settings: Some(settings_from_params(n, &max.point)),
    })
}
