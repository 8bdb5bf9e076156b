//! Multi-start Nelder-Mead search used by the steering and SCMUB
//! maximizations.
//!
//! All objectives here are smooth or piecewise-smooth functions of a handful
//! of angles, so a simplex refinement of random restarts is enough. Every
//! run is driven by an explicit seed; restart start points are drawn up
//! front from one stream, so results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Maximum gap allowed between the two best restart values before the
/// search is reported as unconverged.
pub const RESTART_AGREEMENT_TOL: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum OptimError {
    #[error(
        "restarts disagree at the optimum: top-two spread {spread:.3e} exceeds {tolerance:.1e}"
    )]
    ConvergenceFailure { spread: f64, tolerance: f64 },
}

#[derive(Clone, Debug)]
pub struct NelderMeadConfig {
    pub max_iter: usize,
    /// Convergence threshold on the simplex value spread.
    pub f_tol: f64,
    /// Convergence threshold on the simplex diameter.
    pub x_tol: f64,
    /// Initial simplex edge length (radians for angle parameters).
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_iter: 4000,
            f_tol: 1e-12,
            x_tol: 1e-10,
            initial_step: 0.4,
        }
    }
}

/// Classic Nelder-Mead minimization (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Returns the best vertex and its value.
pub fn nelder_mead_min<F>(f: &F, x0: &[f64], cfg: &NelderMeadConfig) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += cfg.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..cfg.max_iter {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let f_spread = values[dim] - values[0];
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(simplex[0].iter()).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if f_spread <= cfg.f_tol && x_spread <= cfg.x_tol {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v.iter()) {
                *c += x / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(worst.iter())
            .map(|(c, w)| c + (c - w))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(worst.iter())
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[dim] = expand;
                values[dim] = f_expand;
            } else {
                simplex[dim] = reflect;
                values[dim] = f_reflect;
            }
        } else if f_reflect < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = f_reflect;
        } else {
            let (contract, f_contract) = if f_reflect < values[dim] {
                let outside: Vec<f64> = centroid
                    .iter()
                    .zip(reflect.iter())
                    .map(|(c, r)| c + 0.5 * (r - c))
                    .collect();
                let fv = f(&outside);
                (outside, fv)
            } else {
                let inside: Vec<f64> = centroid
                    .iter()
                    .zip(worst.iter())
                    .map(|(c, w)| c + 0.5 * (w - c))
                    .collect();
                let fv = f(&inside);
                (inside, fv)
            };
            if f_contract < f_reflect.min(values[dim]) {
                simplex[dim] = contract;
                values[dim] = f_contract;
            } else {
                for i in 1..=dim {
                    let shrunk: Vec<f64> = simplex[0]
                        .iter()
                        .zip(simplex[i].iter())
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    values[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite objective"))
        .map(|(i, _)| i)
        .unwrap_or(0);
    (simplex[best].clone(), values[best])
}

#[derive(Clone, Debug)]
pub struct MultiStartConfig {
    pub restarts: usize,
    pub agreement_tol: f64,
    pub nm: NelderMeadConfig,
}

impl MultiStartConfig {
    pub fn with_restarts(restarts: usize) -> Self {
        Self {
            restarts,
            agreement_tol: RESTART_AGREEMENT_TOL,
            nm: NelderMeadConfig::default(),
        }
    }
}

/// Result of a multi-start maximization.
#[derive(Clone, Debug)]
pub struct Maximum {
    pub point: Vec<f64>,
    pub value: f64,
    /// Gap between the best and second-best restart values.
    pub restart_spread: f64,
}

/// Maximizes `f` from `cfg.restarts` random start points, each refined by
/// Nelder-Mead and then polished from its endpoint with a smaller simplex.
///
/// Fails with `ConvergenceFailure` when the best value is not reproduced by
/// any other restart within `cfg.agreement_tol`.
pub fn multi_start_maximize<F, S>(
    f: &F,
    sample_start: &mut S,
    seed: u64,
    cfg: &MultiStartConfig,
) -> Result<Maximum, OptimError>
where
    F: Fn(&[f64]) -> f64,
    S: FnMut(&mut ChaCha8Rng) -> Vec<f64>,
{
    assert!(cfg.restarts >= 2, "agreement check needs at least 2 restarts");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..cfg.restarts).map(|_| sample_start(&mut rng)).collect();

    let neg = |x: &[f64]| -f(x);
    let mut polish_cfg = cfg.nm.clone();
    polish_cfg.initial_step = cfg.nm.initial_step * 0.05;

    let mut results: Vec<(Vec<f64>, f64)> = starts
        .into_iter()
        .map(|x0| {
            let (x1, _) = nelder_mead_min(&neg, &x0, &cfg.nm);
            let (x2, v2) = nelder_mead_min(&neg, &x1, &polish_cfg);
            (x2, -v2)
        })
        .collect();
    results.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite objective"));

    let spread = results[0].1 - results[1].1;
    if spread > cfg.agreement_tol {
        return Err(OptimError::ConvergenceFailure {
            spread,
            tolerance: cfg.agreement_tol,
        });
    }
    let (point, value) = results.swap_remove(0);
    Ok(Maximum {
        point,
        value,
        restart_spread: spread,
    })
}

/// Uniform point on the sphere as `(theta, phi)` angles.
pub fn sample_sphere_angles(rng: &mut ChaCha8Rng) -> (f64, f64) {
    use rand::Rng;
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    (theta, phi)
}

/// Euler angles `(alpha, beta, gamma)` of a roughly uniform random frame.
pub fn sample_euler_angles(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    use rand::Rng;
    let alpha = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    let beta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let gamma = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    (alpha, beta, gamma)
}

/// Unit vector from spherical angles.
pub fn unit_from_angles(theta: f64, phi: f64) -> nalgebra::Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    nalgebra::Vector3::new(st * cp, st * sp, ct)
}
