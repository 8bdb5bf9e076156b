//! Entropic primitives: binary entropy, von Neumann entropy, conditional
//! ensembles induced by an Alice-side projective measurement, and the Holevo
//! quantity of Bob's resulting ensemble. All entropies are in bits.

use nalgebra::Matrix2;
use thiserror::Error;

use crate::mub::QubitBasis;
use crate::qstate::{DensityMatrix, QubitState, C64};

/// Slack accepted outside `[0, 1]` before `binary_entropy` rejects.
pub const DOMAIN_SLACK: f64 = 1e-12;
/// Outcomes below this probability contribute the maximally mixed state.
pub const MIN_OUTCOME_PROB: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum InfoError {
    #[error("binary entropy argument {0} is outside [0, 1]")]
    OutOfDomain(f64),
}

/// `h(x) = -x log2 x - (1-x) log2 (1-x)`, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64, InfoError> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(InfoError::OutOfDomain(x));
    }
    Ok(binary_entropy_clamped(x))
}

/// `h` after clamping to `[0, 1]`; for callers whose argument is in range
/// by construction.
pub(crate) fn binary_entropy_clamped(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `-sum lambda log2 lambda` over a spectrum, clamping each eigenvalue to
/// `[0, 1]` so tolerated negatives do not produce NaN.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| {
            let l = l.clamp(0.0, 1.0);
            if l == 0.0 {
                0.0
            } else {
                -l * l.log2()
            }
        })
        .sum()
}

pub trait VonNeumannEntropy {
    /// `S(rho) = -sum lambda log2 lambda` in bits.
    fn von_neumann_entropy(&self) -> f64;
}

impl VonNeumannEntropy for DensityMatrix {
    fn von_neumann_entropy(&self) -> f64 {
        spectrum_entropy(&self.eigenvalues())
    }
}

impl VonNeumannEntropy for QubitState {
    fn von_neumann_entropy(&self) -> f64 {
        spectrum_entropy(&self.eigenvalues())
    }
}

/// von Neumann entropy of a one- or two-qubit state.
pub fn von_neumann_entropy<T: VonNeumannEntropy>(rho: &T) -> f64 {
    rho.von_neumann_entropy()
}

/// Bob's ensemble `{(p_i, rho_i^B)}` conditioned on Alice's outcomes.
#[derive(Clone, Debug)]
pub struct ConditionalEnsemble {
    pub outcomes: Vec<(f64, QubitState)>,
}

impl ConditionalEnsemble {
    /// `sum p_i rho_i^B`.
    pub fn average_state(&self) -> QubitState {
        let mut m = Matrix2::zeros();
        for (p, state) in &self.outcomes {
            m += state.matrix() * C64::new(*p, 0.0);
        }
        QubitState::new(m).expect("convex mixture of valid states is valid")
    }
}

/// `tr_A[(P (x) I) rho]` as a 2x2 Bob-side block.
fn alice_partial(rho: &DensityMatrix, projector: &Matrix2<C64>) -> Matrix2<C64> {
    let m = rho.matrix();
    let mut out = Matrix2::zeros();
    for j in 0..2 {
        for k in 0..2 {
            out += m.fixed_view::<2, 2>(2 * k, 2 * j).into_owned() * projector[(j, k)];
        }
    }
    out
}

/// `p_i = tr <a_i| rho |a_i>` with `rho_i^B` the normalized conditional
/// state; outcomes with `p_i < MIN_OUTCOME_PROB` report the maximally mixed
/// state.
pub fn conditional_ensemble(rho: &DensityMatrix, basis: &QubitBasis) -> ConditionalEnsemble {
    let outcomes = basis
        .projectors()
        .into_iter()
        .map(|proj| {
            let block = alice_partial(rho, &proj);
            let p = block.trace().re;
            let state = if p < MIN_OUTCOME_PROB {
                QubitState::maximally_mixed()
            } else {
                QubitState::from_unnormalized(block, p)
            };
            (p, state)
        })
        .collect();
    ConditionalEnsemble { outcomes }
}

/// Holevo quantity `chi = S(sum p_i rho_i^B) - sum p_i S(rho_i^B)` of the
/// ensemble Alice's measurement induces on Bob's side.
pub fn holevo(rho: &DensityMatrix, basis: &QubitBasis) -> f64 {
    let ensemble = conditional_ensemble(rho, basis);
    let average = ensemble.average_state();
    let conditional: f64 = ensemble
        .outcomes
        .iter()
        .filter(|(p, _)| *p >= MIN_OUTCOME_PROB)
        .map(|(p, state)| p * state.von_neumann_entropy())
        .sum();
    average.von_neumann_entropy() - conditional
}
