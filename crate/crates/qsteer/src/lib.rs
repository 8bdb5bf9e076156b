//! Steering measures and simultaneous correlations in mutually unbiased
//! bases (MUBs) for two-qubit states.
//!
//! The crate has two layers:
//!
//! - closed-form expressions valid on the Bell-diagonal family, written in
//!   terms of the correlation vector `c = (c1, c2, c3)`: the steering
//!   functionals `F2 = sqrt(c^2 - c_min^2)` and `F3 = |c|`, the normalized
//!   steering measures `S2`/`S3`, and the MUB correlation measures
//!   `C2`/`C3` built from the binary entropy;
//! - numeric maximizations that work for arbitrary two-qubit states: the
//!   CJWR functional over measurement settings ([`steering::cjwr_maximize`])
//!   and min-of-Holevo objectives over single bases, MUB pairs, and MUB
//!   triads ([`scmub`]).
//!
//! The numeric and closed-form routes are deliberately independent so that
//! each can serve as an oracle for the other; [`verify`] ties them together
//! and checks the analytic `C2(F2)`/`C3(F3)` relations and their
//! monotonicity.

pub mod infotheory;
pub mod mub;
pub mod optim;
pub mod qstate;
pub mod scmub;
pub mod steering;
pub mod verify;
