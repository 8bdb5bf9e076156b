//! Qubit measurement bases on the Bloch sphere and mutually unbiased
//! pairs/triads.
//!
//! For qubits, two projective bases are mutually unbiased exactly when
//! their Bloch directions are orthogonal, so the sets of MUB pairs and
//! triads are parametrized by orthonormal frames. At most three mutually
//! unbiased qubit bases exist, which is why nothing larger than a triad is
//! representable here.

use nalgebra::{Matrix2, Rotation3, Vector2, Vector3};
use thiserror::Error;

use crate::qstate::{dot_sigma, C64};

/// Tolerance for unit-norm direction checks.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on `n1 . n2` for mutual unbiasedness.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MubError {
    #[error("direction vector has zero norm")]
    ZeroVector,
    #[error("basis directions are not orthogonal: |n1 . n2| = {0:.3e}")]
    NotOrthogonal(f64),
}

/// A projective qubit basis encoded by its Bloch direction.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitBasis {
    direction: Vector3<f64>,
}

impl QubitBasis {
    /// Normalizes the direction and builds the basis.
    pub fn from_direction(v: Vector3<f64>) -> Result<Self, MubError> {
        let norm = v.norm();
        if norm < UNIT_TOL {
            return Err(MubError::ZeroVector);
        }
        Ok(Self { direction: v / norm })
    }

    pub fn direction(&self) -> &Vector3<f64> {
        &self.direction
    }

    /// Projectors `(I +- n . sigma)/2` onto the two outcomes.
    pub fn projectors(&self) -> [Matrix2<C64>; 2] {
        let half_id = Matrix2::identity() * C64::new(0.5, 0.0);
        let half_ns = dot_sigma(&self.direction) * C64::new(0.5, 0.0);
        [half_id + half_ns, half_id - half_ns]
    }

    /// Eigenkets of `n . sigma`, `+1` outcome first.
    pub fn kets(&self) -> [Vector2<C64>; 2] {
        let theta = self.direction.z.clamp(-1.0, 1.0).acos();
        let phi = self.direction.y.atan2(self.direction.x);
        let (half_sin, half_cos) = (0.5 * theta).sin_cos();
        let phase = C64::new(0.0, phi).exp();
        [
            Vector2::new(C64::new(half_cos, 0.0), phase * half_sin),
            Vector2::new(C64::new(half_sin, 0.0), -phase * half_cos),
        ]
    }
}

/// Builds a basis from a (not necessarily normalized) Bloch direction.
pub fn basis_from_direction(v: Vector3<f64>) -> Result<QubitBasis, MubError> {
    QubitBasis::from_direction(v)
}

/// Overlap magnitudes `|<a_i | b_j>|` between two bases.
///
/// The pair is mutually unbiased iff all four entries equal `1/sqrt(2)`
/// within [`ORTHOGONALITY_TOL`].
pub fn unbiasedness_overlap(b1: &QubitBasis, b2: &QubitBasis) -> nalgebra::Matrix2<f64> {
    let k1 = b1.kets();
    let k2 = b2.kets();
    nalgebra::Matrix2::from_fn(|i, j| k1[i].dotc(&k2[j]).norm())
}

/// Whether all overlap magnitudes equal `1/sqrt(2)` within tolerance.
pub fn is_unbiased(b1: &QubitBasis, b2: &QubitBasis) -> bool {
    let target = std::f64::consts::FRAC_1_SQRT_2;
    unbiasedness_overlap(b1, b2)
        .iter()
        .all(|x| (x - target).abs() <= ORTHOGONALITY_TOL)
}

/// An ordered pair of mutually unbiased bases.
#[derive(Clone, Debug)]
pub struct MubPair {
    first: QubitBasis,
    second: QubitBasis,
}

impl MubPair {
    pub fn new(first: QubitBasis, second: QubitBasis) -> Result<Self, MubError> {
        let dot = first.direction().dot(second.direction()).abs();
        if dot > ORTHOGONALITY_TOL {
            return Err(MubError::NotOrthogonal(dot));
        }
        Ok(Self { first, second })
    }

    pub fn bases(&self) -> [&QubitBasis; 2] {
        [&self.first, &self.second]
    }
}

/// An ordered triad of pairwise mutually unbiased bases.
#[derive(Clone, Debug)]
pub struct MubTriad {
    bases: [QubitBasis; 3],
}

impl MubTriad {
    pub fn new(bases: [QubitBasis; 3]) -> Result<Self, MubError> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                let dot = bases[i].direction().dot(bases[j].direction()).abs();
                if dot > ORTHOGONALITY_TOL {
                    return Err(MubError::NotOrthogonal(dot));
                }
            }
        }
        Ok(Self { bases })
    }

    pub fn bases(&self) -> [&QubitBasis; 3] {
        [&self.bases[0], &self.bases[1], &self.bases[2]]
    }

    pub fn directions(&self) -> [Vector3<f64>; 3] {
        [
            *self.bases[0].direction(),
            *self.bases[1].direction(),
            *self.bases[2].direction(),
        ]
    }

    /// The MUB pair formed by the first two axes.
    pub fn pair(&self) -> MubPair {
        MubPair::new(self.bases[0].clone(), self.bases[1].clone())
            .expect("triad axes are orthogonal")
    }
}

/// ZYZ Euler rotation `R(alpha, beta, gamma) = Rz(alpha) Ry(beta) Rz(gamma)`
/// applied to column vectors.
pub fn rotation_zyz(alpha: f64, beta: f64, gamma: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), alpha)
        * Rotation3::from_axis_angle(&Vector3::y_axis(), beta)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), gamma)
}

/// Rotates the `(x, y, z)` frame by the ZYZ Euler rotation; the columns of
/// `R(alpha, beta, gamma)` become the triad directions.
pub fn frame_from_angles(alpha: f64, beta: f64, gamma: f64) -> MubTriad {
    let r = rotation_zyz(alpha, beta, gamma);
    let m = r.matrix();
    let axis = |i: usize| {
        QubitBasis::from_direction(m.column(i).into_owned())
            .expect("rotation column is a unit vector")
    };
    MubTriad::new([axis(0), axis(1), axis(2)]).expect("rotation columns are orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix2 as M2;

    #[test]
    fn z_basis_projects_onto_computational_kets() {
        let b = basis_from_direction(Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let [p_plus, p_minus] = b.projectors();
        let mut zero = M2::<f64>::zeros();
        zero[(0, 0)] = 1.0;
        assert!(p_plus.iter().zip(zero.iter()).all(|(z, w)| (z.re - w).abs() < 1e-15
            && z.im.abs() < 1e-15));
        assert_abs_diff_eq!(p_minus[(1, 1)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn x_basis_projects_onto_plus_minus() {
        let b = basis_from_direction(Vector3::new(1.0, 0.0, 0.0)).unwrap();
        let [p_plus, _] = b.projectors();
        for (i, j, want) in [(0, 0, 0.5), (0, 1, 0.5), (1, 0, 0.5), (1, 1, 0.5)] {
            assert_abs_diff_eq!(p_plus[(i, j)].re, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn direction_is_normalized() {
        let b1 = basis_from_direction(Vector3::new(0.0, 0.0, 2.0)).unwrap();
        let b2 = basis_from_direction(Vector3::new(0.0, 0.0, 1.0)).unwrap();
        assert!((b1.direction() - b2.direction()).norm() < 1e-15);
        assert!(matches!(
            basis_from_direction(Vector3::zeros()),
            Err(MubError::ZeroVector)
        ));
    }

    #[test]
    fn projector_identities() {
        let b = basis_from_direction(Vector3::new(0.3, -0.8, 0.52)).unwrap();
        let [p, q] = b.projectors();
        assert!(((p + q) - M2::identity()).norm() < 1e-12);
        assert!((p * p - p).norm() < 1e-12);
        assert!((q * q - q).norm() < 1e-12);
    }

    #[test]
    fn overlap_canonical_mub_pair() {
        let z = basis_from_direction(Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let x = basis_from_direction(Vector3::new(1.0, 0.0, 0.0)).unwrap();
        let ov = unbiasedness_overlap(&z, &x);
        for v in ov.iter() {
            assert_abs_diff_eq!(*v, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        }
        assert!(is_unbiased(&z, &x));
    }

    #[test]
    fn overlap_identical_bases() {
        let z = basis_from_direction(Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let ov = unbiasedness_overlap(&z, &z);
        assert_abs_diff_eq!(ov[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ov[(1, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ov[(0, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ov[(1, 0)], 0.0, epsilon = 1e-12);
        assert!(!is_unbiased(&z, &z));
    }

    #[test]
    fn overlap_tilted_basis_half_angles() {
        let z = basis_from_direction(Vector3::new(0.0, 0.0, 1.0)).unwrap();
        for theta in [0.3f64, 1.1, 2.5] {
            let n = Vector3::new(theta.sin(), 0.0, theta.cos());
            let b = basis_from_direction(n).unwrap();
            let ov = unbiasedness_overlap(&z, &b);
            assert_abs_diff_eq!(ov[(0, 0)], (theta / 2.0).cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(ov[(0, 1)], (theta / 2.0).sin(), epsilon = 1e-12);
            assert_abs_diff_eq!(ov[(1, 0)], (theta / 2.0).sin(), epsilon = 1e-12);
            assert_abs_diff_eq!(ov[(1, 1)], (theta / 2.0).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_frame_is_xyz() {
        let triad = frame_from_angles(0.0, 0.0, 0.0);
        let dirs = triad.directions();
        assert!((dirs[0] - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-14);
        assert!((dirs[1] - Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-14);
        assert!((dirs[2] - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn quarter_turn_about_y_sends_x_to_minus_z() {
        let triad = frame_from_angles(0.0, std::f64::consts::FRAC_PI_2, 0.0);
        let dirs = triad.directions();
        assert!((dirs[0] - Vector3::new(0.0, 0.0, -1.0)).norm() < 1e-14);
        // orthonormality
        for i in 0..3 {
            assert_abs_diff_eq!(dirs[i].norm(), 1.0, epsilon = 1e-14);
            for j in (i + 1)..3 {
                assert!(dirs[i].dot(&dirs[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pair_requires_orthogonality() {
        let z = basis_from_direction(Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let tilted = basis_from_direction(Vector3::new(0.1, 0.0, 1.0)).unwrap();
        assert!(matches!(
            MubPair::new(z.clone(), tilted),
            Err(MubError::NotOrthogonal(_))
        ));
        let x = basis_from_direction(Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(MubPair::new(z, x).is_ok());
    }
}
