//! Two-qubit density matrices: validation, Bloch/Pauli decomposition, the
//! Bell-diagonal family, and the local-unitary canonical form.
//!
//! Matrices live in the computational product basis `|00>, |01>, |10>, |11>`
//! with the first factor belonging to Alice.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex<f64>;

/// Entrywise tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance for `|tr(M) - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_TOL` are accepted as nonnegative.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian: max |M - M^dag| entry = {0:.3e}")]
    NotHermitian(f64),
    #[error("matrix trace is not one: |tr(M) - 1| = {0:.3e}")]
    TraceNotOne(f64),
    #[error("matrix is not positive semidefinite: smallest eigenvalue = {0:.3e}")]
    NotPositiveSemidefinite(f64),
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("cannot parse state input: {0}")]
    Parse(String),
}

fn re(z: C64) -> f64 {
    z.re
}

/// Pauli matrices `(sigma_x, sigma_y, sigma_z)`.
pub fn paulis() -> [Matrix2<C64>; 3] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// `n . sigma` for a real direction vector.
pub fn dot_sigma(n: &Vector3<f64>) -> Matrix2<C64> {
    let [sx, sy, sz] = paulis();
    sx * C64::new(n.x, 0.0) + sy * C64::new(n.y, 0.0) + sz * C64::new(n.z, 0.0)
}

fn hermiticity_defect(m: &Matrix4<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// A validated two-qubit density matrix (Hermitian, unit trace, PSD).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: Matrix4<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness.
    pub fn new(m: Matrix4<C64>) -> Result<Self, StateError> {
        let herm = hermiticity_defect(&m);
        if herm > HERMITICITY_TOL {
            return Err(StateError::NotHermitian(herm));
        }
        let tr = m.trace();
        let tr_defect = (tr - C64::new(1.0, 0.0)).norm();
        if tr_defect > TRACE_TOL {
            return Err(StateError::TraceNotOne(tr_defect));
        }
        let state = Self { m };
        let min_eig = state
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(StateError::NotPositiveSemidefinite(min_eig));
        }
        Ok(state)
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    /// Real eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let eig = nalgebra::linalg::SymmetricEigen::new(self.m);
        let mut vals = [0.0f64; 4];
        for (slot, v) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
            *slot = *v;
        }
        vals.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
        vals
    }

    /// Bob's reduced state `tr_A(rho)`.
    pub fn bob_marginal(&self) -> QubitState {
        let mut out = Matrix2::zeros();
        for j in 0..2 {
            out += self.m.fixed_view::<2, 2>(2 * j, 2 * j).into_owned();
        }
        QubitState::new(out).expect("partial trace of a valid state is a valid state")
    }

    /// `(U_A (x) U_B) rho (U_A (x) U_B)^dag`. Intended for unitary `U_A`, `U_B`.
    pub fn apply_local_unitaries(
        &self,
        u_a: &Matrix2<C64>,
        u_b: &Matrix2<C64>,
    ) -> Result<Self, StateError> {
        let u = u_a.kronecker(u_b);
        Self::new(u * self.m * u.adjoint())
    }
}

/// Validates a raw 4x4 complex matrix as a two-qubit density matrix.
pub fn validate_density_matrix(m: Matrix4<C64>) -> Result<DensityMatrix, StateError> {
    DensityMatrix::new(m)
}

/// A validated single-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    m: Matrix2<C64>,
}

impl QubitState {
    pub fn new(m: Matrix2<C64>) -> Result<Self, StateError> {
        let mut herm = (m[(0, 0)].im).abs().max(m[(1, 1)].im.abs());
        herm = herm.max((m[(0, 1)] - m[(1, 0)].conj()).norm());
        if herm > HERMITICITY_TOL {
            return Err(StateError::NotHermitian(herm));
        }
        let tr_defect = (m.trace() - C64::new(1.0, 0.0)).norm();
        if tr_defect > TRACE_TOL {
            return Err(StateError::TraceNotOne(tr_defect));
        }
        let state = Self { m };
        let min_eig = state.eigenvalues()[1];
        if min_eig < -PSD_TOL {
            return Err(StateError::NotPositiveSemidefinite(min_eig));
        }
        Ok(state)
    }

    /// Normalizes an unnormalized conditional block: symmetrizes away
    /// round-off and divides by the trace. `weight` must be positive.
    pub(crate) fn from_unnormalized(m: Matrix2<C64>, weight: f64) -> Self {
        let sym = (m + m.adjoint()) * C64::new(0.5 / weight, 0.0);
        Self { m: sym }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Matrix2::identity() * C64::new(0.5, 0.0),
        }
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.m
    }

    /// Eigenvalues `(t/2 +- sqrt((d/2)^2 + |q|^2))`, descending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half_tr = 0.5 * re(self.m[(0, 0)] + self.m[(1, 1)]);
        let half_diff = 0.5 * re(self.m[(0, 0)] - self.m[(1, 1)]);
        let radius = (half_diff * half_diff + self.m[(0, 1)].norm_sqr()).sqrt();
        [half_tr + radius, half_tr - radius]
    }

    /// Bloch vector `r` with `rho = (I + r . sigma)/2`.
    pub fn bloch_vector(&self) -> Vector3<f64> {
        Vector3::new(
            2.0 * self.m[(1, 0)].re,
            -2.0 * self.m[(1, 0)].im,
            re(self.m[(0, 0)] - self.m[(1, 1)]),
        )
    }
}

/// Local Bloch vectors and the 3x3 correlation matrix
/// `T_ij = tr(rho sigma_i (x) sigma_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochRepresentation {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl BlochRepresentation {
    /// Reassembles `rho = (I(x)I + a.sigma(x)I + I(x)b.sigma + sum_ij T_ij
    /// sigma_i(x)sigma_j)/4`.
    pub fn assemble(&self) -> Matrix4<C64> {
        let id2: Matrix2<C64> = Matrix2::identity();
        let sig = paulis();
        let mut m = Matrix4::<C64>::identity();
        m += dot_sigma(&self.a).kronecker(&id2);
        m += id2.kronecker(&dot_sigma(&self.b));
        for i in 0..3 {
            for j in 0..3 {
                m += sig[i].kronecker(&sig[j]) * C64::new(self.t[(i, j)], 0.0);
            }
        }
        m * C64::new(0.25, 0.0)
    }
}

/// Extracts `a_i = tr(rho sigma_i(x)I)`, `b_j = tr(rho I(x)sigma_j)`,
/// `T_ij = tr(rho sigma_i(x)sigma_j)`.
pub fn bloch_decompose(rho: &DensityMatrix) -> BlochRepresentation {
    let id2: Matrix2<C64> = Matrix2::identity();
    let sig = paulis();
    let m = rho.matrix();
    let mut a = Vector3::zeros();
    let mut b = Vector3::zeros();
    let mut t = Matrix3::zeros();
    for i in 0..3 {
        a[i] = re((m * sig[i].kronecker(&id2)).trace());
        b[i] = re((m * id2.kronecker(&sig[i])).trace());
        for j in 0..3 {
            t[(i, j)] = re((m * sig[i].kronecker(&sig[j])).trace());
        }
    }
    BlochRepresentation { a, b, t }
}

/// Correlation triple of the canonical / Bell-diagonal form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CorrelationVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn norm_squared(&self) -> f64 {
        self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3
    }

    /// `c = sqrt(c1^2 + c2^2 + c3^2)`.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `c_min = min(|c1|, |c2|, |c3|)`.
    pub fn c_min(&self) -> f64 {
        self.c1.abs().min(self.c2.abs()).min(self.c3.abs())
    }

    /// Closed-form eigenvalues of the Bell-diagonal state with this vector,
    /// in the Bell-basis order `(Psi-, Phi-, Phi+, Psi+)`.
    pub fn bell_eigenvalues(&self) -> [f64; 4] {
        [
            (1.0 - self.c1 - self.c2 - self.c3) / 4.0,
            (1.0 - self.c1 + self.c2 + self.c3) / 4.0,
            (1.0 + self.c1 - self.c2 + self.c3) / 4.0,
            (1.0 + self.c1 + self.c2 - self.c3) / 4.0,
        ]
    }

    pub fn min_bell_eigenvalue(&self) -> f64 {
        self.bell_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the vector lies in the Bell-diagonal tetrahedron
    /// (all four eigenvalues `>= -PSD_TOL`).
    pub fn is_bell_diagonal_admissible(&self) -> bool {
        self.min_bell_eigenvalue() >= -PSD_TOL
    }
}

/// `rho = (I(x)I + sum_i c_i sigma_i(x)sigma_i)/4`.
///
/// Fails with `NotPositiveSemidefinite` when `c` is outside the tetrahedron.
pub fn bell_diagonal_from_c(c: &CorrelationVector) -> Result<DensityMatrix, StateError> {
    let sig = paulis();
    let mut m = Matrix4::<C64>::identity();
    for (i, ci) in c.components().into_iter().enumerate() {
        m += sig[i].kronecker(&sig[i]) * C64::new(ci, 0.0);
    }
    DensityMatrix::new(m * C64::new(0.25, 0.0))
}

/// Werner state `p |psi-><psi-| + (1-p) I/4`; correlation vector `(-p,-p,-p)`.
pub fn werner(p: f64) -> Result<DensityMatrix, StateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StateError::OutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    bell_diagonal_from_c(&CorrelationVector::new(-p, -p, -p))
}

/// Parameters of the locally rotated state in which `T` is diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub c: CorrelationVector,
}

/// Reduces a state to canonical form via the SVD `T = O1 diag(c) O2^T` with
/// `O1, O2` proper rotations.
///
/// Convention: singular values sorted descending; any reflection is absorbed
/// by negating the smallest-magnitude component. The multiset
/// `{|c1|, |c2|, |c3|}` is a local-unitary invariant.
pub fn canonical_form(rho: &DensityMatrix) -> CanonicalForm {
    let bloch = bloch_decompose(rho);
    let svd = bloch.t.svd(true, true);
    let u = svd.u.expect("svd of a 3x3 real matrix yields u");
    let v = svd.v_t.expect("svd of a 3x3 real matrix yields v_t").transpose();
    let s = svd.singular_values;
    let det_u = u.determinant().signum();
    let det_v = v.determinant().signum();
    let flip = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, det_u));
    let flip_v = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, det_v));
    let o1 = u * flip;
    let o2 = v * flip_v;
    CanonicalForm {
        a: o1.transpose() * bloch.a,
        b: o2.transpose() * bloch.b,
        c: CorrelationVector::new(s[0], s[1], det_u * det_v * s[2]),
    }
}

/// Uniform sample from the Bell-diagonal tetrahedron by rejection from the
/// cube `[-1, 1]^3` (acceptance ~ 1/3).
pub fn sample_tetrahedron<R: rand::Rng>(rng: &mut R) -> CorrelationVector {
    loop {
        let c = CorrelationVector::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        if c.min_bell_eigenvalue() >= 0.0 {
            return c;
        }
    }
}

/// State input read from JSON: either a full matrix
/// `{"matrix": [[[re,im], ...], ...]}` or the Bell-diagonal shorthand
/// `{"c": [c1, c2, c3]}`.
#[derive(Clone, Debug)]
pub enum StateInput {
    Matrix(Box<DensityMatrix>),
    Correlation(CorrelationVector),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateInputRepr {
    Matrix { matrix: Box<[[[f64; 2]; 4]; 4]> },
    Correlation { c: [f64; 3] },
}

pub fn parse_state_json(text: &str) -> Result<StateInput, StateError> {
    let repr: StateInputRepr =
        serde_json::from_str(text).map_err(|e| StateError::Parse(e.to_string()))?;
    match repr {
        StateInputRepr::Matrix { matrix } => {
            let m = Matrix4::from_fn(|i, j| C64::new(matrix[i][j][0], matrix[i][j][1]));
            Ok(StateInput::Matrix(Box::new(DensityMatrix::new(m)?)))
        }
        StateInputRepr::Correlation { c } => {
            Ok(StateInput::Correlation(CorrelationVector::new(c[0], c[1], c[2])))
        }
    }
}
