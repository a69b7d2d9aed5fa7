//! Small dense quantum linear algebra: states, projective measurements, the
//! Born rule, two-qubit closed forms, mutually unbiased bases and Werner states.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::behavior::Behavior;
use crate::error::{BellError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const PROJECTOR_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `|v><v|`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// A bipartite density matrix on `C^{d_a} ⊗ C^{d_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralState {
    d_a: usize,
    d_b: usize,
    rho: CMatrix,
}

impl GeneralState {
    /// Checks Hermiticity, unit trace and positivity, then symmetrizes.
    pub fn new(d_a: usize, d_b: usize, rho: CMatrix) -> Result<Self> {
        let dim = d_a * d_b;
        if d_a == 0 || d_b == 0 || rho.nrows() != dim || rho.ncols() != dim {
            return Err(BellError::Dimension(format!(
                "density matrix is {}x{}, expected {dim}x{dim}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        if max_abs(&(&rho - rho.adjoint())) > HERMITIAN_TOL {
            return Err(BellError::Invalid("density matrix is not Hermitian".into()));
        }
        let rho = hermitian_part(&rho);
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(BellError::Invalid(format!(
                "density matrix has trace {trace}"
            )));
        }
        let min_eig = rho
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EIGEN_TOL {
            return Err(BellError::Invalid(format!(
                "density matrix has eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { d_a, d_b, rho })
    }

    pub fn pure(d_a: usize, d_b: usize, psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(BellError::Invalid("zero state vector".into()));
        }
        Self::new(d_a, d_b, outer(&psi.unscale(norm)))
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn to_json(&self) -> Value {
        json!({"dA": self.d_a, "dB": self.d_b, "rho": matrix_to_json(&self.rho)})
    }
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Per input, a complete set of orthogonal projectors; outcome `k` is the
/// `k`-th projector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurementSet {
    dim: usize,
    settings: Vec<Vec<CMatrix>>,
}

impl ProjectiveMeasurementSet {
    pub fn new(dim: usize, settings: Vec<Vec<CMatrix>>) -> Result<Self> {
        if settings.is_empty() {
            return Err(BellError::Invalid("measurement set has no inputs".into()));
        }
        let outcomes = settings[0].len();
        let identity = CMatrix::identity(dim, dim);
        for (x, projectors) in settings.iter().enumerate() {
            if projectors.len() != outcomes || outcomes == 0 {
                return Err(BellError::Dimension(format!(
                    "input {x} has {} outcomes, expected {outcomes}",
                    projectors.len()
                )));
            }
            let mut total = CMatrix::zeros(dim, dim);
            for (k, p) in projectors.iter().enumerate() {
                if p.nrows() != dim || p.ncols() != dim {
                    return Err(BellError::Dimension(format!(
                        "projector ({x},{k}) is {}x{}, expected {dim}x{dim}",
                        p.nrows(),
                        p.ncols()
                    )));
                }
                if max_abs(&(p * p - p)) > PROJECTOR_TOL
                    || max_abs(&(p - p.adjoint())) > PROJECTOR_TOL
                {
                    return Err(BellError::Invalid(format!(
                        "operator ({x},{k}) is not an orthogonal projector"
                    )));
                }
                total += p;
            }
            if max_abs(&(total - &identity)) > PROJECTOR_TOL {
                return Err(BellError::Invalid(format!(
                    "projectors of input {x} do not sum to the identity"
                )));
            }
        }
        Ok(Self { dim, settings })
    }

    /// One orthonormal basis per input; outcome `k` projects on vector `k`.
    pub fn from_bases(bases: &[Vec<CVector>]) -> Result<Self> {
        let dim = bases.first().and_then(|b| b.first()).map_or(0, |v| v.len());
        Self::new(
            dim,
            bases
                .iter()
                .map(|basis| basis.iter().map(outer).collect())
                .collect(),
        )
    }

    /// Two-outcome qubit measurements along Bloch directions; outcome 0 is
    /// the `+1` eigenspace of `n·σ`.
    pub fn from_bloch(settings: &[BlochSetting]) -> Result<Self> {
        Self::new(
            2,
            settings
                .iter()
                .map(|s| {
                    let n_sigma = s.pauli();
                    let id = CMatrix::identity(2, 2);
                    vec![(&id + &n_sigma).scale(0.5), (&id - &n_sigma).scale(0.5)]
                })
                .collect(),
        )
    }

    /// Rank-one projector `P` against its complement: outcome 0 is `1 - P`,
    /// outcome 1 is `P`.
    pub fn from_binary_projectors(projectors: &[CMatrix]) -> Result<Self> {
        let dim = projectors.first().map_or(0, |p| p.nrows());
        let id = CMatrix::identity(dim, dim);
        Self::new(
            dim,
            projectors
                .iter()
                .map(|p| vec![&id - p, p.clone()])
                .collect(),
        )
    }

    /// Complex-conjugate every projector.
    pub fn conjugated(&self) -> Self {
        Self {
            dim: self.dim,
            settings: self
                .settings
                .iter()
                .map(|ps| ps.iter().map(|p| p.map(|z| z.conj())).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inputs(&self) -> usize {
        self.settings.len()
    }

    pub fn outcomes(&self) -> usize {
        self.settings[0].len()
    }

    pub fn projector(&self, input: usize, outcome: usize) -> &CMatrix {
        &self.settings[input][outcome]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "projectors": self.settings.iter().map(|ps| {
                Value::Array(ps.iter().map(matrix_to_json).collect())
            }).collect::<Vec<_>>(),
        })
    }
}

/// A unit vector in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSetting([f64; 3]);

impl BlochSetting {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(BellError::Invalid(format!(
                "Bloch vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self(v))
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(BellError::Invalid("zero Bloch vector".into()));
        }
        Ok(Self(v.map(|c| c / norm)))
    }

    /// In the x-z plane, at angle `angle` from +z towards +x.
    pub fn in_xz_plane(angle: f64) -> Self {
        Self([angle.sin(), 0.0, angle.cos()])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.map(|c| -c))
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }

    /// `n_x σ_x + n_y σ_y + n_z σ_z`
    pub fn pauli(&self) -> CMatrix {
        let [x, y, z] = self.0;
        CMatrix::from_row_slice(
            2,
            2,
            &[c(z), Complex64::new(x, -y), Complex64::new(x, y), c(-z)],
        )
    }
}

/// `cos θ |00> + sin θ |11>` with `θ ∈ [0, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureTwoQubitState {
    theta: f64,
}

impl PureTwoQubitState {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4 + 1e-15).contains(&theta) {
            return Err(BellError::Invalid(format!(
                "entanglement angle {theta} outside [0, π/4]"
            )));
        }
        Ok(Self {
            theta: theta.min(FRAC_PI_4),
        })
    }

    pub fn maximally_entangled() -> Self {
        Self { theta: FRAC_PI_4 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn state_vector(&self) -> CVector {
        CVector::from_vec(vec![
            c(self.theta.cos()),
            c(0.0),
            c(0.0),
            c(self.theta.sin()),
        ])
    }
}

/// `W |ψ⁻><ψ⁻| + (1 - W) 1/4`, with `ψ⁻` the singlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerState {
    visibility: f64,
}

impl WernerState {
    pub fn new(visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(BellError::Invalid(format!(
                "Werner visibility {visibility} outside [0, 1]"
            )));
        }
        Ok(Self { visibility })
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn density(&self) -> GeneralState {
        let singlet = outer(&singlet());
        let noise = CMatrix::identity(4, 4).scale(0.25);
        let rho = singlet.scale(self.visibility) + noise.scale(1.0 - self.visibility);
        GeneralState::new(2, 2, rho).expect("Werner states are valid")
    }
}

/// `(|01> - |10>)/√2`
pub fn singlet() -> CVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_vec(vec![c(0.0), c(h), c(-h), c(0.0)])
}

/// `d^{-1/2} Σ_j |jj>`
pub fn maximally_entangled(d: usize) -> CVector {
    let mut v = CVector::zeros(d * d);
    let w = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        v[j * d + j] = c(w);
    }
    v
}

pub fn werner_density(visibility: f64) -> Result<GeneralState> {
    Ok(WernerState::new(visibility)?.density())
}

pub fn partial_state_density(theta: f64) -> Result<GeneralState> {
    GeneralState::pure(2, 2, &PureTwoQubitState::new(theta)?.state_vector())
}

/// Born rule `p(a,b|x,y) = Tr[(P^x_a ⊗ Q^y_b) ρ]`.
pub fn behavior_from_quantum(
    state: &GeneralState,
    alice: &ProjectiveMeasurementSet,
    bob: &ProjectiveMeasurementSet,
) -> Result<Behavior> {
    if alice.dim != state.d_a || bob.dim != state.d_b {
        return Err(BellError::Dimension(format!(
            "state is {}x{}, measurements act on {} and {}",
            state.d_a, state.d_b, alice.dim, bob.dim
        )));
    }
    let (n_a, n_b) = (alice.inputs(), bob.inputs());
    let (k_a, k_b) = (alice.outcomes(), bob.outcomes());
    let (da, db) = (state.d_a, state.d_b);
    let rho = &state.rho;
    // Tr[(P ⊗ Q) ρ] = Σ P_{ik} Q_{jl} ρ_{(k,l),(i,j)}
    let born = |p: &CMatrix, q: &CMatrix| -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..da {
            for k in 0..da {
                let pik = p[(i, k)];
                if pik == c(0.0) {
                    continue;
                }
                for j in 0..db {
                    for l in 0..db {
                        total += pik * q[(j, l)] * rho[(k * db + l, i * db + j)];
                    }
                }
            }
        }
        total.re
    };
    let mut probs = vec![0.0; n_a * n_b * k_a * k_b];
    for a in 0..k_a {
        for b in 0..k_b {
            for x in 0..n_a {
                for y in 0..n_b {
                    probs[((a * k_b + b) * n_a + x) * n_b + y] =
                        born(alice.projector(x, a), bob.projector(y, b));
                }
            }
        }
    }
    Behavior::new((n_a, n_b), (k_a, k_b), probs)
}

/// Correlator and marginals of `cos θ|00> + sin θ|11>` for Bloch settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitCorrelators {
    pub e: f64,
    pub a: f64,
    pub b: f64,
}

/// `E = a_z b_z + sin 2θ (a_x b_x - a_y b_y)`, `A = cos 2θ a_z`, `B = cos 2θ b_z`.
pub fn two_qubit_correlators(theta: f64, a: &BlochSetting, b: &BlochSetting) -> QubitCorrelators {
    let (s, co) = ((2.0 * theta).sin(), (2.0 * theta).cos());
    QubitCorrelators {
        e: a.z() * b.z() + s * (a.x() * b.x() - a.y() * b.y()),
        a: co * a.z(),
        b: co * b.z(),
    }
}

/// Computational basis and Fourier basis `f_k = d^{-1/2} Σ_j e^{2πi jk/d} |j>`.
pub fn mub_pair(d: usize) -> Result<(Vec<CVector>, Vec<CVector>)> {
    if d < 2 {
        return Err(BellError::Invalid(format!(
            "MUB pair needs d >= 2, got {d}"
        )));
    }
    let computational = (0..d)
        .map(|j| {
            let mut v = CVector::zeros(d);
            v[j] = c(1.0);
            v
        })
        .collect();
    let w = 1.0 / (d as f64).sqrt();
    let fourier = (0..d)
        .map(|k| {
            CVector::from_iterator(
                d,
                (0..d).map(|j| Complex64::from_polar(w, 2.0 * PI * (j * k) as f64 / d as f64)),
            )
        })
        .collect();
    Ok((computational, fourier))
}

/// Projector on the top eigenvector of `(|s1><s1| + |s2><s2|)/2`.
///
/// Orthogonal inputs leave the top eigenvalue degenerate and are rejected.
pub fn intermediate_projector(s1: &CVector, s2: &CVector) -> Result<CMatrix> {
    if s1.len() != s2.len() {
        return Err(BellError::Dimension(
            "state vectors differ in length".into(),
        ));
    }
    for s in [s1, s2] {
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(BellError::Invalid(
                "state vectors must be normalized".into(),
            ));
        }
    }
    if s1.dotc(s2).norm() < 1e-9 {
        return Err(BellError::Invalid(
            "orthogonal states have no unique intermediate state".into(),
        ));
    }
    let mix = (outer(s1) + outer(s2)).scale(0.5);
    let eig = mix.symmetric_eigen();
    let top = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    let v: CVector = eig.eigenvectors.column(top).into_owned();
    Ok(outer(&v.unscale(v.norm())))
}

/// `<s|P|s>`
pub fn expectation(p: &CMatrix, s: &CVector) -> f64 {
    s.dotc(&(p * s)).re
}
