//! Initial states: generalized W and GHZ states, the environment qubit, and
//! their density matrices.
//!
//! Basis convention: the first label is the most significant bit of the basis
//! index, so for labels `A, B, C` the amplitude of |abc> lives at index
//! `4a + 2b + c`. Composition appends the second register's labels after the
//! first (`A, B, C, D`).

use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian, kron, ComplexMatrix, C64, ZERO};

/// Tolerance on the squared norm of user-supplied amplitudes.
pub const INPUT_NORM_TOL: f64 = 1e-9;
/// Tolerance used for internal state invariants.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest eigenvalue tolerated in a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;

pub const SYSTEM_LABELS: [char; 3] = ['A', 'B', 'C'];
pub const ENV_LABEL: char = 'D';

/// Normalized amplitude vector over a labeled qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    labels: Vec<char>,
}

impl PureState {
    /// Accepts amplitudes whose squared norm is within [`INPUT_NORM_TOL`] of 1
    /// and stores them divided by their norm.
    pub fn new(amplitudes: Vec<C64>, labels: Vec<char>) -> Result<Self> {
        check_register(amplitudes.len(), &labels)?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NormalizationViolation { norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
            labels,
        })
    }

    /// Rescales any nonzero amplitude vector to unit norm.
    pub fn normalized(amplitudes: Vec<C64>, labels: Vec<char>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::NormalizationViolation { norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        Self::new(amplitudes.into_iter().map(|z| z * inv).collect(), labels)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Projector |psi><psi|.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            labels: self.labels.clone(),
        }
    }
}

fn check_register(len: usize, labels: &[char]) -> Result<()> {
    if labels.is_empty() || labels.len() > 8 {
        return Err(Error::InvalidParameter(format!(
            "register must have 1..=8 qubits, got {}",
            labels.len()
        )));
    }
    let expected = 1usize << labels.len();
    if len != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: len,
        });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::LabelCollision(*l));
        }
    }
    Ok(())
}

/// Hermitian, unit-trace, positive semidefinite matrix over labeled qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    labels: Vec<char>,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant.
    pub fn new(matrix: ComplexMatrix, labels: Vec<char>) -> Result<Self> {
        check_register(matrix.dim(), &labels)?;
        let dev = matrix.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let min = eigvals_hermitian(&matrix)?[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix, labels })
    }

    /// For outputs of operations that preserve the invariants by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, labels: Vec<char>) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << labels.len());
        Self { matrix, labels }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Bit position (0 = most significant) of `label`.
    pub fn position(&self, label: char) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        // tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Smallest eigenvalue with roundoff-scale negatives in [-1e-10, 0)
    /// clamped to zero.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let min = eigvals_hermitian(&self.matrix)?[0];
        Ok(if (-POSITIVITY_TOL..0.0).contains(&min) {
            0.0
        } else {
            min
        })
    }

    /// Same matrix under a new label list (e.g. to relabel qubits).
    pub fn relabeled(&self, labels: Vec<char>) -> Result<Self> {
        check_register(self.dim(), &labels)?;
        Ok(Self {
            matrix: self.matrix.clone(),
            labels,
        })
    }
}

fn real_amplitudes(values: &[f64]) -> Vec<C64> {
    values.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn check_real_norm(values: &[f64]) -> Result<()> {
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm_sq: f64 = values.iter().map(|x| x * x).sum();
    if (norm_sq - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NormalizationViolation { norm_sq });
    }
    Ok(())
}

/// `w0|001> + w1|010> + w2|100>` over qubits A, B, C.
pub fn w_state(w0: f64, w1: f64, w2: f64) -> Result<PureState> {
    check_real_norm(&[w0, w1, w2])?;
    let mut amps = vec![ZERO; 8];
    amps[0b001] = C64::new(w0, 0.0);
    amps[0b010] = C64::new(w1, 0.0);
    amps[0b100] = C64::new(w2, 0.0);
    PureState::new(amps, SYSTEM_LABELS.to_vec())
}

/// `g0|000> + g1|111>` over qubits A, B, C.
pub fn ghz_state(g0: f64, g1: f64) -> Result<PureState> {
    check_real_norm(&[g0, g1])?;
    let mut amps = vec![ZERO; 8];
    amps[0] = C64::new(g0, 0.0);
    amps[7] = C64::new(g1, 0.0);
    PureState::new(amps, SYSTEM_LABELS.to_vec())
}

/// `c0|0> + c1|1>` for the environment qubit D.
pub fn env_qubit(c0: C64, c1: C64) -> Result<PureState> {
    PureState::new(vec![c0, c1], vec![ENV_LABEL])
}

/// Rescales a real amplitude list to unit norm.
pub fn normalize_real(values: &[f64]) -> Result<Vec<f64>> {
    let norm_sq: f64 = values.iter().map(|x| x * x).sum();
    if !norm_sq.is_finite() || norm_sq <= 0.0 {
        return Err(Error::NormalizationViolation { norm_sq });
    }
    let norm = norm_sq.sqrt();
    Ok(values.iter().map(|x| x / norm).collect())
}

pub fn to_density(s: &PureState) -> DensityMatrix {
    s.to_density()
}

/// rho_s (x) rho_e with labels of `s` followed by labels of `e`.
pub fn compose(s: &DensityMatrix, e: &DensityMatrix) -> Result<DensityMatrix> {
    if let Some(&l) = e.labels.iter().find(|l| s.labels.contains(l)) {
        return Err(Error::LabelCollision(l));
    }
    let mut labels = s.labels.clone();
    labels.extend_from_slice(&e.labels);
    Ok(DensityMatrix::from_parts(
        kron(&s.matrix, &e.matrix),
        labels,
    ))
}

/// Real-amplitude helper used by sweeps: W state from (w1, w2) with
/// `w0 = sqrt(1 - w1^2 - w2^2)`. Returns `None` outside the admissible disk.
pub fn w_state_from_pair(w1: f64, w2: f64) -> Option<PureState> {
    let rest = 1.0 - w1 * w1 - w2 * w2;
    if rest < -STATE_TOL {
        return None;
    }
    let w0 = rest.max(0.0).sqrt();
    let amps = {
        let mut a = vec![0.0; 8];
        a[0b001] = w0;
        a[0b010] = w1;
        a[0b100] = w2;
        real_amplitudes(&a)
    };
    PureState::normalized(amps, SYSTEM_LABELS.to_vec()).ok()
}
