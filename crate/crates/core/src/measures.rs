//! Entanglement quantifiers: negativities, residual entanglement, three-pi,
//! concurrence and the three-tangle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{partial_trace, partial_transpose};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, eigvals_hermitian, kron, ComplexMatrix, C64};
use crate::states::{DensityMatrix, PureState, INPUT_NORM_TOL};

/// How negative partial-transpose eigenvalues are turned into a negativity.
///
/// `Doubled` is `||rho^T||_1 - 1 = 2 * sum |negative eigenvalues|`, which gives
/// 1 for a Bell pair and for the one-vs-rest cuts of a balanced GHZ state.
/// `Raw` is the plain sum of |negative eigenvalues|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativityConvention {
    #[default]
    Doubled,
    Raw,
}

impl NegativityConvention {
    fn factor(self) -> f64 {
        match self {
            NegativityConvention::Doubled => 2.0,
            NegativityConvention::Raw => 1.0,
        }
    }
}

impl fmt::Display for NegativityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NegativityConvention::Doubled => "doubled",
            NegativityConvention::Raw => "raw",
        })
    }
}

impl FromStr for NegativityConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "doubled" => Ok(NegativityConvention::Doubled),
            "raw" => Ok(NegativityConvention::Raw),
            other => Err(Error::InvalidParameter(format!(
                "unknown negativity convention {other:?} (expected doubled or raw)"
            ))),
        }
    }
}

/// Every monotone evaluated at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub n_ab: f64,
    pub n_ac: f64,
    pub n_bc: f64,
    pub n_a_bc: f64,
    pub n_b_ac: f64,
    pub n_c_ab: f64,
    pub pi_a: f64,
    pub pi_b: f64,
    pub pi_c: f64,
    pub three_pi: f64,
    pub three_tangle: Option<f64>,
    pub concurrence_ab: Option<f64>,
    pub concurrence_ac: Option<f64>,
    pub concurrence_bc: Option<f64>,
}

/// Negativity of `rho` across the cut `subsystem | rest`.
pub fn negativity(
    rho: &DensityMatrix,
    subsystem: char,
    convention: NegativityConvention,
) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    let eigenvalues = eigvals_hermitian(&pt)?;
    let negative: f64 = eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    Ok(convention.factor() * negative)
}

fn require_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Negativity of the two-qubit reduction of a three-qubit state onto
/// `{first, second}`, transposing `first`.
pub fn pairwise_negativity(
    rho: &DensityMatrix,
    first: char,
    second: char,
    convention: NegativityConvention,
) -> Result<f64> {
    // keep the pair in register order so the reduction is the same matrix
    // regardless of which qubit is named first
    let (p1, p2) = (rho.position(first)?, rho.position(second)?);
    let keep = if p1 < p2 {
        [first, second]
    } else {
        [second, first]
    };
    let pair = partial_trace(rho, &keep)?;
    negativity(&pair, first, convention)
}

fn other_two(rho: &DensityMatrix, nodal: char) -> Result<(char, char)> {
    rho.position(nodal)?;
    let mut rest = rho.labels().iter().copied().filter(|&l| l != nodal);
    match (rest.next(), rest.next()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(Error::DimensionMismatch {
            expected: 8,
            found: rho.dim(),
        }),
    }
}

/// `N_{nodal|rest}^2 - N_{nodal,x}^2 - N_{nodal,y}^2`. May be negative for
/// mixed states.
pub fn residual_pi(
    rho: &DensityMatrix,
    nodal: char,
    convention: NegativityConvention,
) -> Result<f64> {
    require_qubits(rho, 3)?;
    let (x, y) = other_two(rho, nodal)?;
    let whole = negativity(rho, nodal, convention)?;
    let nx = pairwise_negativity(rho, nodal, x, convention)?;
    let ny = pairwise_negativity(rho, nodal, y, convention)?;
    Ok(whole * whole - nx * nx - ny * ny)
}

/// Average of the three residual entanglements.
pub fn three_pi(rho: &DensityMatrix, convention: NegativityConvention) -> Result<f64> {
    require_qubits(rho, 3)?;
    let mut sum = 0.0;
    for &l in rho.labels() {
        sum += residual_pi(rho, l, convention)?;
    }
    Ok(sum / 3.0)
}

/// Closed-form three-pi of `w0|001> + w1|010> + w2|100>` (doubled
/// negativity convention).
pub fn three_pi_w_closed_form(w0: f64, w1: f64, w2: f64) -> Result<f64> {
    let norm_sq = w0 * w0 + w1 * w1 + w2 * w2;
    if !norm_sq.is_finite() {
        return Err(Error::NonFinite);
    }
    if (norm_sq - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NormalizationViolation { norm_sq });
    }
    let (a, b, c) = (w0 * w0, w1 * w1, w2 * w2);
    let term = |own: f64, x: f64, y: f64| own * (own * own + 4.0 * x * y).sqrt();
    Ok(4.0 / 3.0 * (term(c, b, a) + term(b, c, a) + term(a, c, b) - c * c - b * b - a * a))
}

fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_y());
    &(&yy * &rho.conj()) * &yy
}

/// Eigenvalues below this are roundoff zeros before square roots are taken.
const SPECTRUM_FLOOR: f64 = 1e-13;

fn clamp_roundoff(l: f64) -> f64 {
    if l < SPECTRUM_FLOOR {
        0.0
    } else {
        l
    }
}

/// Wootters concurrence of a two-qubit state.
///
/// The spectrum of `rho * rho_flip` is taken from the Hermitian matrix
/// `sqrt(rho) rho_flip sqrt(rho)`, which has the same eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_qubits(rho, 2)?;
    let eig = eig_hermitian(rho.matrix())?;
    let sqrt_rho = eig.reconstruct_with(|l| C64::new(clamp_roundoff(l).sqrt(), 0.0));
    let flipped = spin_flip(rho.matrix());
    let r = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let r = (&r + &r.dagger()).scale_real(0.5);
    let mut lambdas: Vec<f64> = eigvals_hermitian(&r)?
        .into_iter()
        .map(|l| clamp_roundoff(l).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Three-tangle of a pure three-qubit state, `4 |d1 - 2 d2 + 4 d3|` in the
/// amplitudes `x_ijk`.
pub fn three_tangle(psi: &PureState) -> Result<f64> {
    if psi.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: psi.amplitudes().len(),
        });
    }
    let x = psi.amplitudes();
    let (x000, x001, x010, x011) = (x[0], x[1], x[2], x[3]);
    let (x100, x101, x110, x111) = (x[4], x[5], x[6], x[7]);
    let sq = |z: C64| z * z;
    let d1 = sq(x000) * sq(x111) + sq(x001) * sq(x110) + sq(x010) * sq(x101) + sq(x100) * sq(x011);
    let d2 = x000 * x111 * x011 * x100
        + x000 * x111 * x101 * x010
        + x000 * x111 * x110 * x001
        + x011 * x100 * x101 * x010
        + x011 * x100 * x110 * x001
        + x101 * x010 * x110 * x001;
    let d3 = x000 * x110 * x101 * x011 + x111 * x001 * x010 * x100;
    Ok(4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm())
}

/// Principal eigenvector of `rho` when it is pure to within 1e-10.
pub fn purify(rho: &DensityMatrix) -> Result<Option<PureState>> {
    if (rho.purity() - 1.0).abs() > 1e-10 {
        return Ok(None);
    }
    let eig = eig_hermitian(rho.matrix())?;
    let top = eig.eigenvectors.column(rho.dim() - 1);
    PureState::normalized(top, rho.labels().to_vec()).map(Some)
}

/// Computes every report field. With `include_tangle`, concurrences of the
/// three pairs are filled in, and the three-tangle is evaluated on `psi` or,
/// failing that, on `rho` itself when it is pure.
pub fn full_report(
    rho: &DensityMatrix,
    include_tangle: bool,
    psi: Option<&PureState>,
    convention: NegativityConvention,
) -> Result<EntanglementReport> {
    require_qubits(rho, 3)?;
    let [a, b, c] = [rho.labels()[0], rho.labels()[1], rho.labels()[2]];
    let n_ab = pairwise_negativity(rho, a, b, convention)?;
    let n_ac = pairwise_negativity(rho, a, c, convention)?;
    let n_bc = pairwise_negativity(rho, b, c, convention)?;
    let n_a_bc = negativity(rho, a, convention)?;
    let n_b_ac = negativity(rho, b, convention)?;
    let n_c_ab = negativity(rho, c, convention)?;
    let pi_a = n_a_bc * n_a_bc - n_ab * n_ab - n_ac * n_ac;
    let pi_b = n_b_ac * n_b_ac - n_ab * n_ab - n_bc * n_bc;
    let pi_c = n_c_ab * n_c_ab - n_ac * n_ac - n_bc * n_bc;
    let three_pi = (pi_a + pi_b + pi_c) / 3.0;

    let (mut three_tangle_value, mut c_ab, mut c_ac, mut c_bc) = (None, None, None, None);
    if include_tangle {
        c_ab = Some(concurrence(&partial_trace(rho, &[a, b])?)?);
        c_ac = Some(concurrence(&partial_trace(rho, &[a, c])?)?);
        c_bc = Some(concurrence(&partial_trace(rho, &[b, c])?)?);
        three_tangle_value = match psi {
            Some(p) => Some(three_tangle(p)?),
            None => match purify(rho)? {
                Some(p) => Some(three_tangle(&p)?),
                None => None,
            },
        };
    }

    Ok(EntanglementReport {
        n_ab,
        n_ac,
        n_bc,
        n_a_bc,
        n_b_ac,
        n_c_ab,
        pi_a,
        pi_b,
        pi_c,
        three_pi,
        three_tangle: three_tangle_value,
        concurrence_ab: c_ab,
        concurrence_ac: c_ac,
        concurrence_bc: c_bc,
    })
}
