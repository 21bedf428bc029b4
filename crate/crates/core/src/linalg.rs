//! Dense complex matrices sized for few-qubit registers.
//!
//! Everything in the crate is at most 16x16, so matrices are plain row-major
//! `Vec`s and the eigensolver is a cyclic Jacobi iteration.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Max |A - A^dagger| accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm (relative to max(1, |A|_F)) at which Jacobi stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Rejects non-square lengths and
    /// non-finite values.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self {
            dim: 2,
            data: vec![ZERO, ONE, ONE, ZERO],
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            dim: 2,
            data: vec![ZERO, -I, I, ZERO],
        }
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Max absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max |A - A^dagger|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len(), "dimension mismatch");
        let n = u.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = u[i] * v[j].conj();
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Column `k` as a vector.
    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, k)]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Kronecker product with block ordering `row = i_a * dim_b + i_b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..na {
        for ja in 0..na {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..nb {
                for jb in 0..nb {
                    out[(ia * nb + ib, ja * nb + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V diag(f(lambda)) V^dagger.
    pub fn reconstruct_with<F: Fn(f64) -> C64>(&self, f: F) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == ZERO {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The sweep order is fixed (row-major over the strict upper triangle), so
/// identical inputs give bit-identical outputs. Eigenvectors inside a
/// degenerate block are orthonormal but otherwise arbitrary.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim();

    // Work on the exactly Hermitian part.
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > threshold {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(a: &ComplexMatrix) -> Result<Vec<f64>> {
    eig_hermitian(a).map(|e| e.eigenvalues)
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One two-sided unitary rotation zeroing m[p][q].
///
/// With m[p][q] = r e^{i phi}, the rotation J acts on columns p, q as
/// `[[c, s], [-s e^{-i phi}, c e^{-i phi}]]`, and tan(2 theta) = 2r / (m_qq - m_pp).
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase = apq / r; // e^{i phi}
    let theta = 0.5 * (2.0 * r).atan2(aqq - app);
    let (s, c) = theta.sin_cos();
    let phase_conj = phase.conj();

    // J entries (rows p,q of the 2x2 block).
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = phase_conj * (-s);
    let jqq = phase_conj * c;

    let n = m.dim();
    // m <- m J
    for i in 0..n {
        let mip = m[(i, p)];
        let miq = m[(i, q)];
        m[(i, p)] = mip * jpp + miq * jqp;
        m[(i, q)] = mip * jpq + miq * jqq;
    }
    // m <- J^dagger m
    for j in 0..n {
        let mpj = m[(p, j)];
        let mqj = m[(q, j)];
        m[(p, j)] = jpp.conj() * mpj + jqp.conj() * mqj;
        m[(q, j)] = jpq.conj() * mpj + jqq.conj() * mqj;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    // v <- v J
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * jpp + viq * jqp;
        v[(i, q)] = vip * jpq + viq * jqq;
    }
}

/// `exp(-i * scale * h)` for Hermitian `h`, via its spectral decomposition.
pub fn matexp_hermitian(h: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    if scale == 0.0 {
        let deviation = h.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        return Ok(ComplexMatrix::identity(h.dim()));
    }
    let eig = eig_hermitian(h)?;
    Ok(eig.reconstruct_with(|lambda| C64::from_polar(1.0, -lambda * scale)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dm_cd(dz: f64) -> ComplexMatrix {
        let xy = kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_y());
        let yx = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_x());
        (&xy - &yx).scale_real(dz)
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_pauli_xy() {
        let m = kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_y());
        let mut expected = ComplexMatrix::zeros(4);
        expected[(0, 3)] = c(0.0, -1.0);
        expected[(1, 2)] = c(0.0, 1.0);
        expected[(2, 1)] = c(0.0, -1.0);
        expected[(3, 0)] = c(0.0, 1.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_trace_is_multiplicative() {
        let a = ComplexMatrix::from_vec(
            2,
            vec![c(0.3, 0.1), c(-1.2, 0.4), c(0.7, 0.0), c(2.0, -0.5)],
        )
        .unwrap();
        let b = ComplexMatrix::from_vec(
            2,
            vec![c(1.1, -0.2), c(0.0, 0.9), c(0.4, 0.4), c(-0.6, 0.3)],
        )
        .unwrap();
        let k = kron(&a, &b);
        // direct summation over the diagonal of the 4x4 block structure
        let mut direct = ZERO;
        for ia in 0..2 {
            for ib in 0..2 {
                direct += a[(ia, ia)] * b[(ib, ib)];
            }
        }
        assert!((k.trace() - direct).norm() < 1e-15);
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-14);
    }

    #[test]
    fn dagger_cases() {
        assert_eq!(
            dagger(&ComplexMatrix::identity(3)),
            ComplexMatrix::identity(3)
        );
        assert_eq!(ComplexMatrix::pauli_y().dagger(), ComplexMatrix::pauli_y());
        let a = ComplexMatrix::from_vec(
            2,
            vec![c(1.0, 2.0), c(3.0, -1.0), c(0.0, 5.0), c(-2.0, 0.5)],
        )
        .unwrap();
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!(a.dagger()[(0, 1)], c(0.0, -5.0));
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::from_vec(2, vec![ONE; 3]),
            Err(Error::NotSquare { .. })
        ));
        assert_eq!(
            ComplexMatrix::from_vec(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn eig_diagonal() {
        let e = eig_hermitian(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_pauli_x() {
        let e = eig_hermitian(&ComplexMatrix::pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_dm_hamiltonian() {
        // Characteristic polynomial of the 4x4 DM matrix: lambda^2 (lambda^2 - 4).
        let e = eig_hermitian(&dm_cd(1.0)).unwrap();
        let expected = [-2.0, 0.0, 0.0, 2.0];
        for (got, want) in e.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut a = ComplexMatrix::identity(2);
        a[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_is_deterministic() {
        let h = &dm_cd(0.7) + &kron(&ComplexMatrix::pauli_z(), &ComplexMatrix::pauli_x());
        let a = eig_hermitian(&h).unwrap();
        let b = eig_hermitian(&h).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn matexp_zero_time_is_identity() {
        assert_eq!(
            matexp_hermitian(&dm_cd(1.3), 0.0).unwrap(),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn matexp_diagonal() {
        let (a, b, t) = (0.4, -1.7, 2.3);
        let u = matexp_hermitian(&ComplexMatrix::from_real_diagonal(&[a, b]), t).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -a * t)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, -b * t)).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-15);
    }

    /// Scaling-and-squaring Taylor series, independent of the eigensolver.
    fn expm_taylor(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let a = h.scale(C64::new(0.0, -t));
        let norm = a.frobenius_norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = a.scale_real(1.0 / 2f64.powi(squarings as i32));
        let n = a.dim();
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..30 {
            term = (&term * &a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn matexp_dm_rotation_block() {
        for &(dz, t) in &[(1.0, 0.3), (0.5, 2.0), (2.0, 1.7)] {
            let h = dm_cd(dz);
            let u = matexp_hermitian(&h, t).unwrap();
            let oracle = expm_taylor(&h, t);
            assert!(u.max_abs_diff(&oracle) < 1e-12);
            let theta: f64 = 2.0 * dz * t;
            let (s, co) = theta.sin_cos();
            assert!((u[(1, 1)] - c(co, 0.0)).norm() < 1e-12);
            assert!((u[(1, 2)] - c(s, 0.0)).norm() < 1e-12);
            assert!((u[(2, 1)] - c(-s, 0.0)).norm() < 1e-12);
            assert!((u[(2, 2)] - c(co, 0.0)).norm() < 1e-12);
            assert!((u[(0, 0)] - ONE).norm() < 1e-12);
            assert!((u[(3, 3)] - ONE).norm() < 1e-12);
        }
    }
}
