//! DM Hamiltonian, unitary evolution of the four-qubit register, and the
//! partial trace / partial transpose used by the measures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, matexp_hermitian, ComplexMatrix, ZERO};
use crate::states::{compose, DensityMatrix, PureState, SYSTEM_LABELS};

/// `dz * (sigma_x (x) sigma_y - sigma_y (x) sigma_x)` on a qubit pair.
///
/// In the basis |00>, |01>, |10>, |11> the only nonzero entries are
/// `(1, 2) = 2i dz` and `(2, 1) = -2i dz`.
pub fn dm_hamiltonian(dz: f64) -> ComplexMatrix {
    let xy = kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_y());
    let yx = kron(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_x());
    (&xy - &yx).scale_real(dz)
}

/// Which pair of the A, B, C, D register the two-qubit coupling acts on.
///
/// `Ab` puts the operator on the leading pair of the composite
/// `rho_s (x) rho_e`; C and the environment qubit D are spectators, the
/// reduced three-qubit state is independent of D, and GHZ inputs are left
/// unchanged. `Cd` couples system qubit C to the environment qubit D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingSite {
    #[default]
    Ab,
    Cd,
}

impl fmt::Display for CouplingSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingSite::Ab => "ab",
            CouplingSite::Cd => "cd",
        })
    }
}

impl FromStr for CouplingSite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(CouplingSite::Ab),
            "cd" => Ok(CouplingSite::Cd),
            other => Err(Error::InvalidParameter(format!(
                "unknown coupling site {other:?} (expected ab or cd)"
            ))),
        }
    }
}

fn check_pair_operator(h: &ComplexMatrix) -> Result<()> {
    if h.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: h.dim(),
        });
    }
    Ok(())
}

/// `I_A (x) I_B (x) h` on the register A, B, C, D.
pub fn embed_on_cd(h_cd: &ComplexMatrix) -> Result<ComplexMatrix> {
    embed(h_cd, CouplingSite::Cd)
}

/// Places a two-qubit operator on `site` of the four-qubit register.
pub fn embed(h: &ComplexMatrix, site: CouplingSite) -> Result<ComplexMatrix> {
    check_pair_operator(h)?;
    let id = ComplexMatrix::identity(4);
    Ok(match site {
        CouplingSite::Ab => kron(h, &id),
        CouplingSite::Cd => kron(&id, h),
    })
}

/// DM coupling strength and evolution time. `theta = dz * t` is the single
/// dimensionless parameter that results depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmCoupling {
    pub dz: f64,
    pub t: f64,
    pub site: CouplingSite,
}

impl DmCoupling {
    pub fn new(dz: f64, t: f64) -> Result<Self> {
        if !dz.is_finite() || !t.is_finite() {
            return Err(Error::NonFinite);
        }
        if dz < 0.0 || t < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dz and t must be nonnegative (dz = {dz}, t = {t})"
            )));
        }
        Ok(Self {
            dz,
            t,
            site: CouplingSite::default(),
        })
    }

    /// Unit strength, `t = theta`.
    pub fn from_theta(theta: f64) -> Result<Self> {
        Self::new(1.0, theta)
    }

    pub fn with_site(mut self, site: CouplingSite) -> Self {
        self.site = site;
        self
    }

    pub fn theta(&self) -> f64 {
        self.dz * self.t
    }

    /// `exp(-i H t)` on the full register.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let h = embed(&dm_hamiltonian(self.dz), self.site)?;
        matexp_hermitian(&h, self.t)
    }
}

/// `U rho0 U^dagger` for the four-qubit composite state.
pub fn evolve(rho0: &DensityMatrix, coupling: &DmCoupling) -> Result<DensityMatrix> {
    if rho0.num_qubits() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: rho0.dim(),
        });
    }
    let u = coupling.unitary()?;
    let evolved = &(&u * rho0.matrix()) * &u.dagger();
    Ok(DensityMatrix::from_parts(
        hermitize(&evolved),
        rho0.labels().to_vec(),
    ))
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.dagger()).scale_real(0.5)
}

/// Reduced density matrix over `keep` (in the order given), summing over the
/// computational basis of every other qubit.
pub fn partial_trace(rho: &DensityMatrix, keep: &[char]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter("keep must be nonempty".into()));
    }
    let n = rho.num_qubits();
    let mut kept_pos = Vec::with_capacity(keep.len());
    for (i, &l) in keep.iter().enumerate() {
        if keep[..i].contains(&l) {
            return Err(Error::LabelCollision(l));
        }
        kept_pos.push(rho.position(l)?);
    }
    let traced_pos: Vec<usize> = (0..n).filter(|p| !kept_pos.contains(p)).collect();

    // Maps (kept value, traced value) to a full basis index. Bit positions
    // count from the most significant end.
    let full_index = |kept: usize, traced: usize| -> usize {
        let mut idx = 0usize;
        for (k, &p) in kept_pos.iter().enumerate() {
            let bit = (kept >> (kept_pos.len() - 1 - k)) & 1;
            idx |= bit << (n - 1 - p);
        }
        for (k, &p) in traced_pos.iter().enumerate() {
            let bit = (traced >> (traced_pos.len() - 1 - k)) & 1;
            idx |= bit << (n - 1 - p);
        }
        idx
    };

    let dim_keep = 1usize << kept_pos.len();
    let dim_traced = 1usize << traced_pos.len();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dim_keep);
    for i in 0..dim_keep {
        for j in 0..dim_keep {
            let mut sum = ZERO;
            for k in 0..dim_traced {
                sum += m[(full_index(i, k), full_index(j, k))];
            }
            out[(i, j)] = sum;
        }
    }
    Ok(DensityMatrix::from_parts(out, keep.to_vec()))
}

/// Transposes the indices of `subsystem`. The result is Hermitian with unit
/// trace but may have negative eigenvalues.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: char) -> Result<ComplexMatrix> {
    let pos = rho.position(subsystem)?;
    let mask = 1usize << (rho.num_qubits() - 1 - pos);
    let m = rho.matrix();
    let dim = m.dim();
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            // swap the subsystem bit between row and column
            let (bi, bj) = (i & mask, j & mask);
            let ii = (i & !mask) | bj;
            let jj = (j & !mask) | bi;
            out[(ii, jj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Composes `system (x) env`, evolves, and traces out the environment.
pub fn reduced_dynamics(
    system: &PureState,
    env: &PureState,
    coupling: &DmCoupling,
) -> Result<DensityMatrix> {
    let rho0 = compose(&system.to_density(), &env.to_density())?;
    let rho_t = evolve(&rho0, coupling)?;
    partial_trace(&rho_t, &SYSTEM_LABELS)
}

/// Applies a single-qubit unitary to qubit `label` of `rho`.
pub fn apply_local(rho: &DensityMatrix, label: char, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let pos = rho.position(label)?;
    let n = rho.num_qubits();
    let left = ComplexMatrix::identity(1 << pos);
    let right = ComplexMatrix::identity(1 << (n - 1 - pos));
    let full = kron(&kron(&left, u), &right);
    let out = &(&full * rho.matrix()) * &full.dagger();
    Ok(DensityMatrix::from_parts(
        hermitize(&out),
        rho.labels().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvals_hermitian, C64, ONE};
    use crate::states::{env_qubit, ghz_state, w_state, ENV_LABEL};
    use std::f64::consts::{FRAC_1_SQRT_2 as S2, FRAC_PI_2, PI};

    const S3: f64 = 0.577_350_269_189_625_8;

    fn bell() -> DensityMatrix {
        let mut amps = vec![ZERO; 4];
        amps[0] = C64::new(S2, 0.0);
        amps[3] = C64::new(S2, 0.0);
        PureState::new(amps, vec!['A', 'B']).unwrap().to_density()
    }

    #[test]
    fn hamiltonian_entries() {
        assert_eq!(dm_hamiltonian(0.0), ComplexMatrix::zeros(4));
        let h = dm_hamiltonian(0.7);
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i, j) {
                    (1, 2) => C64::new(0.0, 1.4),
                    (2, 1) => C64::new(0.0, -1.4),
                    _ => ZERO,
                };
                assert!((h[(i, j)] - want).norm() < 1e-15);
            }
        }
        assert_eq!(h.hermitian_deviation(), 0.0);
        let ev = eigvals_hermitian(&dm_hamiltonian(1.0)).unwrap();
        for (a, b) in ev.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn embedding() {
        assert_eq!(
            embed_on_cd(&ComplexMatrix::identity(4)).unwrap(),
            ComplexMatrix::identity(16)
        );
        let h = embed_on_cd(&dm_hamiltonian(1.0)).unwrap();
        assert_eq!(h.dim(), 16);
        assert!(h.trace().norm() < 1e-15);
        let ev = eigvals_hermitian(&h).unwrap();
        let want: Vec<f64> = [-2.0; 4]
            .into_iter()
            .chain([0.0; 8])
            .chain([2.0; 4])
            .collect();
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(
            embed_on_cd(&ComplexMatrix::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
        // the two sites place the same operator on different tensor factors
        let ab = embed(&dm_hamiltonian(1.0), CouplingSite::Ab).unwrap();
        assert!((ab[(4, 8)] - C64::new(0.0, 2.0)).norm() < 1e-15);
        assert!((h[(1, 2)] - C64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn coupling_validation() {
        assert!(DmCoupling::new(-1.0, 1.0).is_err());
        assert!(DmCoupling::new(1.0, -0.1).is_err());
        assert!(DmCoupling::new(f64::NAN, 0.1).is_err());
        assert_eq!(DmCoupling::new(0.5, 3.0).unwrap().theta(), 1.5);
        assert_eq!("CD".parse::<CouplingSite>().unwrap(), CouplingSite::Cd);
        assert!("xy".parse::<CouplingSite>().is_err());
    }

    #[test]
    fn evolve_at_zero_time_is_identity() {
        let rho0 = compose(
            &w_state(0.6, 0.0, 0.8).unwrap().to_density(),
            &env_qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8))
                .unwrap()
                .to_density(),
        )
        .unwrap();
        for site in [CouplingSite::Ab, CouplingSite::Cd] {
            let c = DmCoupling::new(3.0, 0.0).unwrap().with_site(site);
            assert!(
                evolve(&rho0, &c)
                    .unwrap()
                    .matrix()
                    .max_abs_diff(rho0.matrix())
                    < 1e-15
            );
        }
        let three = w_state(1.0, 0.0, 0.0).unwrap().to_density();
        assert!(matches!(
            evolve(&three, &DmCoupling::from_theta(0.1).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ghz_is_invariant() {
        let g = ghz_state(0.8, 0.6).unwrap();
        let env = env_qubit(C64::new(S2, 0.0), C64::new(0.0, S2)).unwrap();
        let red = reduced_dynamics(&g, &env, &DmCoupling::from_theta(2.3).unwrap()).unwrap();
        assert!(red.matrix().max_abs_diff(g.to_density().matrix()) < 1e-12);
    }

    #[test]
    fn evolution_preserves_state_invariants() {
        let rho0 = compose(
            &w_state(S3, S3, S3).unwrap().to_density(),
            &env_qubit(C64::new(0.6, 0.0), C64::new(0.8, 0.0))
                .unwrap()
                .to_density(),
        )
        .unwrap();
        for site in [CouplingSite::Ab, CouplingSite::Cd] {
            for theta in [0.1, 0.4, 1.3, 7.7] {
                let rho = evolve(
                    &rho0,
                    &DmCoupling::from_theta(theta).unwrap().with_site(site),
                )
                .unwrap();
                assert!((rho.trace() - ONE).norm() < 1e-12);
                assert!(rho.matrix().hermitian_deviation() < 1e-12);
                assert!((rho.purity() - 1.0).abs() < 1e-12);
                assert!(rho.min_eigenvalue().unwrap() >= -1e-10);
            }
        }
    }

    #[test]
    fn w_support_and_z_relation() {
        let w = w_state(0.3, 0.5, (1.0f64 - 0.34).sqrt()).unwrap();
        let env = env_qubit(ONE, ZERO).unwrap();
        let theta = 0.37;
        let red = reduced_dynamics(&w, &env, &DmCoupling::from_theta(theta).unwrap()).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if ![1, 2, 4].contains(&i) || ![1, 2, 4].contains(&j) {
                    assert!(red.matrix()[(i, j)].norm() < 1e-12);
                }
            }
        }
        let half = reduced_dynamics(
            &w,
            &env,
            &DmCoupling::from_theta(theta + FRAC_PI_2).unwrap(),
        )
        .unwrap();
        let full =
            reduced_dynamics(&w, &env, &DmCoupling::from_theta(theta + PI).unwrap()).unwrap();
        assert!(full.matrix().max_abs_diff(red.matrix()) < 1e-10);
        let z_conjugated = apply_local(&red, 'C', &ComplexMatrix::pauli_z()).unwrap();
        assert!(half.matrix().max_abs_diff(z_conjugated.matrix()) < 1e-10);
    }

    #[test]
    fn partial_trace_of_product() {
        let s = w_state(S3, S3, S3).unwrap().to_density();
        let e = env_qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8))
            .unwrap()
            .to_density();
        let rho = compose(&s, &e).unwrap();
        let back = partial_trace(&rho, &['A', 'B', 'C']).unwrap();
        assert!(back.matrix().max_abs_diff(s.matrix()) < 1e-15);
        let env_back = partial_trace(&rho, &[ENV_LABEL]).unwrap();
        assert!(env_back.matrix().max_abs_diff(e.matrix()) < 1e-15);
        assert_eq!(partial_trace(&rho, &['X']), Err(Error::UnknownLabel('X')));
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn partial_trace_ghz_and_w_pairs() {
        let g = ghz_state(S2, S2).unwrap().to_density();
        let ab = partial_trace(&g, &['A', 'B']).unwrap();
        assert!(
            ab.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]))
                < 1e-15
        );

        // index-summation oracle written out by hand:
        // rho_AB[i][j] = sum_c rho[(i<<1)|c][(j<<1)|c]
        let w = w_state(S3, S3, S3).unwrap().to_density();
        let mut oracle = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                for c in 0..2 {
                    oracle[(i, j)] += w.matrix()[((i << 1) | c, (j << 1) | c)];
                }
            }
        }
        let red = partial_trace(&w, &['A', 'B']).unwrap();
        assert!(red.matrix().max_abs_diff(&oracle) < 1e-15);
        let third = 1.0 / 3.0;
        assert!((red.matrix()[(0, 0)].re - third).abs() < 1e-15);
        assert!((red.matrix()[(1, 2)].re - third).abs() < 1e-15);
        assert!((red.matrix()[(3, 3)].re).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_respects_keep_order() {
        let w = w_state(0.6, 0.8, 0.0).unwrap().to_density();
        let bc = partial_trace(&w, &['B', 'C']).unwrap();
        let cb = partial_trace(&w, &['C', 'B']).unwrap();
        // |BC> = 0.6|01> + 0.8|10>, |CB> = 0.6|10> + 0.8|01>
        assert!((bc.matrix()[(1, 1)].re - 0.36).abs() < 1e-15);
        assert!((cb.matrix()[(1, 1)].re - 0.64).abs() < 1e-15);
        assert_eq!(cb.labels(), &['C', 'B']);
    }

    #[test]
    fn partial_transpose_bell_and_product() {
        let pt = partial_transpose(&bell(), 'A').unwrap();
        let ev = eigvals_hermitian(&pt).unwrap();
        for (a, b) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
        let prod = compose(
            &env_qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8))
                .unwrap()
                .to_density(),
            &env_qubit(C64::new(S2, 0.0), C64::new(S2, 0.0))
                .unwrap()
                .to_density()
                .relabeled(vec!['E'])
                .unwrap(),
        )
        .unwrap();
        let ev = eigvals_hermitian(&partial_transpose(&prod, 'D').unwrap()).unwrap();
        assert!(ev[0] >= -1e-10);
        assert_eq!(partial_transpose(&prod, 'Z'), Err(Error::UnknownLabel('Z')));
    }

    #[test]
    fn partial_transpose_is_involution() {
        let rho = reduced_dynamics(
            &w_state(0.3, 0.5, (0.66f64).sqrt()).unwrap(),
            &env_qubit(ONE, ZERO).unwrap(),
            &DmCoupling::from_theta(0.9)
                .unwrap()
                .with_site(CouplingSite::Cd),
        )
        .unwrap();
        for l in ['A', 'B', 'C'] {
            let once = partial_transpose(&rho, l).unwrap();
            let twice =
                partial_transpose(&DensityMatrix::from_parts(once, rho.labels().to_vec()), l)
                    .unwrap();
            assert!(twice.max_abs_diff(rho.matrix()) < 1e-14);
        }
    }
}
