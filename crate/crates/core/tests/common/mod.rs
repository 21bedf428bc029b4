#![allow(dead_code)]

use dment::linalg::{ComplexMatrix, C64, ONE, ZERO};
use dment::states::{DensityMatrix, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

/// Seed for every randomized check: `DMENT_SEED` or 42.
pub fn seed() -> u64 {
    std::env::var("DMENT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_pure(rng: &mut impl Rng, labels: &[char]) -> PureState {
    let dim = 1 << labels.len();
    loop {
        let amps: Vec<C64> = (0..dim).map(|_| random_complex(rng)).collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let amps = amps.into_iter().map(|a| a / norm).collect();
            return PureState::new(amps, labels.to_vec()).unwrap();
        }
    }
}

/// Real W amplitudes (w0, w1, w2) with unit norm and random signs.
pub fn random_w(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 {
            return v.map(|x| x / n);
        }
    }
}

pub fn random_env(rng: &mut impl Rng) -> PureState {
    let s = random_pure(rng, &['D']);
    dment::env_qubit(s.amplitudes()[0], s.amplitudes()[1]).unwrap()
}

/// Haar-like single-qubit unitary from a random unit quaternion and phase.
pub fn random_unitary_2(rng: &mut impl Rng) -> ComplexMatrix {
    let q: [f64; 4] = loop {
        let q = [0; 4].map(|_| rng.gen_range(-1.0..1.0));
        let n: f64 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            break q.map(|x| x / n);
        }
    };
    let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let a = C64::new(q[0], q[1]);
    let b = C64::new(q[2], q[3]);
    ComplexMatrix::from_vec(
        2,
        vec![a * phase, b * phase, -b.conj() * phase, a.conj() * phase],
    )
    .unwrap()
}

/// Mixture of four random pure two-qubit states with random weights.
pub fn random_mixed_2q(rng: &mut impl Rng) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    let weights: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let psi = random_pure(rng, &['A', 'B']);
        let a = psi.amplitudes();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] += a[i] * a[j].conj() * (w / total);
            }
        }
    }
    let herm = (&m + &m.dagger()).scale_real(0.5);
    DensityMatrix::new(herm, vec!['A', 'B']).unwrap()
}

/// Amplitudes after relabelling qubits: new qubit `k` is old qubit `perm[k]`.
pub fn permute_qubits(psi: &PureState, perm: [usize; 3]) -> PureState {
    let old = psi.amplitudes();
    let mut new = vec![ZERO; 8];
    for (idx, slot) in new.iter_mut().enumerate() {
        let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let mut old_bits = [0; 3];
        for k in 0..3 {
            old_bits[perm[k]] = bits[k];
        }
        *slot = old[(old_bits[0] << 2) | (old_bits[1] << 1) | old_bits[2]];
    }
    PureState::new(new, psi.labels().to_vec()).unwrap()
}

/// Partial transpose on the first qubit of a 4x4 matrix, by direct index swap.
pub fn transpose_first_4x4(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4);
    for a in 0..2 {
        for b in 0..2 {
            for ap in 0..2 {
                for bp in 0..2 {
                    out[(2 * a + b, 2 * ap + bp)] = m[(2 * ap + b, 2 * a + bp)];
                }
            }
        }
    }
    out
}

/// Characteristic polynomial coefficients c_0..c_n (c_n = 1) by
/// Faddeev-LeVerrier.
pub fn char_poly(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut c = vec![ZERO; n + 1];
    c[n] = ONE;
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

fn eval(c: &[C64], x: C64) -> C64 {
    c.iter().rev().fold(ZERO, |acc, &ci| acc * x + ci)
}

fn eval_derivative(c: &[C64], x: C64) -> C64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(ZERO, |acc, (i, &ci)| acc * x + ci * i as f64)
}

/// Roots of a monic polynomial by Durand-Kerner, polished with Newton steps.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = ONE;
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(c, z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = eval_derivative(c, *zi);
            if d.norm() > 0.0 {
                *zi -= eval(c, *zi) / d;
            }
        }
    }
    z
}

/// Doubled negativity of a two-qubit state from the roots of the
/// characteristic polynomial of its partial transpose.
pub fn negativity_by_char_poly(rho: &DensityMatrix) -> f64 {
    let pt = transpose_first_4x4(rho.matrix());
    let roots = poly_roots(&char_poly(&pt));
    2.0 * roots.iter().map(|r| (-r.re).max(0.0)).sum::<f64>()
}

/// Doubled negativity of a pure bipartite cut from the reduced
/// determinant: for a qubit versus the rest it equals 2 sqrt(det rho_A).
pub fn pure_one_vs_rest_negativity(psi: &PureState, qubit: usize) -> f64 {
    let n = psi.num_qubits();
    let shift = n - 1 - qubit;
    let mut r = [[ZERO; 2]; 2];
    for (i, ai) in psi.amplitudes().iter().enumerate() {
        for (j, aj) in psi.amplitudes().iter().enumerate() {
            if (i & !(1 << shift)) == (j & !(1 << shift)) {
                r[(i >> shift) & 1][(j >> shift) & 1] += ai * aj.conj();
            }
        }
    }
    let det = (r[0][0] * r[1][1] - r[0][1] * r[1][0]).re.max(0.0);
    2.0 * det.sqrt()
}
