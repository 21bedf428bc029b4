//! Entanglement dynamics of three-qubit W and GHZ states coupled to an
//! environment qubit through a Dzyaloshinskii-Moriya interaction.
//!
//! Qubit `A` is the most significant bit of every register; the environment
//! qubit `D` is appended after the system.
//!
//! ```
//! use dment::{reduced_dynamics, env_qubit, full_report, w_state, DmCoupling};
//! use dment::linalg::{ONE, ZERO};
//!
//! let s = 1.0 / 3f64.sqrt();
//! let w = w_state(s, s, s).unwrap();
//! let env = env_qubit(ONE, ZERO).unwrap();
//! let rho = reduced_dynamics(&w, &env, &DmCoupling::from_theta(0.0).unwrap()).unwrap();
//! let report = full_report(&rho, false, None, Default::default()).unwrap();
//! assert!((report.three_pi - 0.549364).abs() < 1e-6);
//! ```

pub mod dynamics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod repro;
pub mod scan;
pub mod states;

pub use dynamics::{
    dm_hamiltonian, embed, evolve, partial_trace, partial_transpose, reduced_dynamics,
    CouplingSite, DmCoupling,
};
pub use error::{Error, Result};
pub use linalg::{eig_hermitian, kron, matexp_hermitian, ComplexMatrix, C64};
pub use measures::{
    concurrence, full_report, negativity, pairwise_negativity, three_pi, three_tangle,
    EntanglementReport, NegativityConvention,
};
pub use scan::{
    detect_esd, find_crossings, find_period, run_sweep, Axis, CrossingPoint, EsdInterval, Measure,
    ScanOptions, StateFamily, SweepGrid, SweepResult,
};
pub use states::{compose, env_qubit, ghz_state, w_state, DensityMatrix, PureState};
