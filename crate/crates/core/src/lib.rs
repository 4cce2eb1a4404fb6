//! Quantum Fisher information of multiqubit states under uniform
//! single-qubit decoherence.
//!
//! The pipeline is: build a pure state ([`states`]), push it through a
//! Kraus channel applied to every qubit ([`channels`]), eigendecompose the
//! result ([`matcore`]) and assemble the 3×3 sensitivity matrix over the
//! collective spin operators ([`collective`], [`qfi`]). [`closed_forms`]
//! holds analytic W₃ results used as an oracle, and [`sweep`] drives grid
//! sweeps with CSV/SVG output.

pub mod channels;
pub mod closed_forms;
pub mod collective;
pub mod error;
pub mod matcore;
pub mod par;
pub mod qfi;
pub mod states;
pub mod sweep;

pub use channels::{apply_uniform, damping_rate_to_p, ChannelKind, KrausChannel};
pub use collective::{collective_operator, pauli, Axis, Direction};
pub use error::{QfiError, Result};
pub use matcore::{hermitian_eig, is_psd, ComplexMatrix, HermitianEigen};
pub use qfi::{
    c_matrix, fidelity_qfi_oracle, max_mean_qfi, pure_state_qfi, qcrb, qfi_along, CMatrix,
    Classification, QfiResult, SummationMode, DEFAULT_EPSILON,
};
pub use states::{
    density_from_pure, dicke_state, ghz_state, product_state_all_zero, purity, w_state,
    DensityMatrix, PureState, StateSpec,
};
pub use sweep::{run_sweep, run_sweep_serial, SweepConfig, SweepRow};
