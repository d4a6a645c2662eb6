//! Block entanglement, block-localizable entanglement and regionally
//! localized entanglement of multi-qubit states.
//!
//! The hub is a distinguished qubit shared by every two-qubit region. For a
//! register split into a measured auxiliary set `S0` and the useful set `S`,
//! the crate computes
//!
//! * the block entanglement `E`: twice the negativity across hub : rest,
//! * the block-localizable entanglement `E_S`: the best average hub : rest
//!   entanglement after local projective measurements on `S0`,
//! * the regionally localized entanglement `F_i`: the best average
//!   entanglement left on the pair (hub, i) after measuring every other qubit,
//!   and the total `F_S = Σ_i F_i`.
//!
//! Qubit `0` is the most significant bit of every basis index.

pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod localization;
pub mod noise;
pub mod oracles;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{DensityMatrix, PureState, QubitPartition, C64};
pub use localization::QuantumState;
