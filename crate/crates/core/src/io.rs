//! JSON dumps of states and density matrices.
//!
//! Pure states: `{"num_qubits": n, "amplitudes": [[re, im], ...]}` in
//! ascending basis order. Density matrices: `{"num_qubits": n, "matrix":
//! [[re, im], ...]}` with the `4^n` entries in row-major order.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, PureState, C64, MAX_DENSITY_QUBITS, MAX_PURE_QUBITS};
use crate::localization::QuantumState;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PureDump {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityDump {
    num_qubits: usize,
    matrix: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AnyDump {
    Pure(PureDump),
    Density(DensityDump),
}

fn pairs(values: impl Iterator<Item = C64>) -> Vec<[f64; 2]> {
    values.map(|z| [z.re, z.im]).collect()
}

fn complex(values: &[[f64; 2]]) -> Result<Vec<C64>> {
    values
        .iter()
        .map(|&[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(C64::new(re, im))
            } else {
                Err(Error::Parse("non-finite entry".into()))
            }
        })
        .collect()
}

fn check_size(num_qubits: usize, max: usize, len: usize, per_dim: u32) -> Result<()> {
    if num_qubits == 0 || num_qubits > max {
        return Err(Error::InvalidParameter(format!(
            "num_qubits must be in 1..={max}, got {num_qubits}"
        )));
    }
    let expected = 1usize << (per_dim as usize * num_qubits);
    if len != expected {
        return Err(Error::DimensionMismatch { expected, actual: len });
    }
    Ok(())
}

pub fn pure_to_json(state: &PureState) -> String {
    let dump = PureDump {
        num_qubits: state.num_qubits(),
        amplitudes: pairs(state.amplitudes().iter().copied()),
    };
    serde_json::to_string(&dump).expect("plain struct serializes")
}

fn pure_from_dump(d: PureDump) -> Result<PureState> {
    check_size(d.num_qubits, MAX_PURE_QUBITS, d.amplitudes.len(), 1)?;
    PureState::new(d.num_qubits, complex(&d.amplitudes)?)
}

pub fn pure_from_json(text: &str) -> Result<PureState> {
    pure_from_dump(serde_json::from_str(text)?)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    // nalgebra stores column-major; emit row-major
    let m = rho.matrix();
    let dump = DensityDump {
        num_qubits: rho.num_qubits(),
        matrix: pairs(m.transpose().iter().copied()),
    };
    serde_json::to_string(&dump).expect("plain struct serializes")
}

fn density_from_dump(d: DensityDump) -> Result<DensityMatrix> {
    check_size(d.num_qubits, MAX_DENSITY_QUBITS, d.matrix.len(), 2)?;
    let dim = 1usize << d.num_qubits;
    let entries = complex(&d.matrix)?;
    DensityMatrix::new(d.num_qubits, DMatrix::from_row_slice(dim, dim, &entries))
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    density_from_dump(serde_json::from_str(text)?)
}

pub fn state_to_json(state: &QuantumState) -> String {
    match state {
        QuantumState::Pure(p) => pure_to_json(p),
        QuantumState::Mixed(m) => density_to_json(m),
    }
}

/// Accepts either dump format.
pub fn state_from_json(text: &str) -> Result<QuantumState> {
    match serde_json::from_str::<AnyDump>(text)
        .map_err(|e| Error::Parse(format!("not a pure-state or density-matrix dump: {e}")))?
    {
        AnyDump::Pure(d) => Ok(pure_from_dump(d)?.into()),
        AnyDump::Density(d) => Ok(density_from_dump(d)?.into()),
    }
}

pub fn read_state(path: &Path) -> Result<QuantumState> {
    state_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_state(path: &Path, state: &QuantumState) -> Result<()> {
    std::fs::write(path, state_to_json(state) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_density;
    use crate::noise::PhaseFlipChannel;
    use crate::states::{sample_haar, w};
    use proptest::prelude::*;

    #[test]
    fn pure_dump_layout() {
        let text = pure_to_json(&PureState::basis(1, 1).unwrap());
        assert_eq!(text, r#"{"num_qubits":1,"amplitudes":[[0.0,0.0],[1.0,0.0]]}"#);
    }

    #[test]
    fn density_dump_is_row_major() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.0, 0.25);
        m[(1, 0)] = C64::new(0.0, -0.25);
        let text = density_to_json(&DensityMatrix::new(1, m).unwrap());
        assert_eq!(
            text,
            r#"{"num_qubits":1,"matrix":[[0.5,0.0],[0.0,0.25],[0.0,-0.25],[0.5,0.0]]}"#
        );
    }

    #[test]
    fn round_trips_are_exact() {
        let psi = sample_haar(4, 12).unwrap();
        assert_eq!(pure_from_json(&pure_to_json(&psi)).unwrap(), psi);
        let rho = PhaseFlipChannel::new(0.3, 0.4).unwrap().apply_pure(&w(3).unwrap()).unwrap();
        assert_eq!(density_from_json(&density_to_json(&rho)).unwrap(), rho);
        let any = state_from_json(&density_to_json(&rho)).unwrap();
        assert!(!any.is_pure());
        assert!(state_from_json(&pure_to_json(&psi)).unwrap().is_pure());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(pure_from_json(r#"{"num_qubits":1,"amplitudes":[[1.0,0.0]]}"#).is_err());
        assert!(pure_from_json(r#"{"num_qubits":1,"amplitudes":[[1.0,0.0],[1.0,0.0]]}"#).is_err());
        assert!(pure_from_json(r#"{"num_qubits":64,"amplitudes":[]}"#).is_err());
        assert!(pure_from_json(r#"{"num_qubits":0,"amplitudes":[]}"#).is_err());
        assert!(pure_from_json(r#"{"num_qubits":1,"amplitudes":[[1.0,0.0],[0.0,0.0]],"x":1}"#).is_err());
        assert!(density_from_json(r#"{"num_qubits":1,"matrix":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[-0.5,0.0]]}"#).is_err());
        assert!(state_from_json("[]").is_err());
        assert!(state_from_json("{").is_err());
        let not_psd = to_density(&PureState::basis(1, 0).unwrap());
        let mut m = not_psd.into_matrix();
        m[(0, 1)] = C64::new(0.9, 0.0);
        m[(1, 0)] = C64::new(0.9, 0.0);
        let dump = DensityDump {
            num_qubits: 1,
            matrix: pairs(m.transpose().iter().copied()),
        };
        assert!(density_from_json(&serde_json::to_string(&dump).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn arbitrary_text_never_panics(text in ".{0,200}") {
            let _ = state_from_json(&text);
        }
    }
}
