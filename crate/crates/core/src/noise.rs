//! Local phase-flip channels, Markovian (`eta = 0`) and non-Markovian.
//!
//! Each targeted qubit undergoes `ρ → p0 ρ + p1 σᶻ ρ σᶻ`. Channels on distinct
//! qubits commute, so the full Kraus sum is applied one qubit at a time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bit_of, check_set, to_density, DensityMatrix, PureState};
use crate::localization::QuantumState;

fn check_params(q: f64, eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("noise strength q = {q} not in [0, 1]")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "non-Markovianity eta = {eta} not in [0, 1]"
        )));
    }
    Ok(())
}

/// Kraus weights `(p0, p1)` of the identity and `σᶻ` branches.
pub fn branch_probabilities(q: f64, eta: f64) -> Result<(f64, f64)> {
    check_params(q, eta)?;
    if eta == 0.0 {
        return Ok((1.0 - q / 2.0, q / 2.0));
    }
    let p0 = (1.0 - q / 2.0) * (1.0 - eta * q / 2.0);
    let p1 = (1.0 + eta * (1.0 - q / 2.0)) * q / 2.0;
    Ok((p0, p1))
}

/// Coherence-decay factor `f = q [1 + η (1 - q/2)]`; off-diagonal elements
/// scale by `1 - f` per differing qubit. `f` exceeds 1 for strong
/// non-Markovian noise, so `1 - f` is a signed factor.
pub fn f_factor(q: f64, eta: f64) -> Result<f64> {
    check_params(q, eta)?;
    Ok(q * (1.0 + eta * (1.0 - q / 2.0)))
}

/// Noise strength at which `f(q, eta) = 1`, if one exists in `[0, 1]`.
pub fn coherence_zero(eta: f64) -> Result<Option<f64>> {
    check_params(0.0, eta)?;
    // η q²/2 - (1 + η) q + 1 = 0
    let q = if eta == 0.0 {
        1.0
    } else {
        let a = eta / 2.0;
        let b = -(1.0 + eta);
        let disc = b * b - 4.0 * a;
        (-b - disc.sqrt()) / (2.0 * a)
    };
    Ok((0.0..=1.0).contains(&q).then_some(q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseFlipChannel {
    pub q: f64,
    #[serde(default)]
    pub eta: f64,
    /// Qubits the channel acts on; `None` means every qubit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_qubits: Option<Vec<usize>>,
}

impl PhaseFlipChannel {
    pub fn new(q: f64, eta: f64) -> Result<Self> {
        check_params(q, eta)?;
        Ok(Self {
            q,
            eta,
            target_qubits: None,
        })
    }

    pub fn markovian(q: f64) -> Result<Self> {
        Self::new(q, 0.0)
    }

    pub fn on_qubits(mut self, targets: Vec<usize>) -> Self {
        self.target_qubits = Some(targets);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.q, self.eta)
    }

    pub fn probabilities(&self) -> Result<(f64, f64)> {
        branch_probabilities(self.q, self.eta)
    }

    pub fn f(&self) -> Result<f64> {
        f_factor(self.q, self.eta)
    }

    fn targets(&self, num_qubits: usize) -> Result<Vec<usize>> {
        match &self.target_qubits {
            Some(t) => check_set(num_qubits, t),
            None => Ok((0..num_qubits).collect()),
        }
    }

    /// Applies the channel to every target qubit.
    pub fn apply(&self, state: &QuantumState) -> Result<DensityMatrix> {
        let rho = match state {
            QuantumState::Pure(p) => to_density(p),
            QuantumState::Mixed(m) => m.clone(),
        };
        self.apply_density(rho)
    }

    pub fn apply_pure(&self, state: &PureState) -> Result<DensityMatrix> {
        self.apply_density(to_density(state))
    }

    pub fn apply_density(&self, rho: DensityMatrix) -> Result<DensityMatrix> {
        let (p0, p1) = self.probabilities()?;
        let n = rho.num_qubits();
        let targets = self.targets(n)?;
        let mut m = rho.into_matrix();
        let dim = m.nrows();
        for q in targets {
            let bit = bit_of(n, q);
            // σᶻ ρ σᶻ flips the sign of entries whose row and column differ on `q`.
            for j in 0..dim {
                for i in 0..dim {
                    if (i ^ j) & bit != 0 {
                        let z = m[(i, j)];
                        m[(i, j)] = z * p0 - z * p1;
                    }
                }
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(n, m))
    }
}
