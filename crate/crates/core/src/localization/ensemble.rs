use nalgebra::DMatrix;

use super::plan::{local_projectors, MeasurementPlan};
use super::QuantumState;
use crate::error::{Error, Result};
use crate::linalg::{block_entanglement, check_index, check_set, subset_offsets, DensityMatrix, PureState, C64};

/// Outcomes with probability below this are dropped from the ensemble.
pub const PRUNE_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Branch {
    pub probability: f64,
    pub outcome: Vec<u8>,
    /// Normalized post-measurement state of the unmeasured qubits.
    pub state: QuantumState,
}

/// Post-measurement ensemble over the unmeasured qubits, which keep their
/// original relative order.
#[derive(Debug, Clone)]
pub struct BranchEnsemble {
    pub kept: Vec<usize>,
    pub branches: Vec<Branch>,
}

impl BranchEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

/// Applies a local projective measurement and collects the normalized
/// branches of the remaining qubits.
pub fn measure(state: &QuantumState, plan: &MeasurementPlan) -> Result<BranchEnsemble> {
    let n = state.num_qubits();
    let measured = plan.measured();
    check_set(n, measured)?;
    let kept: Vec<usize> = (0..n).filter(|q| !measured.contains(q)).collect();
    if kept.is_empty() {
        return Err(Error::InvalidQubitSet("measurement leaves no qubits".into()));
    }
    let kept_off = subset_offsets(n, &kept);
    let meas_off = subset_offsets(n, measured);
    let mut branches = Vec::new();
    for proj in local_projectors(plan) {
        let m = proj.vectors.len();
        // ⟨b_k|x⟩ for every measured configuration x
        let bra: Vec<C64> = (0..meas_off.len())
            .map(|x| {
                proj.vectors
                    .iter()
                    .enumerate()
                    .map(|(pos, v)| v[(x >> (m - 1 - pos)) & 1].conj())
                    .product()
            })
            .collect();
        match state {
            QuantumState::Pure(psi) => {
                let amps = psi.amplitudes();
                let v: Vec<C64> = kept_off
                    .iter()
                    .map(|&r| meas_off.iter().zip(&bra).map(|(&x, b)| b * amps[r | x]).sum())
                    .collect();
                let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if p < PRUNE_PROBABILITY {
                    continue;
                }
                let branch = PureState::from_unnormalized(kept.len(), v)?;
                branches.push(Branch {
                    probability: p,
                    outcome: proj.outcome,
                    state: QuantumState::Pure(branch),
                });
            }
            QuantumState::Mixed(rho) => {
                let mat = rho.matrix();
                let k = kept_off.len();
                let sigma = DMatrix::from_fn(k, k, |r, s| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (&x, bx) in meas_off.iter().zip(&bra) {
                        for (&y, by) in meas_off.iter().zip(&bra) {
                            acc += bx * mat[(kept_off[r] | x, kept_off[s] | y)] * by.conj();
                        }
                    }
                    acc
                });
                let p = sigma.trace().re;
                if p < PRUNE_PROBABILITY {
                    continue;
                }
                let normalized = sigma / C64::new(p, 0.0);
                branches.push(Branch {
                    probability: p,
                    outcome: proj.outcome,
                    state: QuantumState::Mixed(DensityMatrix::from_parts_unchecked(kept.len(), normalized)),
                });
            }
        }
    }
    Ok(BranchEnsemble { kept, branches })
}

/// `Σ_k p_k E_hub(branch_k)` with `hub` given as an original qubit index.
pub fn average_entanglement(ensemble: &BranchEnsemble, hub: usize) -> Result<f64> {
    let pos = ensemble
        .kept
        .iter()
        .position(|&q| q == hub)
        .ok_or_else(|| Error::InvalidQubitSet(format!("hub {hub} was measured")))?;
    check_index(ensemble.kept.len(), pos)?;
    let mut total = 0.0;
    for b in &ensemble.branches {
        let e = block_entanglement(&b.state.to_density(), pos)?;
        total += b.probability * e;
    }
    Ok(total)
}
