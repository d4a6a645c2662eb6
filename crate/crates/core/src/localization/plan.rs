use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// Bloch angles `(θ, φ)` of the `+1` eigenvector.
    pub fn angles(self) -> (f64, f64) {
        match self {
            PauliAxis::X => (FRAC_PI_2, 0.0),
            PauliAxis::Y => (FRAC_PI_2, FRAC_PI_2),
            PauliAxis::Z => (0.0, 0.0),
        }
    }
}

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Angles { theta: f64, phi: f64 },
    Pauli(PauliAxis),
}

impl Basis {
    pub fn angles(self) -> (f64, f64) {
        match self {
            Basis::Angles { theta, phi } => (theta, phi),
            Basis::Pauli(axis) => axis.angles(),
        }
    }
}

/// Basis vectors `[b0, b1]` as `[⟨0|b⟩, ⟨1|b⟩]`:
///
/// `|b0⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`,
/// `|b1⟩ = sin(θ/2)|0⟩ - e^{iφ} cos(θ/2)|1⟩`.
///
/// Valid for any real angles; [`canonical_angles`] maps them into range.
#[inline]
pub fn basis_vectors(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, phi);
    [[C64::new(c, 0.0), phase * s], [C64::new(s, 0.0), -phase * c]]
}

/// Maps arbitrary angles onto `θ ∈ [0, π]`, `φ ∈ [0, 2π)` describing the
/// same pair of projectors.
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(TAU);
    let mut p = phi;
    if t > PI {
        // b0(2π - θ, φ) = -b0(θ, φ + π)
        t = TAU - t;
        p += PI;
    }
    (t, p.rem_euclid(TAU))
}

/// Local rank-1 projective measurement on an ordered set of qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    measured: Vec<usize>,
    bases: Vec<Basis>,
}

impl MeasurementPlan {
    pub fn new(measured: Vec<usize>, bases: Vec<Basis>) -> Result<Self> {
        if measured.len() != bases.len() {
            return Err(Error::InvalidParameter(format!(
                "{} measured qubits but {} bases",
                measured.len(),
                bases.len()
            )));
        }
        for b in &bases {
            if let Basis::Angles { theta, phi } = *b {
                if !(0.0..=PI).contains(&theta) || !(0.0..TAU).contains(&phi) {
                    return Err(Error::InvalidParameter(format!(
                        "angles (θ = {theta}, φ = {phi}) outside θ ∈ [0, π], φ ∈ [0, 2π)"
                    )));
                }
            }
        }
        let mut sorted = measured.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidQubitSet("duplicate measured qubit".into()));
        }
        Ok(Self { measured, bases })
    }

    /// Flat angle vector `[θ0, φ0, θ1, φ1, …]`, canonicalized.
    pub fn from_angles(measured: Vec<usize>, angles: &[f64]) -> Result<Self> {
        if angles.len() != 2 * measured.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} angles, got {}",
                2 * measured.len(),
                angles.len()
            )));
        }
        let bases = angles
            .chunks(2)
            .map(|a| {
                let (theta, phi) = canonical_angles(a[0], a[1]);
                Basis::Angles { theta, phi }
            })
            .collect();
        Self::new(measured, bases)
    }

    pub fn pauli(measured: Vec<usize>, axes: &[PauliAxis]) -> Result<Self> {
        Self::new(measured, axes.iter().map(|&a| Basis::Pauli(a)).collect())
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn angle_vector(&self) -> Vec<f64> {
        self.bases
            .iter()
            .flat_map(|b| {
                let (t, p) = b.angles();
                [t, p]
            })
            .collect()
    }
}

/// Product projector `⊗_j |b_{k_j}⟩⟨b_{k_j}|` for one outcome string `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeProjector {
    pub outcome: Vec<u8>,
    /// Basis vector selected on each measured qubit.
    pub vectors: Vec<[C64; 2]>,
}

impl OutcomeProjector {
    /// Dense `2^m × 2^m` matrix over the measured qubits in plan order.
    pub fn to_matrix(&self) -> DMatrix<C64> {
        let m = self.vectors.len();
        let dim = 1usize << m;
        let amp = |idx: usize| -> C64 {
            self.vectors
                .iter()
                .enumerate()
                .map(|(pos, v)| v[(idx >> (m - 1 - pos)) & 1])
                .product()
        };
        DMatrix::from_fn(dim, dim, |i, j| amp(i) * amp(j).conj())
    }
}

/// All `2^m` outcome projectors of a plan, outcomes in big-endian order.
pub fn local_projectors(plan: &MeasurementPlan) -> Vec<OutcomeProjector> {
    let m = plan.measured.len();
    let per_qubit: Vec<[[C64; 2]; 2]> = plan
        .bases
        .iter()
        .map(|b| {
            let (t, p) = b.angles();
            basis_vectors(t, p)
        })
        .collect();
    (0..1usize << m)
        .map(|k| {
            let outcome: Vec<u8> = (0..m).map(|pos| ((k >> (m - 1 - pos)) & 1) as u8).collect();
            let vectors = outcome
                .iter()
                .zip(&per_qubit)
                .map(|(&o, b)| b[o as usize])
                .collect();
            OutcomeProjector { outcome, vectors }
        })
        .collect()
}
