//! Dense state and operator algebra on a qubit register.
//!
//! Qubit `0` is the most significant bit of a basis index: in an `n`-qubit
//! register, qubit `q` sits at bit position `n - 1 - q`. Every module in this
//! crate uses that ordering.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Squared-norm and trace tolerance for state invariants.
pub const NORM_TOL: f64 = 1e-10;
/// Entrywise Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a positive semidefinite density matrix.
pub const PSD_TOL: f64 = -1e-9;
/// Eigenvalues below `-NEGATIVITY_CUTOFF` count towards negativity.
pub const NEGATIVITY_CUTOFF: f64 = 1e-10;
/// Asymmetry tolerated (and symmetrized away) by [`eigen_spectrum`].
pub const HERMITIZE_TOL: f64 = 1e-8;

/// Largest register accepted from untrusted input for pure states.
pub const MAX_PURE_QUBITS: usize = 24;
/// Largest register accepted from untrusted input for density matrices.
pub const MAX_DENSITY_QUBITS: usize = 12;

#[inline]
pub(crate) fn bit_of(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

pub(crate) fn check_index(num_qubits: usize, index: usize) -> Result<()> {
    if index >= num_qubits {
        Err(Error::QubitOutOfRange { index, num_qubits })
    } else {
        Ok(())
    }
}

/// Validates a qubit set: indices in range and no duplicates. Returns the
/// set sorted ascending.
pub(crate) fn check_set(num_qubits: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidQubitSet(format!("duplicate qubit {}", w[0])));
        }
    }
    for &q in &sorted {
        check_index(num_qubits, q)?;
    }
    Ok(sorted)
}

fn mask_of(num_qubits: usize, set: &[usize]) -> usize {
    set.iter().fold(0, |m, &q| m | bit_of(num_qubits, q))
}

/// Complex amplitude vector over an ordered qubit register, normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized within [`NORM_TOL`].
    pub fn new(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::check_len(num_qubits, amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn from_unnormalized(num_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        Self::check_len(num_qubits, amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || norm_sqr <= f64::MIN_POSITIVE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let scale = 1.0 / norm_sqr.sqrt();
        for a in &mut amplitudes {
            *a *= scale;
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    fn check_len(num_qubits: usize, len: usize) -> Result<()> {
        if num_qubits == 0 || num_qubits > MAX_PURE_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "num_qubits must be in 1..={MAX_PURE_QUBITS}, got {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if len != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: len,
            });
        }
        Ok(())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_PURE_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "num_qubits must be in 1..={MAX_PURE_QUBITS}, got {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self ⊗ other`, with `self` occupying the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let num_qubits = self.num_qubits + other.num_qubits;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState::from_unnormalized(num_qubits, amplitudes)
    }

    /// Exchanges qubits `a` and `b`.
    pub fn swap_qubits(&self, a: usize, b: usize) -> Result<PureState> {
        check_index(self.num_qubits, a)?;
        check_index(self.num_qubits, b)?;
        let (ba, bb) = (bit_of(self.num_qubits, a), bit_of(self.num_qubits, b));
        let mut out = self.amplitudes.clone();
        for (idx, slot) in out.iter_mut().enumerate() {
            let has_a = idx & ba != 0;
            let has_b = idx & bb != 0;
            let src = if has_a == has_b {
                idx
            } else {
                idx ^ ba ^ bb
            };
            *slot = self.amplitudes[src];
        }
        Ok(PureState {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Maximum amplitude-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Hermitian, unit-trace, positive semidefinite operator on a qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(num_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_parts_checked(num_qubits, matrix)?;
        let spectrum = eigen_spectrum(&rho.matrix)?;
        let min = spectrum.last().copied().unwrap_or(0.0);
        if min < PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    /// Checks shape, Hermiticity and trace but skips the eigensolve.
    pub(crate) fn from_parts_checked(num_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "num_qubits must be in 1..={MAX_DENSITY_QUBITS}, got {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let asym = max_asymmetry(&matrix);
        if !asym.is_finite() || asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Internal constructor for matrices that are density matrices by construction.
    pub(crate) fn from_parts_unchecked(num_qubits: usize, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << num_qubits);
        Self { num_qubits, matrix }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub(crate) fn max_asymmetry(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(d);
        }
    }
    worst
}

/// A split of the register into two disjoint, complementary qubit sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitPartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl QubitPartition {
    pub fn new(num_qubits: usize, side_a: &[usize], side_b: &[usize]) -> Result<Self> {
        let a = check_set(num_qubits, side_a)?;
        let b = check_set(num_qubits, side_b)?;
        if a.iter().any(|q| b.contains(q)) {
            return Err(Error::InvalidQubitSet("partition sides overlap".into()));
        }
        if a.len() + b.len() != num_qubits {
            return Err(Error::InvalidQubitSet(
                "partition does not cover the register".into(),
            ));
        }
        Ok(Self {
            side_a: a,
            side_b: b,
        })
    }

    /// `side_a` against everything else.
    pub fn from_side(num_qubits: usize, side_a: &[usize]) -> Result<Self> {
        let a = check_set(num_qubits, side_a)?;
        let b: Vec<usize> = (0..num_qubits).filter(|q| !a.contains(q)).collect();
        Ok(Self {
            side_a: a,
            side_b: b,
        })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn swapped(&self) -> Self {
        Self {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    fn num_qubits(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn to_density(state: &PureState) -> DensityMatrix {
    let dim = state.dim();
    let amps = state.amplitudes();
    let matrix = DMatrix::from_fn(dim, dim, |i, j| amps[i] * amps[j].conj());
    DensityMatrix::from_parts_unchecked(state.num_qubits(), matrix)
}

/// Traces out every qubit not in `keep`. Kept qubits retain their relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    if keep.is_empty() {
        return Err(Error::InvalidQubitSet("keep set is empty".into()));
    }
    let keep = check_set(n, keep)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let kept_offsets = subset_offsets(n, &keep);
    let traced_offsets = subset_offsets(n, &traced);
    let k = kept_offsets.len();
    let m = rho.matrix();
    let out = DMatrix::from_fn(k, k, |r, c| {
        let (br, bc) = (kept_offsets[r], kept_offsets[c]);
        traced_offsets
            .iter()
            .map(|&x| m[(br | x, bc | x)])
            .sum::<C64>()
    });
    Ok(DensityMatrix::from_parts_unchecked(keep.len(), out))
}

/// Full-register basis offsets for each configuration of `subset`, in the
/// subset's own big-endian order.
pub(crate) fn subset_offsets(num_qubits: usize, subset: &[usize]) -> Vec<usize> {
    let k = subset.len();
    (0..1usize << k)
        .map(|local| {
            subset.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if local & (1 << (k - 1 - pos)) != 0 {
                    acc | bit_of(num_qubits, q)
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Partial transpose of `rho` over the qubits in `transpose_side`.
pub fn partial_transpose(rho: &DensityMatrix, transpose_side: &[usize]) -> Result<DMatrix<C64>> {
    let side = check_set(rho.num_qubits(), transpose_side)?;
    Ok(partial_transpose_raw(rho.matrix(), rho.num_qubits(), &side))
}

pub(crate) fn partial_transpose_raw(m: &DMatrix<C64>, num_qubits: usize, side: &[usize]) -> DMatrix<C64> {
    let mask = mask_of(num_qubits, side);
    let dim = m.nrows();
    DMatrix::from_fn(dim, dim, |i, j| {
        let si = (i & !mask) | (j & mask);
        let sj = (j & !mask) | (i & mask);
        m[(si, sj)]
    })
}

/// Real spectrum of a Hermitian matrix, sorted descending.
///
/// Inputs within [`HERMITIZE_TOL`] of Hermitian are symmetrized as
/// `(M + M†) / 2` first.
pub fn eigen_spectrum(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let asym = max_asymmetry(m);
    if !asym.is_finite() || asym > HERMITIZE_TOL {
        return Err(Error::NotHermitian(asym));
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Sum of the magnitudes of the negative eigenvalues of `rho` partially
/// transposed over `partition.side_b`.
pub fn negativity(rho: &DensityMatrix, partition: &QubitPartition) -> Result<f64> {
    if partition.num_qubits() != rho.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.num_qubits(),
            actual: partition.num_qubits(),
        });
    }
    let pt = partial_transpose_raw(rho.matrix(), rho.num_qubits(), partition.side_b());
    Ok(negative_mass(&eigen_spectrum(&pt)?, 1.0))
}

/// `Σ |λ|` over eigenvalues below `-NEGATIVITY_CUTOFF * scale`.
pub(crate) fn negative_mass(spectrum: &[f64], scale: f64) -> f64 {
    spectrum
        .iter()
        .filter(|&&l| l < -NEGATIVITY_CUTOFF * scale)
        .map(|l| -l)
        .sum()
}

/// Rescaled hub-versus-rest negativity, `E = 2N`, in `[0, 1]`.
pub fn block_entanglement(rho: &DensityMatrix, hub: usize) -> Result<f64> {
    if rho.num_qubits() < 2 {
        return Err(Error::InvalidParameter(
            "block entanglement needs at least two qubits".into(),
        ));
    }
    check_index(rho.num_qubits(), hub)?;
    let partition = QubitPartition::from_side(rho.num_qubits(), &[hub])?;
    Ok((2.0 * negativity(rho, &partition)?).clamp(0.0, 1.0))
}

/// Squared Schmidt coefficients of a pure state across `side_a : rest`,
/// sorted descending.
pub fn schmidt_values(state: &PureState, side_a: &[usize]) -> Result<Vec<f64>> {
    let n = state.num_qubits();
    let a = check_set(n, side_a)?;
    let b: Vec<usize> = (0..n).filter(|q| !a.contains(q)).collect();
    let rows = subset_offsets(n, &a);
    let cols = subset_offsets(n, &b);
    let amps = state.amplitudes();
    let mat = DMatrix::from_fn(rows.len(), cols.len(), |r, c| amps[rows[r] | cols[c]]);
    let mut values: Vec<f64> = mat
        .singular_values()
        .iter()
        .map(|s| s * s)
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Pure-state negativity from Schmidt values: `Σ_{i<j} √(λ_i λ_j)`.
pub fn pure_negativity(state: &PureState, side_a: &[usize]) -> Result<f64> {
    let lambdas = schmidt_values(state, side_a)?;
    let root_sum: f64 = lambdas.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok(((root_sum * root_sum - 1.0) / 2.0).max(0.0))
}

/// Hub-versus-rest `E = 2N` of a pure state, from the 2x2 reduced state of
/// the hub: `E = 2 √det ρ_hub`.
pub fn pure_block_entanglement(state: &PureState, hub: usize) -> Result<f64> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "block entanglement needs at least two qubits".into(),
        ));
    }
    check_index(n, hub)?;
    let bit = bit_of(n, hub);
    let amps = state.amplitudes();
    let (mut p0, mut p1, mut off) = (0.0, 0.0, C64::new(0.0, 0.0));
    for (idx, a) in amps.iter().enumerate() {
        if idx & bit == 0 {
            let b = amps[idx | bit];
            p0 += a.norm_sqr();
            p1 += b.norm_sqr();
            off += a * b.conj();
        }
    }
    let det = (p0 * p1 - off.norm_sqr()).max(0.0);
    Ok((2.0 * det.sqrt()).clamp(0.0, 1.0))
}
