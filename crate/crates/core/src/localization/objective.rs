//! Fast evaluation of the average localized entanglement for a given set of
//! measurement angles.
//!
//! The register is permuted once so that the unmeasured qubits (hub first)
//! occupy the most significant positions. Each evaluation then projects out
//! the measured qubits one at a time from the least significant end, and
//! scores the unnormalized branches directly: `p_k E(ψ_k / √p_k)` equals the
//! unnormalized expression because negativity is homogeneous.

use nalgebra::DMatrix;

use super::plan::basis_vectors;
use super::QuantumState;
use crate::linalg::{NEGATIVITY_CUTOFF, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

enum Data {
    Pure(Vec<C64>),
    /// Row-major density matrix.
    Mixed(Vec<C64>),
}

pub(crate) struct Localizer {
    num_kept: usize,
    num_measured: usize,
    data: Data,
    buf_a: Vec<C64>,
    buf_b: Vec<C64>,
    /// Conjugated basis vectors `⟨b_o|x⟩` per measured qubit.
    bras: Vec<[[C64; 2]; 2]>,
    evaluations: usize,
}

impl Localizer {
    /// `kept` lists the unmeasured qubits with the hub first; `kept` and
    /// `measured` must partition the register.
    pub(crate) fn new(state: &QuantumState, kept: &[usize], measured: &[usize]) -> Self {
        let n = state.num_qubits();
        debug_assert_eq!(kept.len() + measured.len(), n);
        let order: Vec<usize> = kept.iter().chain(measured).copied().collect();
        let dim = 1usize << n;
        let perm: Vec<usize> = (0..dim)
            .map(|t| {
                order.iter().enumerate().fold(0, |acc, (pos, &q)| {
                    if t >> (n - 1 - pos) & 1 == 1 {
                        acc | 1 << (n - 1 - q)
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let (data, buf_len) = match state {
            QuantumState::Pure(psi) => {
                let amps = psi.amplitudes();
                (Data::Pure(perm.iter().map(|&p| amps[p]).collect()), dim)
            }
            QuantumState::Mixed(rho) => {
                let m = rho.matrix();
                let mut v = Vec::with_capacity(dim * dim);
                for &r in &perm {
                    for &c in &perm {
                        v.push(m[(r, c)]);
                    }
                }
                (Data::Mixed(v), dim * dim / 2)
            }
        };
        let buf_len = if measured.is_empty() { 0 } else { buf_len };
        Self {
            num_kept: kept.len(),
            num_measured: measured.len(),
            data,
            buf_a: vec![ZERO; buf_len],
            buf_b: vec![ZERO; buf_len],
            bras: vec![[[ZERO; 2]; 2]; measured.len()],
            evaluations: 0,
        }
    }

    pub(crate) fn num_params(&self) -> usize {
        2 * self.num_measured
    }

    pub(crate) fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Average entanglement for angles `[θ0, φ0, θ1, φ1, …]` in measured order.
    pub(crate) fn value(&mut self, angles: &[f64]) -> f64 {
        debug_assert_eq!(angles.len(), self.num_params());
        self.evaluations += 1;
        for (bra, a) in self.bras.iter_mut().zip(angles.chunks_exact(2)) {
            let b = basis_vectors(a[0], a[1]);
            *bra = [[b[0][0].conj(), b[0][1].conj()], [b[1][0].conj(), b[1][1].conj()]];
        }
        let m = self.num_measured;
        let n = self.num_kept + m;
        let pure = matches!(self.data, Data::Pure(_));
        let src0: &[C64] = match &self.data {
            Data::Pure(v) | Data::Mixed(v) => v,
        };
        if m == 0 {
            return finish(src0, self.num_kept, pure);
        }
        let (a, b) = (&mut self.buf_a, &mut self.buf_b);
        for t in 0..m {
            let bra = &self.bras[m - 1 - t];
            let (src, dst): (&[C64], &mut [C64]) = match t {
                0 => (src0, a.as_mut_slice()),
                t if t % 2 == 1 => (a.as_slice(), b.as_mut_slice()),
                _ => (b.as_slice(), a.as_mut_slice()),
            };
            let width = 1usize << (n - t);
            if pure {
                let used = 1usize << n;
                contract_pure(&src[..used], &mut dst[..used], width, bra);
            } else {
                let used = (1usize << t) * width * width;
                contract_mixed(&src[..used], &mut dst[..used / 2], width, bra);
            }
        }
        let out = if m % 2 == 1 { &self.buf_a } else { &self.buf_b };
        let k = self.num_kept;
        let used = if pure { 1usize << n } else { (1usize << m) << (2 * k) };
        finish(&out[..used], k, pure)
    }
}

fn contract_pure(src: &[C64], dst: &mut [C64], width: usize, bra: &[[C64; 2]; 2]) {
    let half = width / 2;
    for (beta, block) in src.chunks_exact(width).enumerate() {
        for (o, u) in bra.iter().enumerate() {
            let out = &mut dst[(2 * beta + o) * half..][..half];
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = u[0] * block[2 * j] + u[1] * block[2 * j + 1];
            }
        }
    }
}

fn contract_mixed(src: &[C64], dst: &mut [C64], width: usize, bra: &[[C64; 2]; 2]) {
    let half = width / 2;
    for (beta, block) in src.chunks_exact(width * width).enumerate() {
        for (o, u) in bra.iter().enumerate() {
            let (v0, v1) = (u[0].conj(), u[1].conj());
            let out = &mut dst[(2 * beta + o) * half * half..][..half * half];
            for i in 0..half {
                let r0 = &block[2 * i * width..][..width];
                let r1 = &block[(2 * i + 1) * width..][..width];
                for j in 0..half {
                    let c0 = u[0] * r0[2 * j] + u[1] * r1[2 * j];
                    let c1 = u[0] * r0[2 * j + 1] + u[1] * r1[2 * j + 1];
                    out[i * half + j] = c0 * v0 + c1 * v1;
                }
            }
        }
    }
}

fn finish(branches: &[C64], num_kept: usize, pure: bool) -> f64 {
    let k = 1usize << num_kept;
    if pure {
        branches.chunks_exact(k).map(pure_branch_value).sum()
    } else {
        branches
            .chunks_exact(k * k)
            .map(|s| mixed_branch_value(s, k))
            .sum()
    }
}

/// `2 √(det ρ_hub)` of an unnormalized vector with the hub as the top qubit.
fn pure_branch_value(v: &[C64]) -> f64 {
    if v.len() == 4 {
        return 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
    }
    let (lo, hi) = v.split_at(v.len() / 2);
    let mut p0 = 0.0;
    let mut p1 = 0.0;
    let mut off = ZERO;
    for (a, b) in lo.iter().zip(hi) {
        p0 += a.norm_sqr();
        p1 += b.norm_sqr();
        off += a * b.conj();
    }
    2.0 * (p0 * p1 - off.norm_sqr()).max(0.0).sqrt()
}

/// `2N` of an unnormalized `k × k` operator across hub : rest, capped at its trace.
fn mixed_branch_value(s: &[C64], k: usize) -> f64 {
    let p: f64 = (0..k).map(|i| s[i * k + i].re).sum();
    if p <= 0.0 {
        return 0.0;
    }
    let neg = if k == 4 {
        let mut pt = [[ZERO; 4]; 4];
        for (r, row) in pt.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                // transpose the low qubit
                let (hr, ir, hc, ic) = (r >> 1, r & 1, c >> 1, c & 1);
                *slot = s[(2 * hr + ic) * 4 + 2 * hc + ir];
            }
        }
        let lmin = two_qubit_min_negative_eigenvalue(&pt);
        if lmin < -NEGATIVITY_CUTOFF * p {
            -lmin
        } else {
            0.0
        }
    } else {
        let mask = k / 2;
        let pt = DMatrix::from_fn(k, k, |i, j| {
            let si = (i & !mask) | (j & mask);
            let sj = (j & !mask) | (i & mask);
            let z = s[si * k + sj];
            let zt = s[sj * k + si].conj();
            (z + zt) * 0.5
        });
        pt.symmetric_eigenvalues()
            .iter()
            .filter(|&&l| l < -NEGATIVITY_CUTOFF * p)
            .map(|l| -l)
            .sum()
    };
    (2.0 * neg).min(p)
}

/// Smallest eigenvalue of a Hermitian 4x4 matrix when it is the only
/// negative one (the case for partial transposes of two-qubit states);
/// returns 0 when the determinant is nonnegative.
pub(crate) fn two_qubit_min_negative_eigenvalue(a: &[[C64; 4]; 4]) -> f64 {
    let mut a2 = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a2[i][j] = (0..4).map(|l| a[i][l] * a[l][j]).sum();
        }
    }
    let mut p1 = 0.0;
    let mut p2 = 0.0;
    let mut p3 = 0.0;
    let mut p4 = 0.0;
    for i in 0..4 {
        p1 += a[i][i].re;
        for j in 0..4 {
            p2 += a[i][j].norm_sqr();
            p3 += (a2[i][j] * a[j][i]).re;
            p4 += a2[i][j].norm_sqr();
        }
    }
    // Newton's identities
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    let e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;
    if e4 >= 0.0 {
        return 0.0;
    }
    let poly = |x: f64| (((x - e1) * x + e2) * x - e3) * x + e4;
    let deriv = |x: f64| ((4.0 * x - 3.0 * e1) * x + 2.0 * e2) * x - e3;
    // Left of every root the quartic is decreasing and convex, so Newton from
    // a lower bound on the spectrum increases monotonically to the root.
    let mut x = -p2.sqrt();
    for _ in 0..200 {
        let d = deriv(x);
        if d >= 0.0 {
            break;
        }
        let step = poly(x) / d;
        let next = x - step;
        if next.is_nan() || next <= x {
            break;
        }
        x = next;
        if step.abs() <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x.min(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{to_density, DensityMatrix};
    use crate::localization::ensemble::{average_entanglement, measure};
    use crate::localization::plan::MeasurementPlan;
    use crate::noise::PhaseFlipChannel;
    use crate::states::{complex_gaussians, rng_for, sample_haar};
    use proptest::prelude::*;

    fn reference(state: &QuantumState, hub: usize, measured: &[usize], angles: &[f64]) -> f64 {
        let plan = MeasurementPlan::from_angles(measured.to_vec(), angles).unwrap();
        average_entanglement(&measure(state, &plan).unwrap(), hub).unwrap()
    }

    fn kept_for(n: usize, hub: usize, measured: &[usize]) -> Vec<usize> {
        std::iter::once(hub)
            .chain((0..n).filter(|q| *q != hub && !measured.contains(q)))
            .collect()
    }

    #[test]
    fn pure_matches_reference() {
        let psi: QuantumState = sample_haar(5, 21).unwrap().into();
        let cases: [(usize, &[usize]); 4] = [(0, &[1, 2, 3]), (2, &[4, 0]), (4, &[3]), (1, &[])];
        for (case, (hub, measured)) in cases.iter().enumerate() {
            let mut loc = Localizer::new(&psi, &kept_for(5, *hub, measured), measured);
            let mut rng = rng_for(case as u64);
            for _ in 0..5 {
                let angles: Vec<f64> = complex_gaussians(&mut rng, measured.len())
                    .iter()
                    .flat_map(|z| [z.re, z.im])
                    .collect();
                let fast = loc.value(&angles);
                let slow = reference(&psi, *hub, measured, &angles);
                assert!((fast - slow).abs() < 1e-10, "{fast} vs {slow}");
            }
        }
    }

    #[test]
    fn mixed_matches_reference() {
        let rho = PhaseFlipChannel::new(0.3, 0.6)
            .unwrap()
            .apply_pure(&sample_haar(4, 8).unwrap())
            .unwrap();
        let state: QuantumState = rho.into();
        let cases: [(usize, &[usize]); 3] = [(0, &[1, 3]), (3, &[2]), (1, &[])];
        for (hub, measured) in cases {
            let mut loc = Localizer::new(&state, &kept_for(4, hub, measured), measured);
            let angles: Vec<f64> = (0..2 * measured.len()).map(|i| 0.4 + 0.7 * i as f64).collect();
            let fast = loc.value(&angles);
            let slow = reference(&state, hub, measured, &angles);
            assert!((fast - slow).abs() < 1e-10, "{fast} vs {slow}");
        }
    }

    #[test]
    fn pure_and_mixed_fast_routes_agree() {
        let psi = sample_haar(4, 2).unwrap();
        let measured = [2, 3];
        let kept = kept_for(4, 1, &measured);
        let angles = [0.2, 1.3, 2.9, 5.0];
        let a = Localizer::new(&psi.clone().into(), &kept, &measured).value(&angles);
        let b = Localizer::new(&to_density(&psi).into(), &kept, &measured).value(&angles);
        assert!((a - b).abs() < 1e-10);
    }

    fn random_two_qubit_state(seed: u64, rank: usize) -> DensityMatrix {
        let mut rng = rng_for(seed);
        let z = complex_gaussians(&mut rng, 4 * rank);
        let g = DMatrix::from_column_slice(4, rank, &z);
        let m = &g * g.adjoint();
        let tr = m.trace();
        DensityMatrix::new(2, m / tr).unwrap()
    }

    proptest! {
        #[test]
        fn quartic_root_matches_eigensolver(seed in 0u64..10_000, rank in 1usize..=4) {
            let rho = random_two_qubit_state(seed, rank);
            let pt = crate::linalg::partial_transpose(&rho, &[1]).unwrap();
            let mut arr = [[ZERO; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    arr[i][j] = pt[(i, j)];
                }
            }
            let fast = two_qubit_min_negative_eigenvalue(&arr);
            let spectrum = crate::linalg::eigen_spectrum(&pt).unwrap();
            let exact = spectrum.last().copied().unwrap().min(0.0);
            prop_assert!((fast - exact).abs() < 1e-10, "{} vs {}", fast, exact);
        }
    }
}
