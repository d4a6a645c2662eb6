//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. The statistical criterion 8 is slow and
//! only runs with `--ignored`, `--include-ignored` or `LOCENT_SLOW=1`.
//!
//! Reference values are computed here from first principles and do not call
//! the library's closed-form oracles, except where a criterion names one.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use locent::harness::{run_sweep_collect, wilson_interval, SampleRecord, SweepConfig, Z95};
use locent::linalg::{to_density, PureState, C64};
use locent::localization::{ble, localize, pauli_le, total_rle, LeTarget, OptimizerConfig, QuantumState};
use locent::noise::PhaseFlipChannel;
use locent::oracles::{dicke_ble_sum, monogamy_score};
use locent::states::{dicke, gghz, ghz, gw, sample_haar, w, Family, FamilySpec};

/// Slack allowed between the Pauli-restricted and the full optimizer.
const PAULI_SLACK: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

fn phase(r: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, r.random_range(0.0..2.0 * PI))
}

fn bit(num_qubits: usize, q: usize) -> usize {
    1 << (num_qubits - 1 - q)
}

/// Tracks the largest amount by which a Pauli-restricted value exceeds the
/// full optimizer on the same target.
#[derive(Default)]
struct PauliAudit {
    checked: usize,
    worst: f64,
}

impl PauliAudit {
    fn check(&mut self, state: &QuantumState, target: &LeTarget, full: f64) {
        let pauli = pauli_le(state, target, usize::MAX).expect("pauli enumeration").value;
        self.checked += 1;
        self.worst = self.worst.max(pauli - full);
    }

    fn check_records(&mut self, full: &[SampleRecord], pauli: &[SampleRecord]) {
        assert_eq!(full.len(), pauli.len());
        for (f, p) in full.iter().zip(pauli) {
            assert_eq!(f.digest, p.digest, "Pauli sweep replays the same states");
            self.checked += 1 + f.f_i.len();
            self.worst = self.worst.max(p.e - f.e);
            for (a, b) in p.f_i.iter().zip(&f.f_i) {
                self.worst = self.worst.max(a - b);
            }
        }
    }

    fn ok(&self) -> bool {
        self.worst <= PAULI_SLACK
    }

    fn describe(&self) -> String {
        format!("Pauli <= full on {} targets (worst excess {:.1e})", self.checked, self.worst.max(0.0))
    }
}

/// `2√(λ0 λ1)` of the hub's reduced state, via a 2x2 eigensolve.
fn pure_hub_entanglement(psi: &PureState, hub: usize) -> f64 {
    let n = psi.num_qubits();
    let amps = psi.amplitudes();
    let mut rho = DMatrix::<C64>::zeros(2, 2);
    for (i, a) in amps.iter().enumerate() {
        for (j, b) in amps.iter().enumerate() {
            let rest = !bit(n, hub);
            if i & rest == j & rest {
                let (x, y) = (((i & bit(n, hub)) != 0) as usize, ((j & bit(n, hub)) != 0) as usize);
                rho[(x, y)] += a * b.conj();
            }
        }
    }
    let ev = rho.symmetric_eigenvalues();
    2.0 * (ev[0].max(0.0) * ev[1].max(0.0)).sqrt()
}

/// Twice the negativity of a 4x4 two-qubit density matrix, from the
/// eigenvalues of its partial transpose on the second qubit.
fn pair_entanglement(rho: &DMatrix<C64>) -> f64 {
    let mut pt = DMatrix::<C64>::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    pt[(2 * a + d, 2 * c + b)] = rho[(2 * a + b, 2 * c + d)];
                }
            }
        }
    }
    2.0 * pt.symmetric_eigenvalues().iter().filter(|&&l| l < 0.0).map(|l| -l).sum::<f64>()
}

/// Reduced state of qubits `(a, b)` of a pure state.
fn pure_pair_state(psi: &PureState, a: usize, b: usize) -> DMatrix<C64> {
    let n = psi.num_qubits();
    let amps = psi.amplitudes();
    let keep = bit(n, a) | bit(n, b);
    let idx = |i: usize| 2 * ((i & bit(n, a) != 0) as usize) + (i & bit(n, b) != 0) as usize;
    let mut rho = DMatrix::<C64>::zeros(4, 4);
    for (i, x) in amps.iter().enumerate() {
        for (j, y) in amps.iter().enumerate() {
            if i & !keep == j & !keep {
                rho[(idx(i), idx(j))] += x * y.conj();
            }
        }
    }
    rho
}

fn c1_closed_form_pure() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut audit = PauliAudit::default();
    let (mut worst_e, mut worst_f) = (0.0f64, 0.0f64);
    for nq in 3..=8usize {
        for n in 1..nq {
            let nn = nq as f64;
            let prod = (n * (nq - n)) as f64;
            let e_ref = 2.0 * prod.sqrt() / nn;
            let f_ref = 2.0 * prod / (nn * (nn - 1.0));
            let state: QuantumState = dicke(nq, n).unwrap().into();
            worst_e = worst_e.max((state.block_entanglement(0).unwrap() - e_ref).abs());
            let total = total_rle(&state, 0, &(0..nq).collect::<Vec<_>>(), &cfg).unwrap();
            for (partner, r) in &total.terms {
                worst_f = worst_f.max((r.value - f_ref).abs());
                audit.check(&state, &LeTarget::Pair { hub: 0, partner: *partner }, r.value);
            }
        }
    }
    outcome(
        worst_e < 1e-10 && worst_f < 1e-4 && audit.ok(),
        format!("max |dE| = {worst_e:.1e} (tol 1e-10), max |dF_i| = {worst_f:.1e} (tol 1e-4); {}", audit.describe()),
    )
}

fn c2_gghz_saturation() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut r = rng(2);
    let mut audit = PauliAudit::default();
    let mut worst = 0.0f64;
    let mut worst_e = 0.0f64;
    let mut count = 0;
    for nq in 3..=6usize {
        for _ in 0..100 {
            let (a, b) = (gaussian_complex(&mut r), gaussian_complex(&mut r));
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c0, c1) = (a / norm, b / norm);
            let state: QuantumState = gghz(nq, c0, c1).unwrap().into();
            let e = state.block_entanglement(0).unwrap();
            worst_e = worst_e.max((e - 2.0 * c0.norm() * c1.norm()).abs());
            let total = total_rle(&state, 0, &(0..nq).collect::<Vec<_>>(), &cfg).unwrap();
            worst = worst.max((total.value - (nq - 1) as f64 * e).abs());
            for (partner, t) in &total.terms {
                audit.check(&state, &LeTarget::Pair { hub: 0, partner: *partner }, t.value);
            }
            count += 1;
        }
    }
    outcome(
        worst < 1e-4 && worst_e < 1e-10 && audit.ok(),
        format!(
            "{count} states, max |F_S - (N-1)E| = {worst:.1e} (tol 1e-4), max |E - 2|c0||c1|| = {worst_e:.1e}; {}",
            audit.describe()
        ),
    )
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Measuring the `M - N` auxiliary qubits in Z leaves `D(N, l)` with
/// hypergeometric weight; the block value averages `2√(l(N-l))/N`.
fn dicke_ble_reference(total: usize, region: usize, n: usize) -> f64 {
    let aux = total - region;
    (0..=n.min(region))
        .filter(|&l| n - l <= aux)
        .map(|l| {
            let p = binomial(region, l) * binomial(aux, n - l) / binomial(total, n);
            p * 2.0 * ((l * (region - l)) as f64).sqrt() / region as f64
        })
        .sum()
}

fn c3_ble_sum() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut audit = PauliAudit::default();
    let (mut worst, mut worst_lib, mut cases) = (0.0f64, 0.0f64, 0);
    for m in 3..=6usize {
        for region in 2..m {
            for n in 1..m {
                let state: QuantumState = dicke(m, n).unwrap().into();
                let measured: Vec<usize> = (region..m).collect();
                let r = ble(&state, &measured, 0, &cfg).unwrap();
                let lib = dicke_ble_sum(m, region, n).unwrap();
                worst = worst.max((r.value - lib).abs());
                worst_lib = worst_lib.max((lib - dicke_ble_reference(m, region, n)).abs());
                audit.check(&state, &LeTarget::Block { hub: 0, measured }, r.value);
                cases += 1;
            }
        }
    }
    outcome(
        worst < 1e-3 && worst_lib < 1e-12 && audit.ok(),
        format!(
            "{cases} (M, N, n) cases, max |BLE - dicke_ble_sum| = {worst:.1e} (tol 1e-3), oracle vs hypergeometric reference {worst_lib:.1e}; {}",
            audit.describe()
        ),
    )
}

fn gw_with(mags: &[f64], r: &mut ChaCha8Rng) -> PureState {
    let coeffs: Vec<C64> = mags.iter().map(|&m| phase(r) * m).collect();
    gw(&coeffs).unwrap()
}

fn sweep_pair(cfg: SweepConfig, audit: &mut PauliAudit) -> (u64, String) {
    let (full, summary) = run_sweep_collect(&cfg).unwrap();
    let mut pauli_cfg = cfg.clone();
    pauli_cfg.pauli_only = true;
    let (pauli, _) = run_sweep_collect(&pauli_cfg).unwrap();
    audit.check_records(&full, &pauli);
    let violations = summary.report.total_violations();
    let detail = format!(
        "{} x {} qubits (n0 = {}): {} violations, ratio in [{:.4}, {:.4}], {} reruns",
        summary.samples,
        cfg.num_qubits(),
        cfg.n0,
        violations,
        summary.min_ratio.unwrap_or(f64::NAN),
        summary.max_ratio.unwrap_or(f64::NAN),
        summary.reruns
    );
    (violations, detail)
}

fn c4_gw_bounds() -> Outcome {
    let mut audit = PauliAudit::default();
    let mut details = Vec::new();
    let mut violations = 0;
    for (nq, n0, props) in [(5usize, 0usize, vec![3u8, 4]), (4, 1, vec![5, 6])] {
        let mut cfg = SweepConfig::new(FamilySpec::new(Family::Gw, nq))
            .with_samples(10_000)
            .with_n0(n0)
            .with_seed(4_000 + nq as u64);
        cfg.propositions = Some(props);
        let (v, d) = sweep_pair(cfg, &mut audit);
        violations += v;
        details.push(d);
    }

    // Saturating families: equal |c_i| over the partners give the upper line,
    // a single nonzero partner gives the lower line.
    let cfg = OptimizerConfig::default();
    let mut r = rng(4);
    let (mut upper_gap, mut lower_gap) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        // S0 empty, N = 5
        let c1: f64 = r.random_range(0.1..0.95);
        let rest = ((1.0 - c1 * c1) / 4.0).sqrt();
        let state: QuantumState = gw_with(&[c1, rest, rest, rest, rest], &mut r).into();
        let e = state.block_entanglement(0).unwrap();
        let f = total_rle(&state, 0, &[0, 1, 2, 3, 4], &cfg).unwrap().value;
        upper_gap = upper_gap.max((f - 2.0 * e).abs());

        // M = 4, N0 = 1: qubit 3 is measured, N = 3
        let c1: f64 = r.random_range(0.1..0.8);
        let aux: f64 = r.random_range(0.0..(1.0 - c1 * c1).sqrt() * 0.9);
        let rest = ((1.0 - c1 * c1 - aux * aux) / 2.0).sqrt();
        let state: QuantumState = gw_with(&[c1, rest, rest, aux], &mut r).into();
        let e_s = ble(&state, &[3], 0, &cfg).unwrap().value;
        let f = total_rle(&state, 0, &[0, 1, 2], &cfg).unwrap().value;
        upper_gap = upper_gap.max((f - 2f64.sqrt() * e_s).abs());

        // lower family, S0 empty: one partner carries the excitation
        let c1: f64 = r.random_range(0.1..0.95);
        let j = r.random_range(1..5usize);
        let mut mags = [0.0; 5];
        mags[0] = c1;
        mags[j] = (1.0 - c1 * c1).sqrt();
        let state: QuantumState = gw_with(&mags, &mut r).into();
        let e = state.block_entanglement(0).unwrap();
        let f = total_rle(&state, 0, &[0, 1, 2, 3, 4], &cfg).unwrap().value;
        lower_gap = lower_gap.max((f - e).abs());
    }
    details.push(format!(
        "saturating families: max |F_S - sqrt(N-1)E| = {upper_gap:.1e}, max |F_S - E| = {lower_gap:.1e} (tol 1e-4)"
    ));
    details.push(audit.describe());
    outcome(
        violations == 0 && upper_gap < 1e-4 && lower_gap < 1e-4 && audit.ok(),
        details.join("; "),
    )
}

fn c5_haar_bounds() -> Outcome {
    let mut audit = PauliAudit::default();
    let mut details = Vec::new();
    let mut violations = 0;
    for nq in 3..=5usize {
        let cfg = SweepConfig::new(FamilySpec::new(Family::Haar, nq))
            .with_samples(10_000)
            .with_seed(5_000 + nq as u64);
        let t = Instant::now();
        let (v, d) = sweep_pair(cfg, &mut audit);
        violations += v;
        details.push(format!("{d} in {:.0} s", t.elapsed().as_secs_f64()));
    }
    details.push(audit.describe());
    outcome(violations == 0 && audit.ok(), details.join("; "))
}

fn c6_channel() -> Outcome {
    let mut r = rng(6);
    let (mut worst_scale, mut worst_compose) = (0.0f64, 0.0f64);
    for k in 0..1000u64 {
        let psi = sample_haar(3, 60_000 + k).unwrap();
        let q: f64 = r.random_range(0.0..=1.0);
        let eta: f64 = r.random_range(0.0..=1.0);
        let f = q * (1.0 + eta * (1.0 - q / 2.0));
        let rho = to_density(&psi);
        let out = PhaseFlipChannel::new(q, eta).unwrap().apply_pure(&psi).unwrap();
        for i in 0..8usize {
            for j in 0..8 {
                let d = (i ^ j).count_ones() as i32;
                let expect = rho.matrix()[(i, j)] * (1.0 - f).powi(d);
                worst_scale = worst_scale.max((out.matrix()[(i, j)] - expect).norm());
            }
        }

        // two Markovian channels compose to one with 1 - q = (1 - q1)(1 - q2)
        let (q1, q2): (f64, f64) = (r.random_range(0.0..=1.0), r.random_range(0.0..=1.0));
        let twice = PhaseFlipChannel::markovian(q2)
            .unwrap()
            .apply_density(PhaseFlipChannel::markovian(q1).unwrap().apply_pure(&psi).unwrap())
            .unwrap();
        let once = PhaseFlipChannel::markovian(q1 + q2 - q1 * q2).unwrap().apply_pure(&psi).unwrap();
        worst_compose = worst_compose.max((twice.matrix() - once.matrix()).camax());
    }
    outcome(
        worst_scale < 1e-10 && worst_compose < 1e-10,
        format!("1000 states: max off-diagonal error {worst_scale:.1e}, max composition error {worst_compose:.1e} (tol 1e-10)"),
    )
}

fn noisy_w_e(nq: usize, q: f64, eta: f64) -> f64 {
    let rho = PhaseFlipChannel::new(q, eta).unwrap().apply_pure(&w(nq).unwrap()).unwrap();
    QuantumState::from(rho).block_entanglement(0).unwrap()
}

fn c7_noisy_w() -> Outcome {
    let mut worst = 0.0f64;
    let mut points = 0;
    for nq in 3..=6usize {
        for k in 0..=10 {
            let q = k as f64 / 10.0;
            for eta in [0.0, 0.5, 0.9] {
                let f = q * (1.0 + eta * (1.0 - q / 2.0));
                let expect = 2.0 * (1.0 - f).powi(2) * ((nq - 1) as f64).sqrt() / nq as f64;
                worst = worst.max((noisy_w_e(nq, q, eta) - expect).abs());
                points += 1;
            }
        }
    }
    // E is a double zero in q, so locate its minimum by golden-section search.
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.4, 0.8);
    while b - a > 1e-9 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if noisy_w_e(3, x1, 0.9) < noisy_w_e(3, x2, 0.9) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let root = (a + b) / 2.0;
    outcome(
        worst < 1e-6 && (root - 0.61616).abs() < 1e-3,
        format!(
            "{points} grid points, max |E - 2(1-f)^2 sqrt(N-1)/N| = {worst:.1e} (tol 1e-6); zero at eta = 0.9 located at q = {root:.6} (target 0.61616 +- 1e-3)"
        ),
    )
}

fn c8_noisy_fractions() -> Outcome {
    let mut cfg = SweepConfig::new(FamilySpec::new(Family::SymmetricSuperposition, 4))
        .with_samples(100_000)
        .with_channel(PhaseFlipChannel::markovian(0.2).unwrap())
        .with_seed(8_000);
    cfg.propositions = Some(vec![1]);
    let (_, summary) = run_sweep_collect(&cfg).unwrap();
    let stats = summary.report.get(1).unwrap();
    let below = stats.lower_violations();
    let w = wilson_interval(below, stats.checked, Z95);
    let overlaps = w.high >= 1e-4 && w.low <= 3e-3;
    outcome(
        below > 0 && overlaps,
        format!(
            "{below} of {} records with E > F_S: fraction {:.4}% with 95% Wilson interval [{:.4}%, {:.4}%] (target overlap with [0.01%, 0.3%]); {} upper violations",
            stats.checked,
            100.0 * w.estimate,
            100.0 * w.low,
            100.0 * w.high,
            stats.upper_violations()
        ),
    )
}

/// Average pair entanglement of qubits (0, 1) after measuring qubit 2 of a
/// pure state in the basis `(θ, φ)`, from the two unnormalized branches.
fn grid_value(psi: &PureState, theta: f64, phi: f64) -> f64 {
    let a = psi.amplitudes();
    let e = C64::from_polar(1.0, phi);
    let b0 = [C64::new((theta / 2.0).cos(), 0.0), e * (theta / 2.0).sin()];
    let b1 = [C64::new((theta / 2.0).sin(), 0.0), -e * (theta / 2.0).cos()];
    [b0, b1]
        .iter()
        .map(|b| {
            // ⟨b|_2 applied to |ψ⟩; qubit 2 is the least significant bit
            let v: Vec<C64> = (0..4).map(|k| b[0].conj() * a[2 * k] + b[1].conj() * a[2 * k + 1]).collect();
            2.0 * (v[0] * v[3] - v[1] * v[2]).norm()
        })
        .sum()
}

fn c9_optimizer_soundness() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut audit = PauliAudit::default();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..50u64 {
        let psi = sample_haar(3, 90_000 + k).unwrap();
        let mut grid = 0.0f64;
        for i in 0..=20 {
            for j in 0..40 {
                grid = grid.max(grid_value(&psi, i as f64 * PI / 20.0, j as f64 * PI / 20.0));
            }
        }
        let state: QuantumState = psi.into();
        let target = LeTarget::Pair { hub: 0, partner: 1 };
        let best = localize(&state, &target, &cfg).unwrap().value;
        worst = worst.max(grid - best);
        audit.check(&state, &target, best);
    }
    outcome(
        worst <= 1e-3 && audit.ok(),
        format!(
            "50 states: max (grid - optimizer) = {worst:.1e} (must be <= 1e-3); {}; the other criteria audit every state they localize",
            audit.describe()
        ),
    )
}

fn c10_monogamy() -> Outcome {
    let mut ghz_gap = 0.0f64;
    for nq in 3..=6 {
        let d = monogamy_score(&ghz(nq).unwrap().into(), 0).unwrap();
        ghz_gap = ghz_gap.max((d - 1.0).abs());
    }

    // singlet on (0, 1) with the remaining qubits in fixed product states
    let mut product_gap = 0.0f64;
    let mut r = rng(10);
    for extra in 1..=3usize {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amps = vec![C64::new(0.0, 0.0), s, -s, C64::new(0.0, 0.0)];
        for _ in 0..extra {
            let (x, y) = (gaussian_complex(&mut r), gaussian_complex(&mut r));
            let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
            amps = amps.iter().flat_map(|a| [a * x / n, a * y / n]).collect();
        }
        let psi = PureState::new(2 + extra, amps).unwrap();
        let d = monogamy_score(&psi.into(), 0).unwrap();
        product_gap = product_gap.max(d.abs());
    }

    let w3 = w(3).unwrap();
    let derived = pure_hub_entanglement(&w3, 0)
        - pair_entanglement(&pure_pair_state(&w3, 0, 1))
        - pair_entanglement(&pure_pair_state(&w3, 0, 2));
    let closed = 2.0 * 2f64.sqrt() / 3.0 - 2.0 * (5f64.sqrt() - 1.0) / 3.0;
    let score = monogamy_score(&w3.into(), 0).unwrap();
    let quoted = 0.11874;
    outcome(
        ghz_gap < 1e-12 && product_gap < 1e-10 && (score - derived).abs() < 1e-5 && (derived - closed).abs() < 1e-12,
        format!(
            "GHZ max |D - 1| = {ghz_gap:.1e}; singlet x products max |D| = {product_gap:.1e}; D(W3) = {score:.7} vs eigensolve {derived:.7} (tol 1e-5), closed form {closed:.7}; quoted 0.11874 differs from the closed form by {:.1e}",
            (closed - quoted).abs()
        ),
    )
}

type Criterion = (u8, &'static str, f64, fn() -> Outcome);

const CRITERIA: [Criterion; 10] = [
    (1, "closed-form agreement (pure Dicke)", 300.0, c1_closed_form_pure),
    (2, "gGHZ saturation", 120.0, c2_gghz_saturation),
    (3, "BLE sum formula", 600.0, c3_ble_sum),
    (4, "gW bounds", 1800.0, c4_gw_bounds),
    (5, "Haar bounds", 3600.0, c5_haar_bounds),
    (6, "channel certification", 60.0, c6_channel),
    (7, "noisy W closed forms", 300.0, c7_noisy_w),
    (8, "noisy violation fractions (slow)", 4.0 * 3600.0, c8_noisy_fractions),
    (9, "optimizer soundness", 300.0, c9_optimizer_soundness),
    (10, "monogamy oracle", 60.0, c10_monogamy),
];

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        for (id, name, _, _) in CRITERIA {
            println!("criterion_{id:02}: test  # {name}");
        }
        return;
    }
    let slow = args.iter().any(|a| a == "--ignored" || a == "--include-ignored")
        || std::env::var("LOCENT_SLOW").is_ok_and(|v| v == "1");
    let only: Vec<u8> = args.iter().filter_map(|a| a.parse().ok()).collect();

    let mut failed = Vec::new();
    for (id, name, budget, run) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        if id == 8 && !slow && !only.contains(&8) {
            println!("criterion {id:>2} {name}: SKIPPED (slow; run with --ignored or LOCENT_SLOW=1)");
            continue;
        }
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = out.pass && secs < budget;
        println!(
            "criterion {id:>2} {name}: {} [{secs:.1} s of {budget:.0} s] {}",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria run passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
