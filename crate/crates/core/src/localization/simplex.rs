use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::objective::Localizer;
use super::plan::{canonical_angles, PauliAxis};
use crate::states::rng_for;

/// Objective values below this are reported as exactly zero.
pub const ZERO_FLOOR: f64 = 1e-9;

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;
const INITIAL_STEP: f64 = 0.5;
const POLISH_STEP: f64 = 0.05;

fn default_restarts() -> usize {
    24
}
fn default_max_iterations() -> usize {
    400
}
fn default_tolerance() -> f64 {
    1e-7
}
fn default_pauli_warm_start() -> usize {
    8
}

/// Multi-start Nelder–Mead settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Random starts, run after the deterministic warm starts.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Stop once the simplex values span less than this.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Enumerate every Pauli setting as a warm start when at most this many
    /// qubits are measured.
    #[serde(default = "default_pauli_warm_start")]
    pub pauli_warm_start: usize,
    #[serde(default)]
    pub trace: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: default_restarts(),
            max_iterations: default_max_iterations(),
            tolerance: default_tolerance(),
            seed: 0,
            pauli_warm_start: default_pauli_warm_start(),
            trace: false,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    BestPauli,
    Uniform(PauliAxis),
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub start: usize,
    pub kind: StartKind,
    pub initial: f64,
    pub objective: f64,
    pub iterations: usize,
    pub angles: Vec<f64>,
}

pub(crate) struct Optimum {
    pub value: f64,
    pub angles: Vec<f64>,
    pub starts: usize,
    pub trace: Vec<RestartTrace>,
}

struct SimplexRun {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
}

fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    f0: f64,
    step: f64,
    max_iterations: usize,
    tolerance: f64,
) -> SimplexRun {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    vals.push(f0);
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        vals.push(f(&p));
        pts.push(p);
    }
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut iterations = 0;
    while iterations < max_iterations {
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if vals[best] - vals[worst] <= tolerance {
            break;
        }
        iterations += 1;
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x / n as f64;
            }
        }
        let along = |t: &mut Vec<f64>, coef: f64, from: &[f64]| {
            for ((o, c), x) in t.iter_mut().zip(&centroid).zip(from) {
                *o = c + coef * (x - c);
            }
        };
        along(&mut trial, -ALPHA, &pts[worst]);
        let reflected = trial.clone();
        let fr = f(&reflected);
        if fr > vals[best] {
            along(&mut trial, -ALPHA * GAMMA, &pts[worst]);
            let fe = f(&trial);
            if fe > fr {
                pts[worst].copy_from_slice(&trial);
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if fr > vals[second] {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        let (coef, threshold) = if fr > vals[worst] {
            (-ALPHA * RHO, fr)
        } else {
            (RHO, vals[worst])
        };
        along(&mut trial, coef, &pts[worst]);
        let fc = f(&trial);
        if fc >= threshold {
            pts[worst].copy_from_slice(&trial);
            vals[worst] = fc;
            continue;
        }
        let anchor = pts[best].clone();
        for &i in &order[1..] {
            for (x, a) in pts[i].iter_mut().zip(&anchor) {
                *x = a + SIGMA * (*x - a);
            }
            vals[i] = f(&pts[i]);
        }
    }
    let best = (0..=n).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    SimplexRun {
        x: pts.swap_remove(best),
        value: vals[best],
        iterations,
    }
}

fn pauli_angles(axes: &[PauliAxis]) -> Vec<f64> {
    axes.iter()
        .flat_map(|a| {
            let (t, p) = a.angles();
            [t, p]
        })
        .collect()
}

/// Exhaustive search over the `3^m` Pauli settings. Ties keep the first
/// setting in `x < y < z` odometer order.
pub(crate) fn best_pauli(loc: &mut Localizer) -> (f64, Vec<PauliAxis>) {
    let m = loc.num_params() / 2;
    let mut digits = vec![0usize; m];
    let mut best = (f64::NEG_INFINITY, vec![PauliAxis::X; m]);
    loop {
        let axes: Vec<PauliAxis> = digits.iter().map(|&d| PauliAxis::ALL[d]).collect();
        let v = loc.value(&pauli_angles(&axes));
        if v > best.0 {
            best = (v, axes);
        }
        let mut pos = 0;
        while pos < m {
            digits[pos] += 1;
            if digits[pos] < 3 {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    best
}

/// Maximizes the localizer objective from warm and random starts. Each start
/// runs a simplex and then a smaller one from its optimum.
pub(crate) fn maximize(loc: &mut Localizer, cfg: &OptimizerConfig) -> Optimum {
    let np = loc.num_params();
    let m = np / 2;
    let mut starts: Vec<(StartKind, Vec<f64>)> = Vec::new();
    if m <= cfg.pauli_warm_start {
        let (_, axes) = best_pauli(loc);
        starts.push((StartKind::BestPauli, pauli_angles(&axes)));
    }
    for axis in [PauliAxis::Z, PauliAxis::X, PauliAxis::Y] {
        starts.push((StartKind::Uniform(axis), pauli_angles(&vec![axis; m])));
    }
    let mut rng = rng_for(cfg.seed);
    for _ in 0..cfg.restarts {
        let x: Vec<f64> = (0..m)
            .flat_map(|_| [rng.random_range(0.0..PI), rng.random_range(0.0..TAU)])
            .collect();
        starts.push((StartKind::Random, x));
    }

    let mut f = |x: &[f64]| loc.value(x);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut trace = Vec::new();
    let count = starts.len();
    for (i, (kind, x0)) in starts.into_iter().enumerate() {
        let f0 = f(&x0);
        let (mut value, mut x) = (f0, x0);
        let mut iterations = 0;
        if np > 0 {
            // a fresh small simplex around the first optimum guards against collapse
            for (step, tol) in [(INITIAL_STEP, cfg.tolerance), (POLISH_STEP, cfg.tolerance * 1e-2)] {
                let run = nelder_mead(&mut f, &x, value, step, cfg.max_iterations, tol);
                iterations += run.iterations;
                if run.value > value {
                    value = run.value;
                    x = run.x;
                }
            }
        }
        if cfg.trace {
            trace.push(RestartTrace {
                start: i,
                kind,
                initial: f0,
                objective: value,
                iterations,
                angles: x.clone(),
            });
        }
        if value > best.0 {
            best = (value, x);
        }
    }
    let angles = best
        .1
        .chunks_exact(2)
        .flat_map(|a| {
            let (t, p) = canonical_angles(a[0], a[1]);
            [t, p]
        })
        .collect();
    Optimum {
        value: if best.0 < ZERO_FLOOR { 0.0 } else { best.0 },
        angles,
        starts: count,
        trace,
    }
}
