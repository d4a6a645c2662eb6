//! Constructors and seeded samplers for the studied state families.
//!
//! Excitation convention: an excitation is a qubit in `|0⟩`. The Dicke state
//! `|D_m⟩` with `n` excitations has `n` qubits in `|0⟩` and magnetization
//! `m = 2n - N`, since `σᶻ|0⟩ = +|0⟩`. The generalized W family instead puts
//! its single flipped qubit in `|1⟩`, matching the usual W-state convention;
//! both are related by a global bit flip, which leaves every entanglement
//! quantity unchanged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{bit_of, PureState, C64, MAX_PURE_QUBITS, NORM_TOL};

/// Seeded generator used by every sampler. ChaCha is counter-based, so a
/// sample depends only on its own seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` independent standard complex Gaussians `g + i h`.
pub fn complex_gaussians(rng: &mut ChaCha8Rng, count: usize) -> Vec<C64> {
    (0..count)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

fn normalize(coeffs: &[C64]) -> Vec<C64> {
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    coeffs.iter().map(|c| c / norm).collect()
}

fn check_normalized(coeffs: &[C64]) -> Result<()> {
    let s: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if !s.is_finite() || (s - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(s));
    }
    Ok(())
}

fn check_qubits(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_PURE_QUBITS {
        return Err(Error::InvalidParameter(format!(
            "num_qubits must be in 1..={MAX_PURE_QUBITS}, got {num_qubits}"
        )));
    }
    Ok(())
}

/// Basis indices with exactly `n` qubits in `|0⟩`, ascending.
pub fn sector_indices(num_qubits: usize, n: usize) -> Vec<usize> {
    let ones = num_qubits - n;
    (0..1usize << num_qubits)
        .filter(|idx| idx.count_ones() as usize == ones)
        .collect()
}

fn superpose(num_qubits: usize, terms: &[(C64, &PureState)]) -> Result<PureState> {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
    for (c, s) in terms {
        for (a, b) in amps.iter_mut().zip(s.amplitudes()) {
            *a += c * b;
        }
    }
    PureState::new(num_qubits, amps)
}

/// Uniform superposition of the `C(N, n)` basis states with `n` qubits in `|0⟩`.
pub fn dicke(num_qubits: usize, n: usize) -> Result<PureState> {
    check_qubits(num_qubits)?;
    if n > num_qubits {
        return Err(Error::InvalidParameter(format!(
            "excitation count {n} exceeds {num_qubits} qubits"
        )));
    }
    let support = sector_indices(num_qubits, n);
    let amp = C64::new(1.0 / (support.len() as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
    for idx in support {
        amps[idx] = amp;
    }
    PureState::from_unnormalized(num_qubits, amps)
}

/// `c0 |0…0⟩ + c1 |1…1⟩`.
pub fn gghz(num_qubits: usize, c0: C64, c1: C64) -> Result<PureState> {
    check_qubits(num_qubits)?;
    check_normalized(&[c0, c1])?;
    let dim = 1usize << num_qubits;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    amps[0] += c0;
    amps[dim - 1] += c1;
    PureState::from_unnormalized(num_qubits, amps)
}

pub fn ghz(num_qubits: usize) -> Result<PureState> {
    let c = C64::new(FRAC_1_SQRT_2, 0.0);
    gghz(num_qubits, c, c)
}

/// Single-excitation superposition `Σ_i c_i |0…1_i…0⟩`, qubit `i` in `|1⟩`.
pub fn gw(coeffs: &[C64]) -> Result<PureState> {
    let num_qubits = coeffs.len();
    check_qubits(num_qubits)?;
    check_normalized(coeffs)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
    for (q, c) in coeffs.iter().enumerate() {
        amps[bit_of(num_qubits, q)] = *c;
    }
    PureState::from_unnormalized(num_qubits, amps)
}

/// The uniform gW state `(|10…0⟩ + … + |0…01⟩)/√N`.
pub fn w(num_qubits: usize) -> Result<PureState> {
    check_qubits(num_qubits)?;
    let c = C64::new(1.0 / (num_qubits as f64).sqrt(), 0.0);
    gw(&vec![c; num_qubits])
}

/// `Σ_m c_m |D_m⟩`, where `coeffs[k]` is the coefficient of magnetization
/// `m = 2k - N` (so `coeffs[0]` multiplies `|1…1⟩` and `coeffs[N]` multiplies
/// `|0…0⟩`).
pub fn symmetric_superposition(num_qubits: usize, coeffs: &[C64]) -> Result<PureState> {
    check_qubits(num_qubits)?;
    if coeffs.len() != num_qubits + 1 {
        return Err(Error::InvalidParameter(format!(
            "expected {} magnetization coefficients, got {}",
            num_qubits + 1,
            coeffs.len()
        )));
    }
    check_normalized(coeffs)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
    for (n, c) in coeffs.iter().enumerate() {
        let support = sector_indices(num_qubits, n);
        let scale = 1.0 / (support.len() as f64).sqrt();
        for idx in support {
            amps[idx] = c * scale;
        }
    }
    PureState::from_unnormalized(num_qubits, amps)
}

/// Excitation count of magnetization `m`, validating the grid.
pub fn excitations_of(num_qubits: usize, m: i64) -> Result<usize> {
    let big_n = num_qubits as i64;
    if m.abs() > big_n || (m + big_n) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "magnetization {m} is not on the grid -{big_n}, -{big_n}+2, …, {big_n}"
        )));
    }
    Ok(((m + big_n) / 2) as usize)
}

/// `c_m |D_m⟩ + c_{-m} |D_{-m}⟩` for `m ≠ 0`.
pub fn magnetization_pair(num_qubits: usize, m: i64, c_m: C64, c_minus_m: C64) -> Result<PureState> {
    check_qubits(num_qubits)?;
    if m == 0 {
        return Err(Error::InvalidParameter("magnetization pair needs m ≠ 0".into()));
    }
    let n_plus = excitations_of(num_qubits, m)?;
    let n_minus = excitations_of(num_qubits, -m)?;
    check_normalized(&[c_m, c_minus_m])?;
    let plus = dicke(num_qubits, n_plus)?;
    let minus = dicke(num_qubits, n_minus)?;
    superpose(num_qubits, &[(c_m, &plus), (c_minus_m, &minus)])
}

/// Arbitrary normalized state supported on the sector with `n` qubits in `|0⟩`;
/// `coeffs` follow ascending basis index.
pub fn magnetization_sector(num_qubits: usize, n: usize, coeffs: &[C64]) -> Result<PureState> {
    check_qubits(num_qubits)?;
    if n > num_qubits {
        return Err(Error::InvalidParameter(format!(
            "excitation count {n} exceeds {num_qubits} qubits"
        )));
    }
    let support = sector_indices(num_qubits, n);
    if coeffs.len() != support.len() {
        return Err(Error::InvalidParameter(format!(
            "sector has {} basis states, got {} coefficients",
            support.len(),
            coeffs.len()
        )));
    }
    check_normalized(coeffs)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
    for (idx, c) in support.into_iter().zip(coeffs) {
        amps[idx] = *c;
    }
    PureState::from_unnormalized(num_qubits, amps)
}

/// Random state in the sector with `n` qubits in `|0⟩`: complex Gaussian
/// coefficients, normalized.
pub fn sample_magnetization_sector(num_qubits: usize, n: usize, seed: u64) -> Result<PureState> {
    check_qubits(num_qubits)?;
    if n > num_qubits {
        return Err(Error::InvalidParameter(format!(
            "excitation count {n} exceeds {num_qubits} qubits"
        )));
    }
    let size = sector_indices(num_qubits, n).len();
    let coeffs = normalize(&complex_gaussians(&mut rng_for(seed), size));
    magnetization_sector(num_qubits, n, &coeffs)
}

/// Haar-random pure state from normalized i.i.d. complex Gaussian amplitudes.
pub fn sample_haar(num_qubits: usize, seed: u64) -> Result<PureState> {
    check_qubits(num_qubits)?;
    let amps = complex_gaussians(&mut rng_for(seed), 1 << num_qubits);
    PureState::from_unnormalized(num_qubits, amps)
}

pub fn sample_gghz(num_qubits: usize, seed: u64) -> Result<PureState> {
    let c = normalize(&complex_gaussians(&mut rng_for(seed), 2));
    gghz(num_qubits, c[0], c[1])
}

pub fn sample_gw(num_qubits: usize, seed: u64) -> Result<PureState> {
    check_qubits(num_qubits)?;
    let c = normalize(&complex_gaussians(&mut rng_for(seed), num_qubits));
    gw(&c)
}

pub fn sample_symmetric_superposition(num_qubits: usize, seed: u64) -> Result<PureState> {
    check_qubits(num_qubits)?;
    let c = normalize(&complex_gaussians(&mut rng_for(seed), num_qubits + 1));
    symmetric_superposition(num_qubits, &c)
}

pub fn sample_magnetization_pair(num_qubits: usize, m: i64, seed: u64) -> Result<PureState> {
    let c = normalize(&complex_gaussians(&mut rng_for(seed), 2));
    magnetization_pair(num_qubits, m, c[0], c[1])
}

/// Three-qubit W-class state `c0|000⟩ + c1|100⟩ + c2|010⟩ + c3|001⟩`.
pub fn w_class_3q(coeffs: &[C64]) -> Result<PureState> {
    if coeffs.len() != 4 {
        return Err(Error::InvalidParameter(format!(
            "W-class state takes 4 coefficients, got {}",
            coeffs.len()
        )));
    }
    check_normalized(coeffs)?;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    for (idx, c) in [0b000, 0b100, 0b010, 0b001].into_iter().zip(coeffs) {
        amps[idx] = *c;
    }
    PureState::from_unnormalized(3, amps)
}

/// Three-qubit state `Σ_l c_l |b_l⟩` over all eight basis states.
pub fn ghz_class_3q(coeffs: &[C64]) -> Result<PureState> {
    if coeffs.len() != 8 {
        return Err(Error::InvalidParameter(format!(
            "GHZ-class state takes 8 coefficients, got {}",
            coeffs.len()
        )));
    }
    check_normalized(coeffs)?;
    PureState::from_unnormalized(3, coeffs.to_vec())
}

pub fn sample_w_class_3q(seed: u64) -> Result<PureState> {
    w_class_3q(&normalize(&complex_gaussians(&mut rng_for(seed), 4)))
}

pub fn sample_ghz_class_3q(seed: u64) -> Result<PureState> {
    ghz_class_3q(&normalize(&complex_gaussians(&mut rng_for(seed), 8)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Dicke,
    Ghz,
    Gghz,
    W,
    Gw,
    MagnetizationSector,
    SymmetricSuperposition,
    MagnetizationPair,
    Haar,
    WClass3q,
    GhzClass3q,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Dicke,
        Family::Ghz,
        Family::Gghz,
        Family::W,
        Family::Gw,
        Family::MagnetizationSector,
        Family::SymmetricSuperposition,
        Family::MagnetizationPair,
        Family::Haar,
        Family::WClass3q,
        Family::GhzClass3q,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dicke => "dicke",
            Family::Ghz => "ghz",
            Family::Gghz => "gghz",
            Family::W => "w",
            Family::Gw => "gw",
            Family::MagnetizationSector => "magnetization_sector",
            Family::SymmetricSuperposition => "symmetric_superposition",
            Family::MagnetizationPair => "magnetization_pair",
            Family::Haar => "haar",
            Family::WClass3q => "w_class_3q",
            Family::GhzClass3q => "ghz_class_3q",
        }
    }

    /// Whether every member is invariant under qubit permutations.
    pub fn is_permutation_symmetric(self) -> bool {
        matches!(
            self,
            Family::Dicke
                | Family::Ghz
                | Family::Gghz
                | Family::W
                | Family::SymmetricSuperposition
                | Family::MagnetizationPair
        )
    }

    /// Whether instances without explicit coefficients are drawn at random.
    pub fn is_random(self) -> bool {
        !matches!(self, Family::Dicke | Family::Ghz | Family::W)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown state family `{s}`")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A state family with its parameters. Random families without explicit
/// `coefficients` are sampled from `seed` in [`FamilySpec::build`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: Family,
    pub num_qubits: usize,
    /// Number of qubits in `|0⟩` for `dicke` and `magnetization_sector`;
    /// for `magnetization_pair` it selects `m = 2n - N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<C64>>,
}

impl FamilySpec {
    pub fn new(family: Family, num_qubits: usize) -> Self {
        Self {
            family,
            num_qubits,
            n: None,
            coefficients: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_coefficients(mut self, coefficients: Vec<C64>) -> Self {
        self.coefficients = Some(coefficients);
        self
    }

    fn require_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| {
            Error::InvalidParameter(format!("family `{}` needs `n`", self.family))
        })
    }

    /// Arity checks that do not depend on the seed.
    pub fn validate(&self) -> Result<()> {
        check_qubits(self.num_qubits)?;
        let n_ok = |n: usize| {
            if n > self.num_qubits {
                Err(Error::InvalidParameter(format!(
                    "n = {n} exceeds {} qubits",
                    self.num_qubits
                )))
            } else {
                Ok(())
            }
        };
        match self.family {
            Family::Dicke => {
                if let Some(n) = self.n {
                    n_ok(n)?;
                }
            }
            Family::MagnetizationSector => n_ok(self.require_n()?)?,
            Family::MagnetizationPair => {
                let n = self.require_n()?;
                n_ok(n)?;
                if 2 * n == self.num_qubits {
                    return Err(Error::InvalidParameter(
                        "magnetization pair needs m ≠ 0".into(),
                    ));
                }
            }
            Family::WClass3q | Family::GhzClass3q if self.num_qubits != 3 => {
                return Err(Error::InvalidParameter(format!(
                    "family `{}` is defined on 3 qubits",
                    self.family
                )));
            }
            _ => {}
        }
        Ok(())
    }

    /// Constructs the state; random families draw from `seed` unless
    /// coefficients are given.
    pub fn build(&self, seed: u64) -> Result<PureState> {
        self.validate()?;
        let n_qubits = self.num_qubits;
        let coeffs = self.coefficients.as_deref();
        match (self.family, coeffs) {
            (Family::Dicke, _) => dicke(n_qubits, self.require_n()?),
            (Family::Ghz, _) => ghz(n_qubits),
            (Family::W, _) => w(n_qubits),
            (Family::Gghz, Some(c)) => {
                if c.len() != 2 {
                    return Err(Error::InvalidParameter("gghz takes 2 coefficients".into()));
                }
                gghz(n_qubits, c[0], c[1])
            }
            (Family::Gghz, None) => sample_gghz(n_qubits, seed),
            (Family::Gw, Some(c)) => {
                if c.len() != n_qubits {
                    return Err(Error::InvalidParameter(format!(
                        "gw on {n_qubits} qubits takes {n_qubits} coefficients"
                    )));
                }
                gw(c)
            }
            (Family::Gw, None) => sample_gw(n_qubits, seed),
            (Family::MagnetizationSector, Some(c)) => {
                magnetization_sector(n_qubits, self.require_n()?, c)
            }
            (Family::MagnetizationSector, None) => {
                sample_magnetization_sector(n_qubits, self.require_n()?, seed)
            }
            (Family::SymmetricSuperposition, Some(c)) => symmetric_superposition(n_qubits, c),
            (Family::SymmetricSuperposition, None) => {
                sample_symmetric_superposition(n_qubits, seed)
            }
            (Family::MagnetizationPair, c) => {
                let m = 2 * self.require_n()? as i64 - n_qubits as i64;
                match c {
                    Some(c) if c.len() == 2 => magnetization_pair(n_qubits, m, c[0], c[1]),
                    Some(_) => Err(Error::InvalidParameter(
                        "magnetization_pair takes 2 coefficients".into(),
                    )),
                    None => sample_magnetization_pair(n_qubits, m, seed),
                }
            }
            (Family::Haar, Some(c)) => PureState::new(n_qubits, c.to_vec()),
            (Family::Haar, None) => sample_haar(n_qubits, seed),
            (Family::WClass3q, Some(c)) => w_class_3q(c),
            (Family::WClass3q, None) => sample_w_class_3q(seed),
            (Family::GhzClass3q, Some(c)) => ghz_class_3q(c),
            (Family::GhzClass3q, None) => sample_ghz_class_3q(seed),
        }
    }
}
