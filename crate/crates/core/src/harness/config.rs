use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::{OptimizerConfig, PAULI_MAX_MEASURED};
use crate::noise::PhaseFlipChannel;
use crate::states::{Family, FamilySpec};

pub const DEFAULT_SAMPLE_COUNT: u64 = 10_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

fn default_sample_count() -> u64 {
    DEFAULT_SAMPLE_COUNT
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::Parse(format!("unknown output format `{other}`"))),
        }
    }
}

/// One sweep campaign. Qubit indices are 0-based; the measured auxiliary set
/// is the last `n0` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub family: FamilySpec,
    #[serde(default = "default_sample_count")]
    pub sample_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<PhaseFlipChannel>,
    #[serde(default)]
    pub n0: usize,
    #[serde(default)]
    pub hub: usize,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub pauli_only: bool,
    /// Propositions checked per record; `None` picks those that apply to the
    /// family and split.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propositions: Option<Vec<u8>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Worker threads; `None` uses every core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(family: FamilySpec) -> Self {
        Self {
            label: None,
            family,
            sample_count: DEFAULT_SAMPLE_COUNT,
            channel: None,
            n0: 0,
            hub: 0,
            optimizer: OptimizerConfig::default(),
            output: None,
            format: OutputFormat::Csv,
            master_seed: 0,
            pauli_only: false,
            propositions: None,
            tolerance: DEFAULT_TOLERANCE,
            threads: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_samples(mut self, n: u64) -> Self {
        self.sample_count = n;
        self
    }

    pub fn with_channel(mut self, channel: PhaseFlipChannel) -> Self {
        self.channel = Some(channel);
        self
    }

    pub fn with_n0(mut self, n0: usize) -> Self {
        self.n0 = n0;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.family.num_qubits
    }

    /// Size `N` of the useful region.
    pub fn region_size(&self) -> usize {
        self.num_qubits().saturating_sub(self.n0)
    }

    pub fn measured(&self) -> Vec<usize> {
        (self.region_size()..self.num_qubits()).collect()
    }

    pub fn region(&self) -> Vec<usize> {
        (0..self.region_size()).collect()
    }

    /// Propositions that apply to this family and split.
    pub fn default_propositions(&self) -> Vec<u8> {
        let measured = self.n0 > 0;
        let mut props = vec![if measured { 2 } else { 1 }];
        match self.family.family {
            Family::Gw | Family::W => props.extend(if measured { [5, 6] } else { [3, 4] }),
            Family::WClass3q if !measured => props.extend([7, 8]),
            _ => {}
        }
        props
    }

    pub fn propositions(&self) -> Vec<u8> {
        self.propositions.clone().unwrap_or_else(|| self.default_propositions())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        self.family.validate()?;
        if self.sample_count == 0 {
            return bad("sample_count must be at least 1".into());
        }
        let n = self.num_qubits();
        if self.n0 + 2 > n {
            return bad(format!("n0 = {} leaves fewer than two of {n} qubits unmeasured", self.n0));
        }
        if self.hub >= self.region_size() {
            return bad(format!(
                "hub {} must lie in the unmeasured region 0..{}",
                self.hub,
                self.region_size()
            ));
        }
        if let Some(ch) = &self.channel {
            ch.validate()?;
        }
        for &p in self.propositions.iter().flatten() {
            if !(1..=8).contains(&p) {
                return bad(format!("unknown proposition {p}"));
            }
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return bad(format!("tolerance must be nonnegative, got {}", self.tolerance));
        }
        if self.pauli_only && n - 2 > PAULI_MAX_MEASURED {
            return bad(format!(
                "pauli_only enumerates 3^{} settings, above the cap of 3^{PAULI_MAX_MEASURED}",
                n - 2
            ));
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }
}
