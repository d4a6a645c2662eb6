use serde::{Deserialize, Serialize};

use super::record::{SampleRecord, SATURATION_GAP};
use crate::error::Result;
use crate::oracles::{bound_lines, BoundKind};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Keep at most this many violating seeds per proposition and side.
pub const MAX_LISTED_SEEDS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> WilsonInterval {
    if trials == 0 {
        return WilsonInterval {
            estimate: 0.0,
            low: 0.0,
            high: 1.0,
        };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    WilsonInterval {
        estimate: p,
        low: (center - half).max(0.0),
        high: (center + half).min(1.0),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SideStats {
    pub violations: u64,
    pub saturations: u64,
    pub violating_seeds: Vec<u64>,
}

impl SideStats {
    fn record(&mut self, excess: f64, tolerance: f64, seed: u64) {
        if excess > tolerance {
            self.violations += 1;
            if self.violating_seeds.len() < MAX_LISTED_SEEDS {
                self.violating_seeds.push(seed);
            }
        }
        if excess.abs() < SATURATION_GAP {
            self.saturations += 1;
        }
    }

    fn merge(&mut self, other: SideStats) {
        self.violations += other.violations;
        self.saturations += other.saturations;
        self.violating_seeds.extend(other.violating_seeds);
        self.violating_seeds.sort_unstable();
        self.violating_seeds.truncate(MAX_LISTED_SEEDS);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionStats {
    pub proposition: u8,
    pub checked: u64,
    pub upper: Option<SideStats>,
    pub lower: Option<SideStats>,
}

impl PropositionStats {
    pub fn upper_violations(&self) -> u64 {
        self.upper.as_ref().map_or(0, |s| s.violations)
    }

    pub fn lower_violations(&self) -> u64 {
        self.lower.as_ref().map_or(0, |s| s.violations)
    }

    pub fn upper_fraction(&self) -> Option<WilsonInterval> {
        self.upper
            .as_ref()
            .map(|s| wilson_interval(s.violations, self.checked, Z95))
    }

    pub fn lower_fraction(&self) -> Option<WilsonInterval> {
        self.lower
            .as_ref()
            .map(|s| wilson_interval(s.violations, self.checked, Z95))
    }
}

/// Per-proposition violation and saturation counts over a record stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub tolerance: f64,
    pub records: u64,
    pub propositions: Vec<PropositionStats>,
}

impl ViolationReport {
    pub fn new(propositions: &[u8], tolerance: f64) -> Self {
        let mut ids = propositions.to_vec();
        ids.sort_unstable();
        ids.dedup();
        Self {
            tolerance,
            records: 0,
            propositions: ids
                .into_iter()
                .map(|p| PropositionStats {
                    proposition: p,
                    checked: 0,
                    upper: None,
                    lower: None,
                })
                .collect(),
        }
    }

    /// Checks one record against every tracked proposition, from its stored
    /// `E` and `F_S`.
    pub fn add(&mut self, record: &SampleRecord) -> Result<()> {
        self.add_where(record, |_| true)
    }

    fn add_where(&mut self, record: &SampleRecord, keep: impl Fn(u8) -> bool) -> Result<()> {
        self.records += 1;
        for stats in self.propositions.iter_mut().filter(|s| keep(s.proposition)) {
            stats.checked += 1;
            for line in bound_lines(stats.proposition, record.region_size())? {
                let excess = line.excess(record.e, record.f_s);
                let side = match line.kind {
                    BoundKind::Upper => &mut stats.upper,
                    BoundKind::Lower => &mut stats.lower,
                };
                side.get_or_insert_with(SideStats::default)
                    .record(excess, self.tolerance, record.seed);
            }
        }
        Ok(())
    }

    /// Combines reports over disjoint record sets with the same propositions.
    pub fn merge(&mut self, other: ViolationReport) {
        self.records += other.records;
        for (mine, theirs) in self.propositions.iter_mut().zip(other.propositions) {
            debug_assert_eq!(mine.proposition, theirs.proposition);
            mine.checked += theirs.checked;
            for (a, b) in [(&mut mine.upper, theirs.upper), (&mut mine.lower, theirs.lower)] {
                match (a.as_mut(), b) {
                    (Some(x), Some(y)) => x.merge(y),
                    (None, Some(y)) => *a = Some(y),
                    _ => {}
                }
            }
        }
    }

    pub fn get(&self, proposition: u8) -> Option<&PropositionStats> {
        self.propositions.iter().find(|s| s.proposition == proposition)
    }

    pub fn total_violations(&self) -> u64 {
        self.propositions
            .iter()
            .map(|s| s.upper_violations() + s.lower_violations())
            .sum()
    }
}

/// Checks every record against `propositions` (or, when `None`, against the
/// propositions listed in the records themselves).
pub fn check_propositions<'a>(
    records: impl IntoIterator<Item = &'a SampleRecord>,
    propositions: Option<&[u8]>,
    tolerance: f64,
) -> Result<ViolationReport> {
    let records: Vec<&SampleRecord> = records.into_iter().collect();
    let ids: Vec<u8> = match propositions {
        Some(p) => p.to_vec(),
        None => records
            .iter()
            .flat_map(|r| r.checks.iter().map(|c| c.proposition))
            .collect(),
    };
    let mut report = ViolationReport::new(&ids, tolerance);
    for r in records {
        match propositions {
            Some(_) => report.add(r)?,
            None => report.add_where(r, |p| r.checks.iter().any(|c| c.proposition == p))?,
        }
    }
    Ok(report)
}
