use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::ViolationReport;
use super::config::SweepConfig;
use super::export::RecordSink;
use super::record::{evaluate_sample, SampleRecord};
use crate::error::{Error, Result};

/// Samples evaluated in parallel before they are flushed to the sink in
/// index order.
const CHUNK: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub label: Option<String>,
    pub samples: u64,
    /// Smallest and largest `F_S / E` over samples with `E > 0`.
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub report: ViolationReport,
    pub reruns: u64,
    pub evaluations: u64,
}

impl SweepSummary {
    fn new(cfg: &SweepConfig) -> Self {
        Self {
            label: cfg.label.clone(),
            samples: 0,
            min_ratio: None,
            max_ratio: None,
            report: ViolationReport::new(&cfg.propositions(), cfg.tolerance),
            reruns: 0,
            evaluations: 0,
        }
    }

    fn add(&mut self, r: &SampleRecord) -> Result<()> {
        self.samples += 1;
        self.reruns += r.reruns as u64;
        self.evaluations += r.evaluations;
        if let Some(ratio) = r.ratio() {
            self.min_ratio = Some(self.min_ratio.map_or(ratio, |m| m.min(ratio)));
            self.max_ratio = Some(self.max_ratio.map_or(ratio, |m| m.max(ratio)));
        }
        self.report.add(r)
    }
}

fn drive(cfg: &SweepConfig, pool: Option<&rayon::ThreadPool>, sink: &mut dyn RecordSink) -> Result<SweepSummary> {
    let mut summary = SweepSummary::new(cfg);
    let mut start = 0;
    while start < cfg.sample_count {
        let end = (start + CHUNK).min(cfg.sample_count);
        let eval = || {
            (start..end)
                .into_par_iter()
                .map(|i| evaluate_sample(cfg, i))
                .collect::<Result<Vec<SampleRecord>>>()
        };
        let chunk = match pool {
            Some(p) => p.install(eval)?,
            None => eval()?,
        };
        for r in &chunk {
            summary.add(r)?;
            sink.write(r)?;
        }
        start = end;
    }
    sink.finish()?;
    Ok(summary)
}

/// Runs every sample of `cfg`, streaming records to `sink` in index order.
/// Output is identical for any thread count.
pub fn run_sweep(cfg: &SweepConfig, sink: &mut dyn RecordSink) -> Result<SweepSummary> {
    cfg.validate()?;
    let pool = cfg
        .threads
        .map(|n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
        })
        .transpose()?;
    drive(cfg, pool.as_ref(), sink)
}

pub fn run_sweep_collect(cfg: &SweepConfig) -> Result<(Vec<SampleRecord>, SweepSummary)> {
    let mut records = Vec::with_capacity(cfg.sample_count.min(1 << 20) as usize);
    let summary = run_sweep(cfg, &mut records)?;
    Ok((records, summary))
}
