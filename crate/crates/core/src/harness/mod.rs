//! Sweep campaigns over state families, proposition checks, violation
//! statistics and table export.

mod bounds;
mod config;
mod export;
mod figures;
mod record;
mod sweep;

pub use bounds::{
    check_propositions, wilson_interval, PropositionStats, SideStats, ViolationReport, WilsonInterval,
    MAX_LISTED_SEEDS, Z95,
};
pub use config::{OutputFormat, SweepConfig, DEFAULT_SAMPLE_COUNT, DEFAULT_TOLERANCE};
pub use export::{
    export, import, import_csv, import_jsonl, sink_for, CsvSink, JsonlSink, NullSink, RecordSink, CSV_HEADER,
    CSV_SCHEMA,
};
pub use figures::{figure_data, FIGURE_IDS, PRESET_SAMPLES};
pub use record::{
    check_values, digest, evaluate_sample, sample_seed, PropositionCheck, SampleRecord, RERUN_FACTOR,
    SATURATION_GAP,
};
pub use sweep::{run_sweep, run_sweep_collect, SweepSummary};
