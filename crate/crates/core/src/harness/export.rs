use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use super::record::{PropositionCheck, SampleRecord};
use crate::error::{Error, Result};
use crate::states::Family;

/// Value of the leading `schema` column; bumped whenever columns change.
pub const CSV_SCHEMA: u32 = 1;

pub const CSV_HEADER: [&str; 19] = [
    "schema",
    "index",
    "seed",
    "family",
    "num_qubits",
    "n",
    "n0",
    "hub",
    "digest",
    "q",
    "eta",
    "pauli_only",
    "e",
    "f_s",
    "f_i",
    "checks",
    "evaluations",
    "reruns",
    "ratio",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    schema: u32,
    index: u64,
    seed: u64,
    family: Family,
    num_qubits: usize,
    n: Option<usize>,
    n0: usize,
    hub: usize,
    digest: String,
    q: f64,
    eta: f64,
    pauli_only: bool,
    e: f64,
    f_s: f64,
    f_i: String,
    checks: String,
    evaluations: u64,
    reruns: u32,
    /// Derived `F_S / E`, for plotting; ignored on import.
    ratio: Option<f64>,
}

fn flag(v: Option<bool>) -> char {
    match v {
        Some(true) => '+',
        Some(false) => '-',
        None => '.',
    }
}

fn unflag(c: char) -> Result<Option<bool>> {
    match c {
        '+' => Ok(Some(true)),
        '-' => Ok(Some(false)),
        '.' => Ok(None),
        other => Err(Error::Parse(format!("bad check flag `{other}`"))),
    }
}

/// `1+-;3+.`: proposition id, then upper and lower flags.
fn encode_checks(checks: &[PropositionCheck]) -> String {
    checks
        .iter()
        .map(|c| format!("{}{}{}", c.proposition, flag(c.upper), flag(c.lower)))
        .collect::<Vec<_>>()
        .join(";")
}

fn decode_checks(text: &str) -> Result<Vec<PropositionCheck>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|part| {
            let chars: Vec<char> = part.chars().collect();
            if chars.len() != 3 {
                return Err(Error::Parse(format!("bad check entry `{part}`")));
            }
            let proposition = chars[0]
                .to_digit(10)
                .filter(|d| (1..=8).contains(d))
                .ok_or_else(|| Error::Parse(format!("bad proposition in `{part}`")))? as u8;
            Ok(PropositionCheck {
                proposition,
                upper: unflag(chars[1])?,
                lower: unflag(chars[2])?,
            })
        })
        .collect()
}

fn encode_values(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn decode_values(text: &str) -> Result<Vec<f64>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|v| v.parse::<f64>().map_err(|e| Error::Parse(format!("bad value `{v}`: {e}"))))
        .collect()
}

impl From<&SampleRecord> for CsvRow {
    fn from(r: &SampleRecord) -> Self {
        CsvRow {
            schema: CSV_SCHEMA,
            index: r.index,
            seed: r.seed,
            family: r.family,
            num_qubits: r.num_qubits,
            n: r.n,
            n0: r.n0,
            hub: r.hub,
            digest: r.digest.clone(),
            q: r.q,
            eta: r.eta,
            pauli_only: r.pauli_only,
            e: r.e,
            f_s: r.f_s,
            f_i: encode_values(&r.f_i),
            checks: encode_checks(&r.checks),
            evaluations: r.evaluations,
            reruns: r.reruns,
            ratio: r.ratio(),
        }
    }
}

impl TryFrom<CsvRow> for SampleRecord {
    type Error = Error;

    fn try_from(row: CsvRow) -> Result<Self> {
        if row.schema != CSV_SCHEMA {
            return Err(Error::Parse(format!(
                "CSV schema {} is not the supported schema {CSV_SCHEMA}",
                row.schema
            )));
        }
        let record = SampleRecord {
            index: row.index,
            seed: row.seed,
            family: row.family,
            num_qubits: row.num_qubits,
            n: row.n,
            n0: row.n0,
            hub: row.hub,
            digest: row.digest,
            q: row.q,
            eta: row.eta,
            pauli_only: row.pauli_only,
            e: row.e,
            f_s: row.f_s,
            f_i: decode_values(&row.f_i)?,
            checks: decode_checks(&row.checks)?,
            evaluations: row.evaluations,
            reruns: row.reruns,
        };
        record.validate()?;
        Ok(record)
    }
}

impl SampleRecord {
    /// Structural checks for records read from untrusted input.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        if self.num_qubits < 2 || self.n0 + 2 > self.num_qubits {
            return bad(format!("inconsistent split: {} qubits, n0 = {}", self.num_qubits, self.n0));
        }
        if self.hub >= self.region_size() {
            return bad(format!("hub {} outside the region", self.hub));
        }
        if self.f_i.len() + 1 != self.region_size() {
            return bad(format!(
                "{} F_i values for a region of {} qubits",
                self.f_i.len(),
                self.region_size()
            ));
        }
        let values = [self.e, self.f_s, self.q, self.eta];
        if values.iter().chain(&self.f_i).any(|v| !v.is_finite()) {
            return bad("non-finite value".into());
        }
        let sum: f64 = self.f_i.iter().sum();
        if (sum - self.f_s).abs() > 1e-9 {
            return bad(format!("F_S = {} differs from the sum of F_i = {sum}", self.f_s));
        }
        Ok(())
    }
}

/// Incremental record output.
pub trait RecordSink {
    fn write(&mut self, record: &SampleRecord) -> Result<()>;

    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

impl RecordSink for Vec<SampleRecord> {
    fn write(&mut self, record: &SampleRecord) -> Result<()> {
        self.push(record.clone());
        Ok(())
    }
}

/// Discards records; used when only the summary matters.
pub struct NullSink;

impl RecordSink for NullSink {
    fn write(&mut self, _: &SampleRecord) -> Result<()> {
        Ok(())
    }
}

pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    /// Writes the header immediately, so an empty stream still yields it.
    pub fn new(inner: W) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(inner);
        writer.write_record(CSV_HEADER)?;
        Ok(Self { writer })
    }
}

impl<W: Write> RecordSink for CsvSink<W> {
    fn write(&mut self, record: &SampleRecord) -> Result<()> {
        self.writer.serialize(CsvRow::from(record))?;
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

pub struct JsonlSink<W: Write> {
    writer: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(writer: W) -> Self {
        Self { writer }
    }
}

impl<W: Write> RecordSink for JsonlSink<W> {
    fn write(&mut self, record: &SampleRecord) -> Result<()> {
        serde_json::to_writer(&mut self.writer, record)?;
        self.writer.write_all(b"\n")?;
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

pub fn sink_for<'a, W: Write + 'a>(format: OutputFormat, writer: W) -> Result<Box<dyn RecordSink + 'a>> {
    Ok(match format {
        OutputFormat::Csv => Box::new(CsvSink::new(writer)?),
        OutputFormat::Jsonl => Box::new(JsonlSink::new(writer)),
    })
}

pub fn export<W: Write>(records: &[SampleRecord], format: OutputFormat, writer: W) -> Result<()> {
    let mut sink = sink_for(format, writer)?;
    for r in records {
        sink.write(r)?;
    }
    sink.finish()
}

pub fn import_csv<R: Read>(reader: R) -> Result<Vec<SampleRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse(format!(
            "unexpected CSV header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize::<CsvRow>()
        .map(|row| SampleRecord::try_from(row?))
        .collect()
}

pub fn import_jsonl<R: BufRead>(reader: R) -> Result<Vec<SampleRecord>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SampleRecord = serde_json::from_str(&line)?;
        record.validate()?;
        out.push(record);
    }
    Ok(out)
}

pub fn import<R: BufRead>(format: OutputFormat, reader: R) -> Result<Vec<SampleRecord>> {
    match format {
        OutputFormat::Csv => import_csv(reader),
        OutputFormat::Jsonl => import_jsonl(reader),
    }
}
