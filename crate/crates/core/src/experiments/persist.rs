//! Results files: one CSV row per record next to a JSON summary.
//!
//! CSV columns are `p,period_length,complexity,normalized_decimal,normalized_rational`, with
//! `A,hits,resamples` appended for Monte Carlo runs. The JSON file sits beside the CSV with
//! extension `.json` and carries the configuration echo, tallies keyed by `num/den`
//! threshold strings, histogram bins and runtime.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{
    format_decimal, format_ratio, parse_ratio, ExperimentKind, Histogram, McTrialRecord,
    ResampleStats, RunConfig, Summary, SummaryMeta,
};
use crate::error::{Error, Result};
use crate::linear_complexity::ComplexityRecord;
use crate::numtheory::Natural;

const DECIMAL_DIGITS: u32 = 6;

/// A row type that can live in a results CSV.
pub trait ResultRow: Sized {
    type Int: Natural;

    const HEADER: &'static [&'static str];

    fn record(&self) -> &ComplexityRecord<Self::Int>;

    fn normalized(&self) -> Ratio<u64> {
        self.record().normalized
    }

    fn csv_fields(&self) -> Vec<String>;

    /// On failure returns `(field name, message)`.
    fn parse_fields(fields: &[&str]) -> std::result::Result<Self, (String, String)>;
}

const BASE_HEADER: [&str; 5] = [
    "p",
    "period_length",
    "complexity",
    "normalized_decimal",
    "normalized_rational",
];

fn base_fields<T: Natural>(r: &ComplexityRecord<T>) -> Vec<String> {
    vec![
        r.p.to_string(),
        r.period_length.to_string(),
        r.complexity.to_string(),
        format_decimal(&r.normalized, DECIMAL_DIGITS),
        format_ratio(&r.normalized),
    ]
}

fn parse_field<V: std::str::FromStr>(
    fields: &[&str],
    idx: usize,
    name: &str,
) -> std::result::Result<V, (String, String)> {
    let raw = fields
        .get(idx)
        .ok_or_else(|| (name.to_string(), "missing".to_string()))?;
    raw.parse()
        .map_err(|_| (name.to_string(), format!("cannot parse `{raw}`")))
}

fn parse_base<T: Natural>(
    fields: &[&str],
) -> std::result::Result<ComplexityRecord<T>, (String, String)> {
    let p: T = parse_field(fields, 0, "p")?;
    let period_length: u64 = parse_field(fields, 1, "period_length")?;
    let complexity: u64 = parse_field(fields, 2, "complexity")?;
    if period_length == 0 {
        return Err(("period_length".into(), "must be positive".into()));
    }
    if complexity > period_length {
        return Err(("complexity".into(), "exceeds period_length".into()));
    }
    let record = ComplexityRecord::new(p, period_length, complexity);
    let rational = fields.get(4).and_then(|s| parse_ratio(s)).ok_or_else(|| {
        (
            "normalized_rational".to_string(),
            "missing or malformed".to_string(),
        )
    })?;
    if rational != record.normalized {
        return Err((
            "normalized_rational".into(),
            format!("{} disagrees with complexity/period_length", fields[4]),
        ));
    }
    if fields.get(3).copied() != Some(format_decimal(&record.normalized, DECIMAL_DIGITS).as_str()) {
        return Err((
            "normalized_decimal".into(),
            "disagrees with complexity/period_length".into(),
        ));
    }
    Ok(record)
}

impl<T: Natural> ResultRow for ComplexityRecord<T> {
    type Int = T;
    const HEADER: &'static [&'static str] = &BASE_HEADER;

    fn record(&self) -> &ComplexityRecord<T> {
        self
    }

    fn csv_fields(&self) -> Vec<String> {
        base_fields(self)
    }

    fn parse_fields(fields: &[&str]) -> std::result::Result<Self, (String, String)> {
        if fields.len() != BASE_HEADER.len() {
            return Err((
                "row".into(),
                format!("expected {} fields", BASE_HEADER.len()),
            ));
        }
        parse_base(fields)
    }
}

impl<T: Natural> ResultRow for McTrialRecord<T> {
    type Int = T;
    const HEADER: &'static [&'static str] = &[
        "p",
        "period_length",
        "complexity",
        "normalized_decimal",
        "normalized_rational",
        "A",
        "hits",
        "resamples",
    ];

    fn record(&self) -> &ComplexityRecord<T> {
        &self.record
    }

    fn csv_fields(&self) -> Vec<String> {
        let mut out = base_fields(&self.record);
        out.push(self.window_start.to_string());
        out.push(self.hits.to_string());
        out.push(self.resamples.to_string());
        out
    }

    fn parse_fields(fields: &[&str]) -> std::result::Result<Self, (String, String)> {
        if fields.len() != Self::HEADER.len() {
            return Err((
                "row".into(),
                format!("expected {} fields", Self::HEADER.len()),
            ));
        }
        let record = parse_base(fields)?;
        let hits: u64 = parse_field(fields, 6, "hits")?;
        if hits != record.period_length + 1 {
            return Err(("hits".into(), "must equal period_length + 1".into()));
        }
        Ok(Self {
            record,
            window_start: parse_field(fields, 5, "A")?,
            hits,
            resamples: parse_field(fields, 7, "resamples")?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct BinJson {
    lower: String,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct HistogramJson {
    lower: String,
    width: String,
    underflow: usize,
    bins: Vec<BinJson>,
}

#[derive(Serialize, Deserialize)]
struct SummaryJson {
    kind: ExperimentKind,
    tool_version: String,
    config: RunConfig,
    runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resampling: Option<ResampleStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    record_count: usize,
    tally_perfect: usize,
    tallies: BTreeMap<String, usize>,
    histogram: HistogramJson,
}

/// Where the JSON summary for a CSV at `csv_path` lives.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    if csv_path.extension().is_some_and(|e| e == "json") {
        let mut s = csv_path.as_os_str().to_owned();
        s.push(".summary.json");
        PathBuf::from(s)
    } else {
        csv_path.with_extension("json")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the per-record CSV to `out`.
pub fn write_csv<R: ResultRow>(summary: &Summary<R>, out: impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for r in &summary.records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()
}

fn to_json<R>(summary: &Summary<R>) -> SummaryJson {
    let h = &summary.histogram;
    SummaryJson {
        kind: summary.meta.kind,
        tool_version: summary.meta.tool_version.clone(),
        config: summary.meta.config.clone(),
        runtime_ms: summary.meta.runtime_ms,
        resampling: summary.meta.resampling,
        notes: summary.meta.notes.clone(),
        record_count: summary.records.len(),
        tally_perfect: summary.tally_perfect,
        tallies: summary
            .tallies_at
            .iter()
            .map(|(t, c)| (format_ratio(t), *c))
            .collect(),
        histogram: HistogramJson {
            lower: format_ratio(&h.lower),
            width: format_ratio(&h.width),
            underflow: h.underflow,
            bins: h
                .bins
                .iter()
                .map(|(lo, c)| BinJson {
                    lower: format_ratio(lo),
                    count: *c,
                })
                .collect(),
        },
    }
}

/// Writes `path` (CSV) and [`summary_path`]`(path)` (JSON).
pub fn write_results<R: ResultRow>(summary: &Summary<R>, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_csv(summary, BufWriter::new(file)).map_err(io_err(path))?;
    let json_path = summary_path(path);
    let json = serde_json::to_string_pretty(&to_json(summary)).expect("summary serializes");
    std::fs::write(&json_path, json + "\n").map_err(io_err(&json_path))?;
    Ok(())
}

fn parse_err(path: &Path, line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn ratio_field(path: &Path, field: &str, s: &str) -> Result<Ratio<u64>> {
    parse_ratio(s).ok_or_else(|| parse_err(path, 0, field, format!("bad ratio `{s}`")))
}

/// Reads a CSV written by [`write_results`] together with its JSON summary.
pub fn read_results<R: ResultRow>(path: &Path) -> Result<Summary<R>> {
    let json_path = summary_path(path);
    let text = std::fs::read_to_string(&json_path).map_err(io_err(&json_path))?;
    let json: SummaryJson = serde_json::from_str(&text)
        .map_err(|e| parse_err(&json_path, e.line(), "json", e.to_string()))?;

    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let header = reader
        .headers()
        .map_err(|e| parse_err(path, 1, "header", e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != R::HEADER {
        return Err(parse_err(
            path,
            1,
            "header",
            format!("expected `{}`", R::HEADER.join(",")),
        ));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(path, line, "row", e.to_string())
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let fields: Vec<&str> = row.iter().collect();
        let rec = R::parse_fields(&fields).map_err(|(f, m)| parse_err(path, line, &f, m))?;
        records.push(rec);
    }
    if records.len() != json.record_count {
        return Err(parse_err(
            &json_path,
            0,
            "record_count",
            format!(
                "{} rows in CSV, summary says {}",
                records.len(),
                json.record_count
            ),
        ));
    }

    let tallies_at = json
        .tallies
        .iter()
        .map(|(k, v)| Ok((ratio_field(&json_path, "tallies", k)?, *v)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let histogram = Histogram {
        lower: ratio_field(&json_path, "histogram.lower", &json.histogram.lower)?,
        width: ratio_field(&json_path, "histogram.width", &json.histogram.width)?,
        underflow: json.histogram.underflow,
        bins: json
            .histogram
            .bins
            .iter()
            .map(|b| {
                Ok((
                    ratio_field(&json_path, "histogram.bins", &b.lower)?,
                    b.count,
                ))
            })
            .collect::<Result<_>>()?,
    };
    Ok(Summary {
        meta: SummaryMeta {
            kind: json.kind,
            config: json.config,
            tool_version: json.tool_version,
            runtime_ms: json.runtime_ms,
            resampling: json.resampling,
            notes: json.notes,
        },
        records,
        tally_perfect: json.tally_perfect,
        tallies_at,
        histogram,
    })
}
