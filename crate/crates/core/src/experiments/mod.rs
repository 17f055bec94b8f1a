//! Experiment drivers: whole-field sweeps over consecutive primes, seeded Monte Carlo
//! window studies, and the tallies and histograms they report.

mod monte_carlo;
mod persist;
mod sweep;

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use monte_carlo::{
    mc_run, mc_run_with, run_trial, McConfig, McTrialRecord, ResampleStats, MAX_ATTEMPTS,
};
pub use persist::{read_results, summary_path, write_csv, write_results, ResultRow};
pub use sweep::{
    complexity_record, pr_complexity, pr_sweep, qr_complexity, qr_sweep, spacing_distribution,
    sweep, SweepOptions,
};

use crate::linear_complexity::ComplexityRecord;
use crate::sequences::Kind;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exact fractions used as reporting thresholds: 0.95, 0.968, 0.99, 0.992 and 1.
pub fn default_thresholds() -> Vec<Ratio<u64>> {
    vec![
        Ratio::new(19, 20),
        Ratio::new(121, 125),
        Ratio::new(99, 100),
        Ratio::new(124, 125),
        Ratio::new(1, 1),
    ]
}

/// Parses `a/b`, a terminating decimal such as `0.968`, or an integer, exactly.
pub fn parse_ratio(s: &str) -> Option<Ratio<u64>> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (u64, u64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (d != 0).then(|| Ratio::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let den = 10u64.checked_pow(frac.len() as u32)?;
    let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().ok()?
    };
    Some(Ratio::new(int.checked_mul(den)?.checked_add(frac)?, den))
}

/// `num/den`, always with an explicit denominator.
pub fn format_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering rounded half-up to `digits` places, computed in integers.
pub fn format_decimal(r: &Ratio<u64>, digits: u32) -> String {
    let scale = 10u128.pow(digits);
    let (n, d) = (*r.numer() as u128, *r.denom() as u128);
    let scaled = (2 * n * scale + d) / (2 * d);
    let (int, frac) = (scaled / scale, scaled % scale);
    if digits == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = digits as usize)
    }
}

pub(crate) mod ratio_str {
    use num_rational::Ratio;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_ratio(&s).ok_or_else(|| de::Error::custom(format!("bad ratio `{s}`")))
    }
}

/// Fixed-width bins over `[lower, 1]` plus one underflow bin below `lower`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    pub lower: Ratio<u64>,
    pub width: Ratio<u64>,
    pub underflow: usize,
    /// `(bin lower bound, count)`; the last bin is closed at 1.
    pub bins: Vec<(Ratio<u64>, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HistogramSpec {
    pub lower: Ratio<u64>,
    pub width: Ratio<u64>,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self {
            lower: Ratio::new(9, 10),
            width: Ratio::new(1, 500),
        }
    }
}

impl Histogram {
    pub fn build<'a>(
        spec: HistogramSpec,
        values: impl IntoIterator<Item = &'a Ratio<u64>>,
    ) -> Self {
        assert!(*spec.width.numer() > 0, "zero bin width");
        assert!(
            spec.lower < Ratio::from_integer(1),
            "lower edge must be below 1"
        );
        let span = (Ratio::from_integer(1) - spec.lower) / spec.width;
        let n_bins = span.ceil().to_integer().max(1) as usize;
        let mut bins: Vec<(Ratio<u64>, usize)> = (0..n_bins)
            .map(|i| (spec.lower + spec.width * Ratio::from_integer(i as u64), 0))
            .collect();
        let mut underflow = 0;
        for v in values {
            if *v < spec.lower {
                underflow += 1;
                continue;
            }
            let idx = ((*v - spec.lower) / spec.width).to_integer() as usize;
            bins[idx.min(n_bins - 1)].1 += 1;
        }
        Self {
            lower: spec.lower,
            width: spec.width,
            underflow,
            bins,
        }
    }

    pub fn total(&self) -> usize {
        self.underflow + self.bins.iter().map(|(_, c)| c).sum::<usize>()
    }

    pub fn spec(&self) -> HistogramSpec {
        HistogramSpec {
            lower: self.lower,
            width: self.width,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    QrSweep,
    PrSweep,
    McQr,
    McPr,
}

impl ExperimentKind {
    pub fn residue_kind(self) -> Kind {
        match self {
            ExperimentKind::QrSweep | ExperimentKind::McQr => Kind::Qr,
            ExperimentKind::PrSweep | ExperimentKind::McPr => Kind::Pr,
        }
    }

    pub fn is_monte_carlo(self) -> bool {
        matches!(self, ExperimentKind::McQr | ExperimentKind::McPr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RunConfig {
    Sweep { start: u64, count: usize },
    MonteCarlo(McConfig),
}

/// Everything in a results file except the per-record rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryMeta {
    pub kind: ExperimentKind,
    pub config: RunConfig,
    pub tool_version: String,
    pub runtime_ms: u64,
    pub resampling: Option<ResampleStats>,
    pub notes: Vec<String>,
}

/// Records plus tallies: count with normalized complexity 1, counts at each threshold, and
/// a histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary<R> {
    pub meta: SummaryMeta,
    pub records: Vec<R>,
    pub tally_perfect: usize,
    pub tallies_at: BTreeMap<Ratio<u64>, usize>,
    pub histogram: Histogram,
}

/// Summary of a whole-field sweep.
pub type SweepSummary<T> = Summary<ComplexityRecord<T>>;
/// Summary of a Monte Carlo run.
pub type McSummary = Summary<McTrialRecord<num_bigint::BigUint>>;

impl<R: ResultRow> Summary<R> {
    pub fn from_records(
        meta: SummaryMeta,
        records: Vec<R>,
        thresholds: &[Ratio<u64>],
        histogram: HistogramSpec,
    ) -> Self {
        let values: Vec<Ratio<u64>> = records.iter().map(|r| r.normalized()).collect();
        let tally_perfect = values
            .iter()
            .filter(|v| **v == Ratio::from_integer(1))
            .count();
        let tallies_at = thresholds
            .iter()
            .map(|t| (*t, values.iter().filter(|v| *v >= t).count()))
            .collect();
        let histogram = Histogram::build(histogram, &values);
        Self {
            meta,
            records,
            tally_perfect,
            tallies_at,
            histogram,
        }
    }

    /// Count with normalized complexity at least `t`.
    pub fn tally_at(&self, t: Ratio<u64>) -> usize {
        self.tallies_at
            .get(&t)
            .copied()
            .unwrap_or_else(|| self.records.iter().filter(|r| r.normalized() >= t).count())
    }

    pub fn fraction_perfect(&self) -> f64 {
        self.tally_perfect as f64 / self.records.len().max(1) as f64
    }

    pub fn fraction_at(&self, t: Ratio<u64>) -> f64 {
        self.tally_at(t) as f64 / self.records.len().max(1) as f64
    }

    /// Plain-text tally table: total, perfect count, then one line per threshold, highest
    /// first.
    pub fn tally_table(&self) -> String {
        let mut out = format!(
            "{:?}: {} records\n  perfect (= 1): {}\n",
            self.meta.kind,
            self.records.len(),
            self.tally_perfect
        );
        for (t, c) in self.tallies_at.iter().rev() {
            if *t == Ratio::from_integer(1) {
                continue;
            }
            out.push_str(&format!(
                "  at least {} ({}): {}\n",
                format_decimal(t, 3).trim_end_matches('0'),
                format_ratio(t),
                c
            ));
        }
        if let Some(rs) = &self.meta.resampling {
            out.push_str(&format!(
                "  resamples: {} factorization-budget, {} degenerate-window\n",
                rs.budget, rs.window
            ));
        }
        out
    }

    /// Text rendering of the non-empty histogram bins, one per line.
    pub fn histogram_text(&self) -> String {
        let h = &self.histogram;
        let mut out = format!("  < {}: {}\n", format_decimal(&h.lower, 3), h.underflow);
        let last = h.bins.len().saturating_sub(1);
        for (i, (lo, c)) in h.bins.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let hi = (*lo + h.width).min(Ratio::from_integer(1));
            let close = if i == last { ']' } else { ')' };
            out.push_str(&format!(
                "  [{}, {}{close}: {c}\n",
                format_decimal(lo, 3),
                format_decimal(&hi, 3),
            ));
        }
        out
    }
}
