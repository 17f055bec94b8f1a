use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;

use super::{
    default_thresholds, ExperimentKind, HistogramSpec, RunConfig, SummaryMeta, SweepSummary,
    TOOL_VERSION,
};
use crate::error::Result;
use crate::linear_complexity::{periodic_complexity_bits, ComplexityRecord};
use crate::numtheory::{primes_from, Natural, PrimeModulus};
use crate::sequences::{parity_word, spacing_histogram, spacings, Kind, ParityWord};

/// Complexity of the periodic stream with `word` as its period, normalized by `|word|`.
pub fn complexity_record<T: Natural>(word: &ParityWord<T>) -> ComplexityRecord<T> {
    let l = periodic_complexity_bits(word.bits());
    ComplexityRecord::new(word.prime().get().clone(), word.len() as u64, l as u64)
}

/// `L(Q_p ∥ Q_p) / ((p - 3) / 2)`.
pub fn qr_complexity<T: Natural>(p: &PrimeModulus<T>) -> Result<ComplexityRecord<T>> {
    Ok(complexity_record(&parity_word(p, Kind::Qr)?))
}

/// `L(R_p ∥ R_p) / (phi(p - 1) - 1)`.
pub fn pr_complexity<T: Natural>(p: &PrimeModulus<T>) -> Result<ComplexityRecord<T>> {
    Ok(complexity_record(&parity_word(p, Kind::Pr)?))
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub thresholds: Vec<Ratio<u64>>,
    pub histogram: HistogramSpec,
    /// Evaluate primes on the rayon pool; results are identical either way.
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            thresholds: default_thresholds(),
            histogram: HistogramSpec::default(),
            parallel: true,
        }
    }
}

/// Complexities over `count` consecutive primes starting at `start`, ordered by prime.
pub fn sweep(
    kind: Kind,
    start: u64,
    count: usize,
    opts: &SweepOptions,
) -> Result<SweepSummary<u64>> {
    let clock = Instant::now();
    let primes = primes_from(&start, count)
        .into_iter()
        .map(PrimeModulus::new)
        .collect::<Result<Vec<_>>>()?;
    let eval = |p: &PrimeModulus<u64>| match kind {
        Kind::Qr => qr_complexity(p),
        Kind::Pr => pr_complexity(p),
    };
    let records = if opts.parallel {
        primes.par_iter().map(eval).collect::<Result<Vec<_>>>()?
    } else {
        primes.iter().map(eval).collect::<Result<Vec<_>>>()?
    };
    let meta = SummaryMeta {
        kind: match kind {
            Kind::Qr => ExperimentKind::QrSweep,
            Kind::Pr => ExperimentKind::PrSweep,
        },
        config: RunConfig::Sweep { start, count },
        tool_version: TOOL_VERSION.to_string(),
        runtime_ms: clock.elapsed().as_millis() as u64,
        resampling: None,
        notes: Vec::new(),
    };
    Ok(SweepSummary::from_records(
        meta,
        records,
        &opts.thresholds,
        opts.histogram,
    ))
}

pub fn qr_sweep(start: u64, count: usize) -> Result<SweepSummary<u64>> {
    sweep(Kind::Qr, start, count, &SweepOptions::default())
}

pub fn pr_sweep(start: u64, count: usize) -> Result<SweepSummary<u64>> {
    sweep(Kind::Pr, start, count, &SweepOptions::default())
}

/// Counts of each raw spacing value.
pub fn spacing_distribution<T: Natural>(
    p: &PrimeModulus<T>,
    kind: Kind,
) -> Result<BTreeMap<T, usize>> {
    Ok(spacing_histogram(&spacings(p, kind)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus<u64> {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn per_prime_examples() {
        let r = qr_complexity(&pm(5)).unwrap();
        assert_eq!((r.complexity, r.normalized), (1, Ratio::from_integer(1)));
        let r = qr_complexity(&pm(11)).unwrap();
        assert_eq!(
            (r.period_length, r.complexity, r.normalized),
            (4, 3, Ratio::new(3, 4))
        );
        let r = qr_complexity(&pm(7)).unwrap();
        assert_eq!((r.complexity, r.normalized), (2, Ratio::from_integer(1)));

        let r = pr_complexity(&pm(7)).unwrap();
        assert_eq!((r.complexity, r.normalized), (0, Ratio::from_integer(0)));
        let r = pr_complexity(&pm(11)).unwrap();
        assert_eq!((r.complexity, r.normalized), (2, Ratio::new(2, 3)));
        let r = pr_complexity(&pm(13)).unwrap();
        assert_eq!((r.complexity, r.normalized), (3, Ratio::from_integer(1)));
    }

    #[test]
    fn small_sweeps() {
        let s = qr_sweep(5, 3).unwrap();
        let got: Vec<_> = s.records.iter().map(|r| (r.p, r.normalized)).collect();
        assert_eq!(
            got,
            vec![
                (5, Ratio::from_integer(1)),
                (7, Ratio::from_integer(1)),
                (11, Ratio::new(3, 4))
            ]
        );
        assert_eq!(s.tally_perfect, 2);
        let s = pr_sweep(11, 2).unwrap();
        let got: Vec<_> = s.records.iter().map(|r| (r.p, r.normalized)).collect();
        assert_eq!(
            got,
            vec![(11, Ratio::new(2, 3)), (13, Ratio::from_integer(1))]
        );
    }

    #[test]
    fn serial_and_parallel_agree() {
        let serial = SweepOptions {
            parallel: false,
            ..SweepOptions::default()
        };
        for kind in [Kind::Qr, Kind::Pr] {
            let mut a = sweep(kind, 11, 120, &serial).unwrap();
            let mut b = sweep(kind, 11, 120, &SweepOptions::default()).unwrap();
            a.meta.runtime_ms = 0;
            b.meta.runtime_ms = 0;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn thresholds_are_monotone() {
        let s = qr_sweep(5, 300).unwrap();
        let counts: Vec<usize> = s.tallies_at.values().copied().collect();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        assert!(counts.iter().all(|&c| c >= s.tally_perfect));
        assert_eq!(s.histogram.total(), 300);
    }

    #[test]
    fn spacing_distribution_examples() {
        let d = spacing_distribution(&pm(11), Kind::Qr).unwrap();
        assert_eq!(
            d.into_iter().collect::<Vec<_>>(),
            vec![(1, 2), (2, 1), (4, 1)]
        );
    }
}
