//! Seeded Monte Carlo window experiments.
//!
//! Randomness: one ChaCha20 generator (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)`; trial `t` reads from stream number `t` of that key, so every trial
//! is a pure function of `(seed, cfg, t)` and trials can run in any order or in parallel.
//! Integers in `[lo, hi]` are drawn by rejection: take `bits(hi - lo + 1)` bits from
//! little-endian `u64` words and retry while the value is out of range.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::SweepOptions;
use super::{complexity_record, ExperimentKind, McSummary, RunConfig, SummaryMeta, TOOL_VERSION};
use crate::error::{Error, Result};
use crate::linear_complexity::ComplexityRecord;
use crate::numtheory::{
    factorize_with, next_prime, PrimeModulus, DEFAULT_ECM_CURVES, DEFAULT_RHO_BUDGET,
};
use crate::sequences::{
    positions_to_parity_word, window_pr_positions, window_qr_positions, Kind, Source, Window,
    WordMeta,
};

/// Draws (prime or window) allowed per trial before the run aborts.
pub const MAX_ATTEMPTS: u32 = 100;

pub(crate) mod big_str {
    use num_bigint::BigUint;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| de::Error::custom(format!("bad integer `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub window: u64,
    #[serde(with = "big_str")]
    pub prime_lo: BigUint,
    #[serde(with = "big_str")]
    pub prime_hi: BigUint,
    pub seed: u64,
    pub rho_budget: u64,
    /// ECM curves tried on a cofactor that exhausts `rho_budget`; 0 means rho only.
    pub ecm_curves: u32,
    pub mode: Kind,
}

impl McConfig {
    /// N = K = 1000 over `[10^30, 10^40]`, seed 1.
    pub fn new(mode: Kind) -> Self {
        Self {
            trials: 1000,
            window: 1000,
            prime_lo: BigUint::from(10u8).pow(30),
            prime_hi: BigUint::from(10u8).pow(40),
            seed: 1,
            rho_budget: DEFAULT_RHO_BUDGET,
            ecm_curves: DEFAULT_ECM_CURVES,
            mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.window < 2 {
            return Err(Error::Config("window must be at least 2".into()));
        }
        if self.prime_lo >= self.prime_hi {
            return Err(Error::Config(format!(
                "prime range [{}, {}] is empty",
                self.prime_lo, self.prime_hi
            )));
        }
        if self.rho_budget == 0 {
            return Err(Error::Config("rho budget must be positive".into()));
        }
        // Every drawn prime is at least next_prime(lo); it must leave room for the window.
        if next_prime(&self.prime_lo) <= BigUint::from(self.window) {
            return Err(Error::Config(format!(
                "window {} does not fit below the smallest candidate prime",
                self.window
            )));
        }
        Ok(())
    }
}

/// One Monte Carlo trial: the measured record plus its window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct McTrialRecord<T> {
    pub record: ComplexityRecord<T>,
    pub window_start: T,
    /// Residues (or primitive roots) found in the window; the word length is `hits - 1`.
    pub hits: u64,
    /// Rejected draws before this trial succeeded.
    pub resamples: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResampleStats {
    /// Primes redrawn because `p - 1` could not be factored within the rho budget.
    pub budget: u64,
    /// Windows redrawn because they held fewer than two hits.
    pub window: u64,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform integer in `[lo, hi]`.
fn uniform_in(rng: &mut impl RngCore, lo: &BigUint, hi: &BigUint) -> BigUint {
    let span = hi - lo + 1u32;
    let bits = span.bits();
    let words = bits.div_ceil(64) as usize;
    let top_mask = if bits.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << (bits % 64)) - 1
    };
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= top_mask;
        }
        let v = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        if v < span {
            return lo + v;
        }
    }
}

/// Runs trial number `trial` of `cfg` and reports per-cause resample counts.
pub fn run_trial(cfg: &McConfig, trial: u64) -> Result<(McTrialRecord<BigUint>, ResampleStats)> {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut stats = ResampleStats::default();
    let mut attempts = 0u32;
    let abort = |attempts: u32, last: &Error| Error::TrialAborted {
        trial,
        attempts,
        last: last.to_string(),
    };

    loop {
        attempts += 1;
        let p = next_prime(&uniform_in(&mut rng, &cfg.prime_lo, &cfg.prime_hi));
        let pm = PrimeModulus::new(p.clone())?;
        let window_max = &p - BigUint::from(cfg.window);
        if window_max.is_zero() {
            return Err(Error::Config(format!(
                "prime {p} leaves no room for a window of {}",
                cfg.window
            )));
        }
        let fpm1 = match cfg.mode {
            Kind::Qr => None,
            Kind::Pr => match factorize_with(&pm.pred(), cfg.rho_budget, cfg.ecm_curves) {
                Ok(f) => Some(f),
                Err(e @ Error::BudgetExhausted { .. }) => {
                    stats.budget += 1;
                    if attempts >= MAX_ATTEMPTS {
                        return Err(abort(attempts, &e));
                    }
                    continue;
                }
                Err(e) => return Err(e),
            },
        };

        loop {
            let start = uniform_in(&mut rng, &BigUint::one(), &window_max);
            let (positions, source) = match &fpm1 {
                None => (
                    window_qr_positions(&pm, &start, cfg.window)?,
                    Source::QrWindow,
                ),
                Some(f) => (
                    window_pr_positions(&pm, &start, cfg.window, f)?,
                    Source::PrWindow,
                ),
            };
            let hits = positions.len() as u64;
            let meta = WordMeta {
                source,
                p: pm.clone(),
                window: Some(Window {
                    start: start.clone(),
                    size: cfg.window,
                }),
            };
            match positions_to_parity_word(&positions, meta) {
                Ok(word) => {
                    let record = McTrialRecord {
                        record: complexity_record(&word),
                        window_start: start,
                        hits,
                        resamples: (stats.budget + stats.window) as u32,
                    };
                    return Ok((record, stats));
                }
                Err(e @ Error::DegenerateWindow { .. }) => {
                    stats.window += 1;
                    attempts += 1;
                    if attempts >= MAX_ATTEMPTS {
                        return Err(abort(attempts, &e));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
}

/// [`mc_run_with`] using the default thresholds and histogram.
pub fn mc_run(cfg: &McConfig) -> Result<McSummary> {
    mc_run_with(cfg, &SweepOptions::default())
}

/// Runs all trials of `cfg`; output depends only on `cfg`, never on scheduling.
pub fn mc_run_with(cfg: &McConfig, opts: &SweepOptions) -> Result<McSummary> {
    cfg.validate()?;
    let clock = Instant::now();
    let outcomes: Vec<_> = if opts.parallel {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, t))
            .collect::<Result<_>>()?
    } else {
        (0..cfg.trials)
            .map(|t| run_trial(cfg, t))
            .collect::<Result<_>>()?
    };
    let mut totals = ResampleStats::default();
    let mut records = Vec::with_capacity(outcomes.len());
    for (rec, stats) in outcomes {
        totals.budget += stats.budget;
        totals.window += stats.window;
        records.push(rec);
    }
    let mut notes = vec![
        "primes are next_prime(u) for u uniform in [prime_lo, prime_hi]; primes following \
         large gaps are over-weighted"
            .to_string(),
    ];
    if cfg.mode == Kind::Pr {
        notes.push(
            "primes whose p-1 did not factor within rho_budget and ecm_curves were redrawn; \
             this slightly favors p-1 without two large prime factors"
                .to_string(),
        );
    }
    let meta = SummaryMeta {
        kind: match cfg.mode {
            Kind::Qr => ExperimentKind::McQr,
            Kind::Pr => ExperimentKind::McPr,
        },
        config: RunConfig::MonteCarlo(cfg.clone()),
        tool_version: TOOL_VERSION.to_string(),
        runtime_ms: clock.elapsed().as_millis() as u64,
        resampling: Some(totals),
        notes,
    };
    Ok(McSummary::from_records(
        meta,
        records,
        &opts.thresholds,
        opts.histogram,
    ))
}
