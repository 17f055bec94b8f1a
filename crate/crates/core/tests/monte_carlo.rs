use num_bigint::BigUint;

use spacing_lc::experiments::{
    mc_run_with, read_results, run_trial, write_results, McConfig, McSummary, McTrialRecord,
    SweepOptions,
};
use spacing_lc::numtheory::{is_prime, legendre_symbol, PrimeModulus};
use spacing_lc::sequences::Kind;

fn small_config(mode: Kind, seed: u64) -> McConfig {
    let mut cfg = McConfig::new(mode);
    cfg.trials = 24;
    cfg.window = 120;
    cfg.prime_lo = BigUint::from(10u64).pow(15);
    cfg.prime_hi = BigUint::from(10u64).pow(20);
    cfg.seed = seed;
    cfg
}

fn run(cfg: &McConfig, parallel: bool) -> McSummary {
    let opts = SweepOptions {
        parallel,
        ..SweepOptions::default()
    };
    let mut s = mc_run_with(cfg, &opts).unwrap();
    s.meta.runtime_ms = 0;
    s
}

#[test]
fn results_do_not_depend_on_scheduling() {
    for mode in [Kind::Qr, Kind::Pr] {
        let cfg = small_config(mode, 42);
        assert_eq!(run(&cfg, false), run(&cfg, true));
    }
}

#[test]
fn seeds_select_different_primes() {
    let a = run(&small_config(Kind::Qr, 1), true);
    let b = run(&small_config(Kind::Qr, 2), true);
    let primes = |s: &McSummary| {
        s.records
            .iter()
            .map(|r| r.record.p.clone())
            .collect::<Vec<_>>()
    };
    assert_ne!(primes(&a), primes(&b));
}

#[test]
fn trials_are_internally_consistent() {
    let cfg = small_config(Kind::Qr, 9);
    for t in 0..cfg.trials {
        let (rec, _) = run_trial(&cfg, t).unwrap();
        let McTrialRecord {
            record,
            window_start,
            hits,
            ..
        } = &rec;
        assert!(is_prime(&record.p));
        assert!(record.p >= cfg.prime_lo);
        let pm = PrimeModulus::new(record.p.clone()).unwrap();
        let counted = (0..cfg.window)
            .filter(|k| legendre_symbol(&(window_start + BigUint::from(*k)), &pm) == 1)
            .count() as u64;
        assert_eq!(*hits, counted);
        assert_eq!(record.period_length, hits - 1);
        assert!(record.complexity <= record.period_length);
    }
}

#[test]
fn results_survive_a_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mc.csv");
    let summary = run(&small_config(Kind::Pr, 3), true);
    write_results(&summary, &path).unwrap();
    let back: McSummary = read_results(&path).unwrap();
    assert_eq!(back.records, summary.records);
    assert_eq!(back.tally_perfect, summary.tally_perfect);
    assert_eq!(back.tallies_at, summary.tallies_at);
    assert_eq!(back.meta.config, summary.meta.config);
}
