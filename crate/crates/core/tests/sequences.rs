use num_bigint::BigUint;
use proptest::prelude::*;

use spacing_lc::experiments::{pr_complexity, qr_complexity};
use spacing_lc::linear_complexity::{legendre_closed_form, periodic_complexity};
use spacing_lc::numtheory::{
    factorize, is_prime, legendre_symbol, next_prime, primes_from, PrimeModulus,
};
use spacing_lc::sequences::{
    legendre_sequence, parity_word, positions_to_parity_word, window_pr_positions,
    window_qr_positions, Kind, Source, Window, WordMeta,
};
use spacing_lc::Ratio;

fn odd_primes_up_to(n: u64) -> Vec<u64> {
    (3..=n)
        .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect()
}

#[test]
fn legendre_complexity_matches_closed_form_for_small_primes() {
    let primes = odd_primes_up_to(257);
    assert_eq!(primes.len(), 54);
    for p in primes {
        let pm = PrimeModulus::new(p).unwrap();
        let got = periodic_complexity(&legendre_sequence(&pm).to_field_seq()) as u64;
        assert_eq!(got, legendre_closed_form(&pm), "p = {p}");
    }
}

/// Squares by brute force, independent of the library's residue routines.
fn brute_qr_word(p: u64) -> String {
    let mut is_qr = vec![false; p as usize];
    for x in 1..p {
        is_qr[(x * x % p) as usize] = true;
    }
    let hits: Vec<u64> = (1..p).filter(|&a| is_qr[a as usize]).collect();
    hits.windows(2)
        .map(|w| if (w[1] - w[0]) % 2 == 1 { '1' } else { '0' })
        .collect()
}

/// Generators by computing every element's order directly.
fn brute_pr_word(p: u64) -> String {
    let order = |g: u64| {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    };
    let hits: Vec<u64> = (1..p).filter(|&g| order(g) == p - 1).collect();
    hits.windows(2)
        .map(|w| if (w[1] - w[0]) % 2 == 1 { '1' } else { '0' })
        .collect()
}

#[test]
fn whole_field_words_match_brute_force() {
    for p in odd_primes_up_to(400).into_iter().filter(|&p| p >= 5) {
        let pm = PrimeModulus::new(p).unwrap();
        assert_eq!(
            parity_word(&pm, Kind::Qr).unwrap().bit_string(),
            brute_qr_word(p)
        );
        assert_eq!(
            parity_word(&pm, Kind::Pr).unwrap().bit_string(),
            brute_pr_word(p)
        );
    }
}

#[test]
fn full_window_reproduces_whole_field_words() {
    for p in odd_primes_up_to(200).into_iter().filter(|&p| p >= 5) {
        let pm = PrimeModulus::new(p).unwrap();
        let meta = |source| WordMeta {
            source,
            p: pm.clone(),
            window: Some(Window {
                start: 1,
                size: p - 1,
            }),
        };
        let qr = window_qr_positions(&pm, &1, p - 1).unwrap();
        let w = positions_to_parity_word(&qr, meta(Source::QrWindow)).unwrap();
        assert_eq!(
            w.bits(),
            parity_word(&pm, Kind::Qr).unwrap().bits(),
            "QR p = {p}"
        );

        let f = factorize(&(p - 1), 1000).unwrap();
        let pr = window_pr_positions(&pm, &1, p - 1, &f).unwrap();
        let w = positions_to_parity_word(&pr, meta(Source::PrWindow)).unwrap();
        assert_eq!(
            w.bits(),
            parity_word(&pm, Kind::Pr).unwrap().bits(),
            "PR p = {p}"
        );
    }
}

#[test]
fn word_lengths_follow_residue_counts() {
    for p in primes_from(&11u64, 150) {
        let pm = PrimeModulus::new(p).unwrap();
        assert_eq!(qr_complexity(&pm).unwrap().period_length, (p - 3) / 2);
        let phi = factorize(&(p - 1), 1000).unwrap().euler_phi();
        assert_eq!(pr_complexity(&pm).unwrap().period_length, phi - 1);
    }
}

#[test]
fn normalized_complexity_lies_in_unit_interval() {
    for p in primes_from(&5u64, 300) {
        let pm = PrimeModulus::new(p).unwrap();
        for kind in [Kind::Qr, Kind::Pr] {
            let Ok(w) = parity_word(&pm, kind) else {
                continue;
            };
            if w.is_empty() {
                continue;
            }
            let r = spacing_lc::experiments::complexity_record(&w);
            assert!(r.normalized <= Ratio::from_integer(1), "p = {p}");
            assert_eq!(
                r.normalized,
                Ratio::new(r.complexity, r.period_length),
                "p = {p}"
            );
        }
    }
}

#[test]
fn generic_code_agrees_between_word_and_big_integers() {
    for p in primes_from(&5u64, 40) {
        let small = PrimeModulus::new(p).unwrap();
        let big = PrimeModulus::new(BigUint::from(p)).unwrap();
        for kind in [Kind::Qr, Kind::Pr] {
            let a = parity_word(&small, kind).map(|w| w.bit_string()).ok();
            let b = parity_word(&big, kind).map(|w| w.bit_string()).ok();
            assert_eq!(a, b, "p = {p}");
        }
    }
}

proptest! {
    #[test]
    fn legendre_symbol_matches_squares(seed in 0u64..10_000, a in 0u64..100_000) {
        let p = next_prime(&(seed * 7 + 3));
        prop_assume!(is_prime(&p) && p > 2);
        let pm = PrimeModulus::new(p).unwrap();
        let a = a % p;
        let is_square = (1..p).any(|x| x * x % p == a);
        let expect = if a == 0 { 0 } else if is_square { 1 } else { -1 };
        prop_assert_eq!(legendre_symbol(&a, &pm), expect);
    }

    #[test]
    fn window_hits_are_sorted_and_in_range(p_idx in 0usize..60, start in 1u64..400, size in 2u64..200) {
        let p = primes_from(&500u64, 60)[p_idx];
        let pm = PrimeModulus::new(p).unwrap();
        prop_assume!(start + size <= p);
        let hits = window_qr_positions(&pm, &start, size).unwrap();
        prop_assert!(hits.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(hits.iter().all(|&k| (1..=size).contains(&k)));
        for &k in &hits {
            prop_assert_eq!(legendre_symbol(&(start + k - 1), &pm), 1);
        }
    }
}
