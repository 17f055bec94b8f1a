use proptest::prelude::*;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use spacing_lc::linear_complexity::{
    berlekamp_massey, berlekamp_massey_reference, lfsr_replay, periodic_complexity,
    periodic_complexity_bits, FieldSeq,
};

/// Smallest `L` such that some `c_1..c_L` over GF(q) satisfies
/// `s_n = sum c_i s_(n-i)` for every `n >= L`, by exhaustive search.
fn brute_minimal_order(s: &[u32], q: u32) -> usize {
    for l in 0..=s.len() {
        let combos = (q as u64).pow(l as u32);
        for code in 0..combos {
            let mut c = Vec::with_capacity(l);
            let mut x = code;
            for _ in 0..l {
                c.push((x % q as u64) as u32);
                x /= q as u64;
            }
            let ok = (l..s.len()).all(|n| {
                let v = c
                    .iter()
                    .enumerate()
                    .map(|(i, &ci)| ci as u64 * s[n - 1 - i] as u64)
                    .sum::<u64>()
                    % q as u64;
                v == s[n] as u64
            });
            if ok {
                return l;
            }
        }
    }
    unreachable!("order len(s) always works")
}

fn digits(mut code: u64, q: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (code % q as u64) as u32;
            code /= q as u64;
            d
        })
        .collect()
}

fn assert_replays(s: &FieldSeq) {
    let f = berlekamp_massey(s);
    let seed = &s.elems()[..f.degree()];
    let replay = lfsr_replay(&f, seed, s.len()).unwrap();
    assert_eq!(replay.elems(), s.elems(), "replay of {:?}", s.elems());
}

#[test]
fn every_binary_word_of_length_12_is_minimal_and_replays() {
    for code in 0..4096u64 {
        let w = digits(code, 2, 12);
        let s = FieldSeq::new(2, w.clone()).unwrap();
        let f = berlekamp_massey(&s);
        assert_eq!(f.degree(), brute_minimal_order(&w, 2), "word {w:?}");
        assert_replays(&s);
    }
}

#[test]
fn every_ternary_word_up_to_length_7_is_minimal() {
    for len in 1..=7usize {
        for code in 0..3u64.pow(len as u32) {
            let w = digits(code, 3, len);
            let s = FieldSeq::new(3, w.clone()).unwrap();
            assert_eq!(
                berlekamp_massey(&s).degree(),
                brute_minimal_order(&w, 3),
                "word {w:?}"
            );
            assert_replays(&s);
        }
    }
}

#[test]
fn replay_regenerates_random_sequences() {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let fields = [2u32, 3, 5, 7, 257, 65_521];
    for i in 0..10_000 {
        let q = fields[i % fields.len()];
        let len = 1 + (rng.next_u32() % 120) as usize;
        // Mix dense random words with sparse ones, which have short recurrences.
        let sparse = rng.next_u32() % 3 == 0;
        let elems = (0..len)
            .map(|_| {
                let v = rng.next_u32() % q;
                if sparse && rng.next_u32() % 8 != 0 {
                    0
                } else {
                    v
                }
            })
            .collect();
        let s = FieldSeq::new(q, elems).unwrap();
        let f = berlekamp_massey(&s);
        assert!(f.degree() <= len);
        assert_replays(&s);
    }
}

#[test]
fn periodic_complexity_of_known_periods() {
    // m-sequence of x^3 + x + 1: period 7, complexity 3
    assert_eq!(periodic_complexity_bits(&[1, 0, 0, 1, 0, 1, 1]), 3);
    assert_eq!(periodic_complexity_bits(&[0, 0, 0, 0]), 0);
    assert_eq!(periodic_complexity_bits(&[1]), 1);
    // 1, 0, 0, ... with period n needs the full register
    let mut impulse = vec![0u8; 31];
    impulse[0] = 1;
    assert_eq!(periodic_complexity_bits(&impulse), 31);
    let s = FieldSeq::new(3, vec![1, 2]).unwrap();
    // 1, 2, 1, 2, ... = s_n = 2 s_(n-1)
    assert_eq!(periodic_complexity(&s), 1);
}

fn binary_word() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0u8..=1, 0..400)
}

proptest! {
    #[test]
    fn packed_and_generic_gf2_agree(bits in binary_word()) {
        let s = FieldSeq::binary(&bits).unwrap();
        let packed = berlekamp_massey(&s);
        let generic = berlekamp_massey_reference(&s);
        prop_assert_eq!(packed.degree(), generic.degree());
        let seed = &s.elems()[..packed.degree()];
        let replay = lfsr_replay(&packed, seed, s.len()).unwrap();
        prop_assert_eq!(replay.elems(), s.elems());
    }

    #[test]
    fn periodic_complexity_is_bounded_and_rotation_invariant(
        bits in proptest::collection::vec(0u8..=1, 1..200),
        shift in 0usize..200,
    ) {
        let l = periodic_complexity_bits(&bits);
        prop_assert!(l <= bits.len());
        let mut rotated = bits.clone();
        rotated.rotate_left(shift % bits.len());
        prop_assert_eq!(periodic_complexity_bits(&rotated), l);
    }

    #[test]
    fn appending_a_term_never_lowers_complexity(
        elems in proptest::collection::vec(0u32..5, 1..80),
    ) {
        let full = FieldSeq::new(5, elems.clone()).unwrap();
        let prefix = FieldSeq::new(5, elems[..elems.len() - 1].to_vec()).unwrap();
        prop_assert!(berlekamp_massey(&prefix).degree() <= berlekamp_massey(&full).degree());
    }
}
