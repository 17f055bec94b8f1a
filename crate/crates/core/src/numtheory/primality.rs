//! Miller-Rabin primality with a fixed, reproducible witness schedule.
//!
//! Witness schedule:
//! * below 3 317 044 064 679 887 385 961 981 the 13 primes 2, 3, ..., 41 are used; this set is
//!   known to be deterministic for every n under that bound;
//! * at or above it, the same 13 primes plus 27 further witnesses drawn from a SplitMix64
//!   stream seeded by folding the limbs of n (40 rounds in total), so a given n always sees
//!   the same witnesses.

use std::sync::OnceLock;

use num_bigint::BigUint;

use super::natural::Natural;

const DETERMINISTIC_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const SEEDED_ROUNDS: usize = 27;
const TRIAL_DIVISION_PRIMES: usize = 168; // every prime below 1000

/// 3 317 044 064 679 887 385 961 981
fn deterministic_bound() -> BigUint {
    BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("constant parses")
}

/// Primes below 10^6, ascending.
pub fn small_primes() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| sieve(1_000_000))
}

/// Eratosthenes: all primes strictly below `limit`.
pub fn sieve(limit: usize) -> Vec<u32> {
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

fn strong_probable_prime<T: Natural>(n: &T, n_minus_1: &T, d: &T, s: u32, base: &T) -> bool {
    let mut x = base.pow_mod(d, n);
    if x.is_one() || x == *n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = x.mul_mod(&x, n);
        if x == *n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// The full witness list used for `n` (odd, > 41).
pub fn witness_schedule<T: Natural>(n: &T) -> Vec<T> {
    let mut out: Vec<T> = DETERMINISTIC_BASES
        .iter()
        .map(|&b| T::from_u64_lossless(b))
        .collect();
    let big = n.to_biguint();
    if big < deterministic_bound() {
        return out;
    }
    let seed = big
        .to_u64_digits()
        .iter()
        .fold(0x6a09_e667_f3bc_c908u64, |acc, limb| {
            acc.rotate_left(17) ^ limb.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        });
    let mut rng = SplitMix64(seed);
    let span = &big - 3u32; // witnesses in [2, n - 2]
    let words = (big.bits() / 64 + 2) as usize;
    for _ in 0..SEEDED_ROUNDS {
        let mut digits = Vec::with_capacity(words);
        for _ in 0..words {
            digits.push(rng.next());
        }
        let raw = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        let w = raw % &span + 2u32;
        out.push(T::from_biguint(&w).expect("witness below n fits the type of n"));
    }
    out
}

/// Deterministic primality test; see the module docs for the witness schedule.
pub fn is_prime<T: Natural>(n: &T) -> bool {
    let two = T::from_u64_lossless(2);
    if *n < two {
        return false;
    }
    for &p in &small_primes()[..TRIAL_DIVISION_PRIMES] {
        let p = p as u64;
        let r = n.rem_u64(p);
        if r == 0 {
            return *n == T::from_u64_lossless(p);
        }
    }
    // No factor below 1000, so anything under 1000^2 is prime.
    if *n < T::from_u64_lossless(1_000_000) {
        return true;
    }
    let n_minus_1 = n.clone() - T::one();
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while !d.is_odd_value() {
        d = d / two.clone();
        s += 1;
    }
    witness_schedule(n)
        .iter()
        .all(|b| strong_probable_prime(n, &n_minus_1, &d, s, b))
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime<T: Natural>(n: &T) -> T {
    let two = T::from_u64_lossless(2);
    if *n < two {
        return two;
    }
    let mut c = n.clone() + T::one();
    if !c.is_odd_value() {
        if c == two {
            return c;
        }
        c = c + T::one();
    }
    while !is_prime(&c) {
        c = c + two.clone();
    }
    c
}

/// The `count` consecutive primes that are `>= start`, ascending.
pub fn primes_from<T: Natural>(start: &T, count: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut p = if is_prime(start) {
        start.clone()
    } else {
        next_prime(start)
    };
    while out.len() < count {
        let next = next_prime(&p);
        out.push(p);
        p = next;
    }
    out
}
