//! Number theory over arbitrary-width unsigned integers: primality, factorization,
//! Legendre symbols, primitive roots.

mod ecm;
mod factor;
pub(crate) mod montgomery;
mod natural;
mod primality;

use std::fmt;

pub use ecm::DEFAULT_ECM_CURVES;
pub use factor::{euler_phi, factorize, factorize_with, Factorization, DEFAULT_RHO_BUDGET};
pub use natural::Natural;
pub use primality::{is_prime, next_prime, primes_from, sieve, small_primes, witness_schedule};

use crate::error::{Error, Result};

/// An odd prime, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeModulus<T>(T);

impl<T: Natural> PrimeModulus<T> {
    pub fn new(p: T) -> Result<Self> {
        if p < T::from_u64_lossless(3) || !p.is_odd_value() || !is_prime(&p) {
            return Err(Error::NotOddPrime(p.to_string()));
        }
        Ok(Self(p))
    }

    pub fn get(&self) -> &T {
        &self.0
    }

    pub fn into_inner(self) -> T {
        self.0
    }

    /// `p - 1`
    pub fn pred(&self) -> T {
        self.0.clone() - T::one()
    }

    /// `(p - 1) / 2`
    pub fn half_order(&self) -> T {
        self.pred() / T::from_u64_lossless(2)
    }
}

impl<T: fmt::Display> fmt::Display for PrimeModulus<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Legendre symbol `(a / p)` via Euler's criterion `a^((p-1)/2) mod p`.
pub fn legendre_symbol<T: Natural>(a: &T, p: &PrimeModulus<T>) -> i8 {
    let a = a.mod_floor(p.get());
    if a.is_zero() {
        return 0;
    }
    if a.pow_mod(&p.half_order(), p.get()).is_one() {
        1
    } else {
        -1
    }
}

/// True iff `g` generates the multiplicative group mod `p`, i.e. `g^((p-1)/q) != 1` for
/// every prime `q` dividing `p - 1`. `fpm1` must factor `p - 1`.
pub fn multiplicative_order_is_maximal<T: Natural>(
    g: &T,
    p: &PrimeModulus<T>,
    fpm1: &Factorization<T>,
) -> bool {
    debug_assert!(fpm1.product() == p.pred());
    let g = g.mod_floor(p.get());
    if g.is_zero() {
        return false;
    }
    let pm1 = p.pred();
    fpm1.primes()
        .all(|q| !g.pow_mod(&(pm1.clone() / q.clone()), p.get()).is_one())
}

/// The `(p - 1) / 2` quadratic residues mod `p`, ascending; the squares of `1..=(p-1)/2`.
pub fn quadratic_residues<T: Natural>(p: &PrimeModulus<T>) -> Vec<T> {
    let half = p.half_order();
    let mut out = Vec::new();
    let mut k = T::one();
    while k <= half {
        out.push(k.mul_mod(&k, p.get()));
        k = k + T::one();
    }
    out.sort();
    out
}

/// All primitive roots mod `p`, ascending, found by testing every `g` in `[2, p - 1]`.
pub fn primitive_roots_with<T: Natural>(p: &PrimeModulus<T>, fpm1: &Factorization<T>) -> Vec<T> {
    let mut out = Vec::new();
    let mut g = T::from_u64_lossless(2);
    let pm1 = p.pred();
    while g <= pm1 {
        if multiplicative_order_is_maximal(&g, p, fpm1) {
            out.push(g.clone());
        }
        g = g + T::one();
    }
    out
}

/// [`primitive_roots_with`] after factoring `p - 1`.
pub fn primitive_roots<T: Natural>(p: &PrimeModulus<T>) -> Result<Vec<T>> {
    let f = factorize(&p.pred(), DEFAULT_RHO_BUDGET)?;
    Ok(primitive_roots_with(p, &f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn pm(p: u64) -> PrimeModulus<u64> {
        PrimeModulus::new(p).unwrap()
    }

    /// Order of g by repeated multiplication.
    fn brute_order(g: u64, p: u64) -> u64 {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    }

    #[test]
    fn prime_modulus_rejects() {
        assert!(PrimeModulus::new(2u64).is_err());
        assert!(PrimeModulus::new(9u64).is_err());
        assert!(PrimeModulus::new(1u64).is_err());
        assert_eq!(pm(11).half_order(), 5);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(&1, &pm(13)), 1);
        assert_eq!(legendre_symbol(&3, &pm(7)), -1);
        assert_eq!(legendre_symbol(&0, &pm(11)), 0);
        assert_eq!(legendre_symbol(&22, &pm(11)), 0);
        let big = PrimeModulus::new(BigUint::from(7u8)).unwrap();
        assert_eq!(legendre_symbol(&BigUint::from(3u8), &big), -1);
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in primes_from(&3u64, 100).into_iter().take_while(|&p| p <= 61) {
            let p = pm(p);
            for a in 1..*p.get() {
                for b in 1..*p.get() {
                    assert_eq!(
                        legendre_symbol(&(a * b), &p),
                        legendre_symbol(&a, &p) * legendre_symbol(&b, &p)
                    );
                }
            }
        }
    }

    #[test]
    fn primitive_root_examples() {
        let f11 = factorize(&10u64, 100).unwrap();
        let f7 = factorize(&6u64, 100).unwrap();
        assert!(multiplicative_order_is_maximal(&2, &pm(11), &f11));
        assert!(!multiplicative_order_is_maximal(&2, &pm(7), &f7));
        assert!(!multiplicative_order_is_maximal(&1, &pm(7), &f7));
        assert_eq!(primitive_roots(&pm(11)).unwrap(), vec![2, 6, 7, 8]);
        assert_eq!(primitive_roots(&pm(7)).unwrap(), vec![3, 5]);
        assert_eq!(primitive_roots(&pm(13)).unwrap(), vec![2, 6, 7, 11]);
        assert_eq!(primitive_roots(&pm(3)).unwrap(), vec![2]);
    }

    #[test]
    fn qr_examples() {
        assert_eq!(quadratic_residues(&pm(7)), vec![1, 2, 4]);
        assert_eq!(quadratic_residues(&pm(11)), vec![1, 3, 4, 5, 9]);
        assert_eq!(quadratic_residues(&pm(5)), vec![1, 4]);
    }

    #[test]
    fn counts_match_totients_up_to_1000() {
        for p in primes_from(&5u64, 200)
            .into_iter()
            .take_while(|&p| p <= 1000)
        {
            let p = pm(p);
            let qr = quadratic_residues(&p);
            assert_eq!(qr.len() as u64, p.half_order());
            qr.windows(2).for_each(|w| assert!(w[0] < w[1]));
            let phi = factorize(&p.pred(), 1000).unwrap().euler_phi();
            assert_eq!(primitive_roots(&p).unwrap().len() as u64, phi);
        }
    }

    #[test]
    fn primitive_roots_by_brute_order_and_are_nonresidues() {
        for p in primes_from(&3u64, 60).into_iter().take_while(|&p| p <= 200) {
            let m = pm(p);
            let roots = primitive_roots(&m).unwrap();
            let brute: Vec<u64> = (2..p).filter(|&g| brute_order(g, p) == p - 1).collect();
            assert_eq!(roots, brute, "p = {p}");
            for g in roots {
                assert_eq!(legendre_symbol(&g, &m), -1);
            }
        }
    }
}
