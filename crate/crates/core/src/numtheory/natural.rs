//! The unsigned integer abstraction the number-theoretic routines are written against.
//!
//! Everything in [`crate::numtheory`] is generic over [`Natural`], so the same code serves
//! the machine-word sweeps (`u64`) and the 100-140 bit Monte Carlo moduli (`BigUint`).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive, Unsigned};

/// An unsigned integer type with the modular operations the primality, factoring and
/// residue code needs.
pub trait Natural:
    Integer
    + Unsigned
    + Clone
    + Debug
    + Display
    + Hash
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `self * rhs mod m`. Operands must already be reduced.
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self;

    /// `self ^ exp mod m` by binary exponentiation.
    fn pow_mod(&self, exp: &Self, m: &Self) -> Self;

    /// Number of significant bits; 0 for zero.
    fn bit_length(&self) -> u64;

    /// Remainder modulo a machine word, used for cheap sieving.
    fn rem_u64(&self, d: u64) -> u64;

    fn to_biguint(&self) -> BigUint;

    /// `None` if the value does not fit.
    fn from_biguint(v: &BigUint) -> Option<Self>;

    fn from_u64_lossless(v: u64) -> Self;

    /// Parity of the value.
    fn is_odd_value(&self) -> bool {
        self.rem_u64(2) == 1
    }
}

impl Natural for u64 {
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        ((*self as u128 * *rhs as u128) % *m as u128) as u64
    }

    fn pow_mod(&self, exp: &Self, m: &Self) -> Self {
        if *m == 1 {
            return 0;
        }
        let m = *m as u128;
        let mut base = *self as u128 % m;
        let mut e = *exp;
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u64
    }

    fn bit_length(&self) -> u64 {
        (64 - self.leading_zeros()) as u64
    }

    fn rem_u64(&self, d: u64) -> u64 {
        self % d
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        v.to_u64()
    }

    fn from_u64_lossless(v: u64) -> Self {
        v
    }
}

impl Natural for BigUint {
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        (self * rhs) % m
    }

    fn pow_mod(&self, exp: &Self, m: &Self) -> Self {
        self.modpow(exp, m)
    }

    fn bit_length(&self) -> u64 {
        self.bits()
    }

    fn rem_u64(&self, d: u64) -> u64 {
        (self % d)
            .to_u64()
            .expect("remainder below a u64 divisor fits")
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }

    fn from_u64_lossless(v: u64) -> Self {
        BigUint::from(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_and_big_agree() {
        let m = 1_000_000_007u64;
        for (a, e) in [(2u64, 10u64), (123_456_789, 1_000_000_005), (0, 0), (5, 0)] {
            let w = a.pow_mod(&e, &m);
            let b = BigUint::from(a).pow_mod(&BigUint::from(e), &BigUint::from(m));
            assert_eq!(BigUint::from(w), b);
        }
        assert_eq!(u64::MAX.mul_mod(&u64::MAX, &(u64::MAX - 1)), 1);
    }

    #[test]
    fn bit_lengths() {
        assert_eq!(0u64.bit_length(), 0);
        assert_eq!(1u64.bit_length(), 1);
        assert_eq!(BigUint::from(1u8).bit_length(), 1);
        assert_eq!((BigUint::from(1u8) << 100u32).bit_length(), 101);
    }
}
