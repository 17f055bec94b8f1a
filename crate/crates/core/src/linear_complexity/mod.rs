//! Berlekamp-Massey over small prime fields, LFSR replay, and the linear complexity of
//! periodic sequences.

mod gf2;

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use gf2::berlekamp_massey_gf2;

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, Natural, PrimeModulus};

/// Largest supported field characteristic; products of two residues must fit in `u64`.
pub const MAX_CHARACTERISTIC: u32 = 1 << 31;

/// A finite sequence over GF(q), q a small prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSeq {
    modulus: u32,
    elems: Vec<u32>,
}

impl FieldSeq {
    pub fn new(modulus: u32, elems: Vec<u32>) -> Result<Self> {
        if modulus > MAX_CHARACTERISTIC || !is_prime(&(modulus as u64)) {
            return Err(Error::InvalidCharacteristic(modulus));
        }
        if let Some((index, &value)) = elems.iter().enumerate().find(|(_, &v)| v >= modulus) {
            return Err(Error::UnreducedElement {
                index,
                value,
                modulus,
            });
        }
        Ok(Self { modulus, elems })
    }

    /// Binary sequence; any nonzero byte is rejected.
    pub fn binary(bits: &[u8]) -> Result<Self> {
        Self::new(2, bits.iter().map(|&b| b as u32).collect())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `self ∥ self`
    pub fn doubled(&self) -> Self {
        let mut elems = Vec::with_capacity(2 * self.elems.len());
        elems.extend_from_slice(&self.elems);
        elems.extend_from_slice(&self.elems);
        Self {
            modulus: self.modulus,
            elems,
        }
    }
}

/// Recurrence `s_n = c_1 s_{n-1} + ... + c_L s_{n-L} (mod q)`; the connection polynomial is
/// `1 - c_1 x - ... - c_L x^L`. `L = 0` generates only the zero sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeedbackPolynomial {
    modulus: u32,
    coeffs: Vec<u32>,
}

impl FeedbackPolynomial {
    pub fn new(modulus: u32, coeffs: Vec<u32>) -> Result<Self> {
        // validates modulus and reduction
        let checked = FieldSeq::new(modulus, coeffs)?;
        Ok(Self {
            modulus,
            coeffs: checked.elems,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `c_1..c_L`
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Register length `L`.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients of the connection polynomial, constant term first (always 1).
    pub fn connection_polynomial(&self) -> Vec<u32> {
        let q = self.modulus;
        std::iter::once(1)
            .chain(self.coeffs.iter().map(|&c| (q - c) % q))
            .collect()
    }

    /// Connection polynomial in `x`, highest power first, e.g. `x^2 + x + 1`.
    pub fn polynomial_string(&self) -> String {
        let terms: Vec<String> = self
            .connection_polynomial()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coeff = if c == 1 || i == 0 {
                    String::new()
                } else {
                    format!("{c}*")
                };
                match i {
                    0 => c.to_string(),
                    1 => format!("{coeff}x"),
                    _ => format!("{coeff}x^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

impl fmt::Display for FeedbackPolynomial {
    /// Recurrence form: `s_n = s_(n-1) + s_(n-2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                if c == 1 {
                    format!("s_(n-{})", i + 1)
                } else {
                    format!("{c}*s_(n-{})", i + 1)
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "s_n = 0")
        } else {
            write!(f, "s_n = {}", terms.join(" + "))
        }
    }
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // q prime: a^(q-2)
    a.pow_mod(&(q - 2), &q)
}

/// Massey's algorithm over GF(q) in `O(n^2)` field operations.
fn berlekamp_massey_generic(s: &FieldSeq) -> FeedbackPolynomial {
    let q = s.modulus as u64;
    let seq = &s.elems;
    let n_total = seq.len();
    let mut c: Vec<u64> = vec![0; n_total + 2];
    let mut b: Vec<u64> = vec![0; n_total + 2];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b_disc = 1u64;

    for n in 0..n_total {
        let mut d = seq[n] as u64;
        for i in 1..=l {
            d = (d + c[i] * seq[n - i] as u64) % q;
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = d * inv_mod(b_disc, q) % q;
        let saved = (2 * l <= n).then(|| c.clone());
        for i in 0..(n_total + 2 - m) {
            if b[i] != 0 {
                c[i + m] = (c[i + m] + q - coef * b[i] % q) % q;
            }
        }
        if let Some(saved) = saved {
            l = n + 1 - l;
            b = saved;
            b_disc = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    let coeffs = (1..=l).map(|i| ((q - c[i]) % q) as u32).collect();
    FeedbackPolynomial {
        modulus: s.modulus,
        coeffs,
    }
}

/// A minimal-length feedback polynomial that regenerates `s` from its first `L` terms.
///
/// Binary input goes through the bit-packed routine; other characteristics use the
/// generic field implementation. Both return the same `L`.
pub fn berlekamp_massey(s: &FieldSeq) -> FeedbackPolynomial {
    if s.modulus == 2 {
        let bits: Vec<u8> = s.elems.iter().map(|&e| e as u8).collect();
        let (_, coeffs) = berlekamp_massey_gf2(&bits);
        FeedbackPolynomial {
            modulus: 2,
            coeffs: coeffs.into_iter().map(u32::from).collect(),
        }
    } else {
        berlekamp_massey_generic(s)
    }
}

/// The generic-field Berlekamp-Massey, exposed so the packed GF(2) path can be
/// cross-checked against it.
pub fn berlekamp_massey_reference(s: &FieldSeq) -> FeedbackPolynomial {
    berlekamp_massey_generic(s)
}

/// First `count` terms of the LFSR defined by `f`, started from `seed`.
pub fn lfsr_replay(f: &FeedbackPolynomial, seed: &[u32], count: usize) -> Result<FieldSeq> {
    let l = f.degree();
    if seed.len() != l {
        return Err(Error::SeedLength {
            got: seed.len(),
            want: l,
        });
    }
    let q = f.modulus as u64;
    let mut out: Vec<u32> = Vec::with_capacity(count.max(l));
    out.extend_from_slice(seed);
    while out.len() < count {
        let n = out.len();
        let next = f.coeffs.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            (acc + c as u64 * out[n - 1 - i] as u64) % q
        });
        out.push(next as u32);
    }
    out.truncate(count);
    FieldSeq::new(f.modulus, out)
}

/// Linear complexity of the infinite periodic extension of `period`: the Berlekamp-Massey
/// degree of two concatenated copies. Never exceeds `period.len()`.
pub fn periodic_complexity(period: &FieldSeq) -> usize {
    let doubled = period.doubled();
    if period.modulus == 2 {
        let bits: Vec<u8> = doubled.elems.iter().map(|&e| e as u8).collect();
        berlekamp_massey_gf2(&bits).0
    } else {
        berlekamp_massey_generic(&doubled).degree()
    }
}

/// Same as [`periodic_complexity`] for a binary word given as bytes in {0, 1}.
pub fn periodic_complexity_bits(period: &[u8]) -> usize {
    let mut doubled = Vec::with_capacity(2 * period.len());
    doubled.extend_from_slice(period);
    doubled.extend_from_slice(period);
    berlekamp_massey_gf2(&doubled).0
}

/// Known linear complexity of the Legendre sequence of period `p`, by `p mod 8`.
pub fn legendre_closed_form<T: Natural>(p: &PrimeModulus<T>) -> T {
    let p = p.get().clone();
    let one = T::one();
    let two = T::from_u64_lossless(2);
    match p.rem_u64(8) {
        7 => (p + one) / two,
        1 => (p - one) / two,
        3 => p,
        5 => p - one,
        _ => unreachable!("odd prime"),
    }
}

/// One prime's measured complexity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexityRecord<T> {
    pub p: T,
    pub period_length: u64,
    pub complexity: u64,
    #[serde(with = "crate::experiments::ratio_str")]
    pub normalized: Ratio<u64>,
}

impl<T> ComplexityRecord<T> {
    /// Panics if `complexity > period_length` or the period is empty.
    pub fn new(p: T, period_length: u64, complexity: u64) -> Self {
        assert!(period_length > 0, "empty period");
        assert!(complexity <= period_length, "complexity exceeds period");
        Self {
            p,
            period_length,
            complexity,
            normalized: Ratio::new(complexity, period_length),
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.complexity == self.period_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(bits: &[u32]) -> FieldSeq {
        FieldSeq::new(2, bits.to_vec()).unwrap()
    }

    #[test]
    fn bm_examples() {
        assert_eq!(berlekamp_massey(&bin(&[0, 0, 0, 0])).degree(), 0);
        let f = berlekamp_massey(&bin(&[1, 1, 1, 1]));
        assert_eq!(f.coeffs(), &[1]);
        let f = berlekamp_massey(&bin(&[0, 1, 1, 0, 1, 1]));
        assert_eq!(f.coeffs(), &[1, 1]);
        assert_eq!(f.to_string(), "s_n = s_(n-1) + s_(n-2)");
        assert_eq!(f.polynomial_string(), "x^2 + x + 1");
        assert_eq!(berlekamp_massey_reference(&bin(&[0, 1, 1, 0, 1, 1])), f);
    }

    #[test]
    fn replay_examples() {
        let f = FeedbackPolynomial::new(2, vec![1]).unwrap();
        assert_eq!(lfsr_replay(&f, &[1], 4).unwrap().elems(), &[1, 1, 1, 1]);
        let f = FeedbackPolynomial::new(2, vec![1, 1]).unwrap();
        assert_eq!(
            lfsr_replay(&f, &[0, 1], 6).unwrap().elems(),
            &[0, 1, 1, 0, 1, 1]
        );
        let f = FeedbackPolynomial::new(2, vec![]).unwrap();
        assert_eq!(lfsr_replay(&f, &[], 3).unwrap().elems(), &[0, 0, 0]);
        assert_eq!(f.to_string(), "s_n = 0");
        assert!(matches!(
            lfsr_replay(&f, &[1], 3),
            Err(Error::SeedLength { got: 1, want: 0 })
        ));
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_complexity(&bin(&[0])), 0);
        assert_eq!(periodic_complexity(&bin(&[0, 1, 1])), 2);
        assert_eq!(periodic_complexity(&bin(&[0, 1, 1, 0])), 3);
        assert_eq!(periodic_complexity_bits(&[0, 1, 1, 0]), 3);
    }

    #[test]
    fn closed_form_examples() {
        let pm = |p: u64| PrimeModulus::new(p).unwrap();
        assert_eq!(legendre_closed_form(&pm(7)), 4);
        assert_eq!(legendre_closed_form(&pm(11)), 11);
        assert_eq!(legendre_closed_form(&pm(13)), 12);
        assert_eq!(legendre_closed_form(&pm(17)), 8);
    }

    #[test]
    fn field_seq_validation() {
        assert!(matches!(
            FieldSeq::new(4, vec![1]),
            Err(Error::InvalidCharacteristic(4))
        ));
        assert!(matches!(
            FieldSeq::new(3, vec![0, 3]),
            Err(Error::UnreducedElement { index: 1, .. })
        ));
        assert!(FieldSeq::binary(&[0, 1, 2]).is_err());
    }

    #[test]
    fn ternary_polynomial_rendering() {
        // s_n = 2 s_(n-1) over GF(3): 1, 2, 1, 2, ...
        let f = berlekamp_massey(&FieldSeq::new(3, vec![1, 2, 1, 2, 1]).unwrap());
        assert_eq!(f.coeffs(), &[2]);
        assert_eq!(f.to_string(), "s_n = 2*s_(n-1)");
        assert_eq!(f.polynomial_string(), "x + 1");
    }

    #[test]
    fn record_normalizes_exactly() {
        let r = ComplexityRecord::new(11u64, 4, 3);
        assert_eq!(r.normalized, Ratio::new(3, 4));
        assert!(!r.is_perfect());
        assert!(ComplexityRecord::new(5u64, 1, 1).is_perfect());
    }
}
