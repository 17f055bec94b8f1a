//! Binary words built from quadratic residues and primitive roots: the Legendre period,
//! spacing-parity words over the whole field, and their windowed variants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear_complexity::FieldSeq;
use crate::numtheory::{
    factorize, legendre_symbol, multiplicative_order_is_maximal, primitive_roots_with,
    quadratic_residues, Factorization, Natural, PrimeModulus, DEFAULT_RHO_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Source {
    QrFull,
    PrFull,
    QrWindow,
    PrWindow,
    Legendre,
}

impl Source {
    pub fn is_window(self) -> bool {
        matches!(self, Source::QrWindow | Source::PrWindow)
    }
}

/// Which residue class a spacing word is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Qr,
    Pr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window<T> {
    pub start: T,
    pub size: u64,
}

/// One period of a binary stream, with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityWord<T> {
    bits: Vec<u8>,
    source: Source,
    p: PrimeModulus<T>,
    window: Option<Window<T>>,
}

impl<T: Natural> ParityWord<T> {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn prime(&self) -> &PrimeModulus<T> {
        &self.p
    }

    pub fn window(&self) -> Option<&Window<T>> {
        self.window.as_ref()
    }

    /// `w_1` first.
    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn to_field_seq(&self) -> FieldSeq {
        FieldSeq::binary(&self.bits).expect("parity bits are 0 or 1")
    }
}

/// Provenance passed to [`positions_to_parity_word`].
#[derive(Clone, Debug)]
pub struct WordMeta<T> {
    pub source: Source,
    pub p: PrimeModulus<T>,
    pub window: Option<Window<T>>,
}

/// Length-`p` period with `x_n = 1` exactly when `n` is a nonzero quadratic residue.
pub fn legendre_sequence<T: Natural>(p: &PrimeModulus<T>) -> ParityWord<T> {
    let mut bits = Vec::new();
    let mut n = T::zero();
    while n < *p.get() {
        bits.push(u8::from(legendre_symbol(&n, p) == 1));
        n = n + T::one();
    }
    ParityWord {
        bits,
        source: Source::Legendre,
        p: p.clone(),
        window: None,
    }
}

fn differences<T: Natural>(sorted: &[T]) -> Vec<T> {
    sorted
        .windows(2)
        .map(|w| w[1].clone() - w[0].clone())
        .collect()
}

fn parities<T: Natural>(values: &[T]) -> Vec<u8> {
    values.iter().map(|v| v.rem_u64(2) as u8).collect()
}

/// Raw (unreduced) spacings of the ascending quadratic residues; `(p - 3) / 2` of them.
pub fn qr_spacings<T: Natural>(p: &PrimeModulus<T>) -> Result<Vec<T>> {
    let qr = quadratic_residues(p);
    if qr.len() < 2 {
        return Err(Error::DegenerateModulus {
            p: p.to_string(),
            what: "quadratic residues",
        });
    }
    Ok(differences(&qr))
}

/// Raw spacings of the ascending primitive roots; `phi(p - 1) - 1` of them.
pub fn pr_spacings<T: Natural>(p: &PrimeModulus<T>) -> Result<Vec<T>> {
    let f = factorize(&p.pred(), DEFAULT_RHO_BUDGET)?;
    let roots = primitive_roots_with(p, &f);
    if roots.len() < 2 {
        return Err(Error::DegenerateModulus {
            p: p.to_string(),
            what: "primitive roots",
        });
    }
    Ok(differences(&roots))
}

pub fn spacings<T: Natural>(p: &PrimeModulus<T>, kind: Kind) -> Result<Vec<T>> {
    match kind {
        Kind::Qr => qr_spacings(p),
        Kind::Pr => pr_spacings(p),
    }
}

/// Quadratic-residue spacing parities over the whole field.
pub fn qr_parity_word<T: Natural>(p: &PrimeModulus<T>) -> Result<ParityWord<T>> {
    Ok(ParityWord {
        bits: parities(&qr_spacings(p)?),
        source: Source::QrFull,
        p: p.clone(),
        window: None,
    })
}

/// Primitive-root spacing parities over the whole field.
pub fn pr_parity_word<T: Natural>(p: &PrimeModulus<T>) -> Result<ParityWord<T>> {
    Ok(ParityWord {
        bits: parities(&pr_spacings(p)?),
        source: Source::PrFull,
        p: p.clone(),
        window: None,
    })
}

pub fn parity_word<T: Natural>(p: &PrimeModulus<T>, kind: Kind) -> Result<ParityWord<T>> {
    match kind {
        Kind::Qr => qr_parity_word(p),
        Kind::Pr => pr_parity_word(p),
    }
}

fn check_window<T: Natural>(p: &PrimeModulus<T>, start: &T, size: u64) -> Result<()> {
    let fits = size >= 2
        && *start >= T::one()
        && T::from_u64_lossless(size) < *p.get()
        && *start <= p.get().clone() - T::from_u64_lossless(size);
    if fits {
        Ok(())
    } else {
        Err(Error::WindowOutOfRange {
            p: p.to_string(),
            start: start.to_string(),
            size,
        })
    }
}

fn window_positions<T: Natural>(
    p: &PrimeModulus<T>,
    start: &T,
    size: u64,
    hit: impl Fn(&T) -> bool,
) -> Result<Vec<u64>> {
    check_window(p, start, size)?;
    let mut out = Vec::new();
    let mut x = start.clone();
    for k in 1..=size {
        if hit(&x) {
            out.push(k);
        }
        x = x + T::one();
    }
    Ok(out)
}

/// 1-based positions `k` in `1..=size` where `start + k - 1` is a quadratic residue.
pub fn window_qr_positions<T: Natural>(
    p: &PrimeModulus<T>,
    start: &T,
    size: u64,
) -> Result<Vec<u64>> {
    window_positions(p, start, size, |x| legendre_symbol(x, p) == 1)
}

/// 1-based positions `k` in `1..=size` where `start + k - 1` is a primitive root.
pub fn window_pr_positions<T: Natural>(
    p: &PrimeModulus<T>,
    start: &T,
    size: u64,
    fpm1: &Factorization<T>,
) -> Result<Vec<u64>> {
    window_positions(p, start, size, |x| {
        multiplicative_order_is_maximal(x, p, fpm1)
    })
}

/// Consecutive differences of `positions`, reduced mod 2.
pub fn positions_to_parity_word<T: Natural>(
    positions: &[u64],
    meta: WordMeta<T>,
) -> Result<ParityWord<T>> {
    if positions.len() < 2 {
        return Err(Error::DegenerateWindow {
            hits: positions.len(),
        });
    }
    Ok(ParityWord {
        bits: positions
            .windows(2)
            .map(|w| ((w[1] - w[0]) & 1) as u8)
            .collect(),
        source: meta.source,
        p: meta.p,
        window: meta.window,
    })
}

/// Histogram of raw spacing values.
pub fn spacing_histogram<T: Natural>(spacings: &[T]) -> BTreeMap<T, usize> {
    let mut out = BTreeMap::new();
    for s in spacings {
        *out.entry(s.clone()).or_default() += 1;
    }
    out
}
