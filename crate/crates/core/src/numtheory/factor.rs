//! Complete factorization: trial division below 10^6, then Brent's variant of Pollard rho on
//! whatever cofactor is left, under a per-split iteration budget. Optionally, cofactors rho
//! gives up on are handed to ECM.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ecm::ecm_split;
use super::montgomery::{from_limbs, Monty};
use super::natural::Natural;
use super::primality::{is_prime, small_primes};
use crate::error::{Error, Result};

/// Default per-split budget for rho, in iterations of `x -> x^2 + c`.
pub const DEFAULT_RHO_BUDGET: u64 = 20_000_000;

/// Products of `|x - y|` are accumulated this many steps between gcds.
const GCD_BATCH: u64 = 256;

/// Prime factorization, primes strictly ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization<T> {
    factors: Vec<(T, u32)>,
}

impl<T: Natural> Factorization<T> {
    /// Builds from `(prime, exponent)` pairs, sorting and merging; every base must be prime
    /// and every exponent positive.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (T, u32)>) -> Result<Self> {
        let mut merged: BTreeMap<T, u32> = BTreeMap::new();
        for (p, e) in pairs {
            if e == 0 {
                return Err(Error::Config(format!("zero exponent for {p}")));
            }
            if !is_prime(&p) {
                return Err(Error::Config(format!("{p} is not prime")));
            }
            *merged.entry(p).or_default() += e;
        }
        Ok(Self {
            factors: merged.into_iter().collect(),
        })
    }

    pub fn factors(&self) -> &[(T, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &T> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// The integer this factorization describes.
    pub fn product(&self) -> T {
        let mut acc = T::one();
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc * p.clone();
            }
        }
        acc
    }

    /// Euler's totient of [`Self::product`].
    pub fn euler_phi(&self) -> T {
        let mut acc = T::one();
        for (p, e) in &self.factors {
            acc = acc * (p.clone() - T::one());
            for _ in 1..*e {
                acc = acc * p.clone();
            }
        }
        acc
    }
}

/// Free-function form of [`Factorization::euler_phi`].
pub fn euler_phi<T: Natural>(f: &Factorization<T>) -> T {
    f.euler_phi()
}

enum RhoOutcome {
    Factor(BigUint),
    /// The walk closed its cycle without separating a factor; retry with another constant.
    Cycle,
    OutOfBudget,
}

fn gcd_limbs<const N: usize>(v: &[u64; N], n: &BigUint) -> BigUint {
    from_limbs(v).gcd(n)
}

fn rho_brent<const N: usize>(n: &BigUint, c: u64, budget: &mut u64) -> RhoOutcome {
    let Some(m) = Monty::<N>::new(n) else {
        return RhoOutcome::Cycle;
    };
    let cm = m.to_monty(&BigUint::from(c));
    let f = |y: &[u64; N]| m.add(&m.mul(y, y), &cm);
    let one = m.to_monty(&BigUint::one());

    let mut y = m.to_monty(&BigUint::from(2u64 + c));
    let mut x = y;
    let mut ys = y;
    let mut q = one;
    let mut g = BigUint::one();
    let mut r = 1u64;

    while g.is_one() {
        x = y;
        for _ in 0..r {
            y = f(&y);
        }
        *budget = budget.saturating_sub(r);
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y;
            let steps = GCD_BATCH.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = m.mul(&q, &m.sub(&x, &y));
            }
            *budget = budget.saturating_sub(steps);
            g = gcd_limbs(&q, n);
            k += steps;
            if g.is_one() && *budget == 0 {
                return RhoOutcome::OutOfBudget;
            }
        }
        r *= 2;
    }
    if g == *n {
        // Batched product hit zero; replay the last batch one step at a time.
        loop {
            ys = f(&ys);
            g = gcd_limbs(&m.sub(&x, &ys), n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g == *n || g.is_zero() {
        RhoOutcome::Cycle
    } else {
        RhoOutcome::Factor(g)
    }
}

fn rho_dispatch(n: &BigUint, c: u64, budget: &mut u64) -> RhoOutcome {
    match n.to_u64_digits().len() {
        0 | 1 => rho_brent::<1>(n, c, budget),
        2 => rho_brent::<2>(n, c, budget),
        3 => rho_brent::<3>(n, c, budget),
        4 => rho_brent::<4>(n, c, budget),
        5..=8 => rho_brent::<8>(n, c, budget),
        9..=16 => rho_brent::<16>(n, c, budget),
        _ => RhoOutcome::OutOfBudget,
    }
}

/// Finds a nontrivial factor of the odd composite `n`, spending at most `budget` rho
/// iterations across all constants tried.
fn split(n: &BigUint, budget: u64) -> Option<BigUint> {
    let mut left = budget;
    let mut c = 1u64;
    while left > 0 {
        match rho_dispatch(n, c, &mut left) {
            RhoOutcome::Factor(d) => return Some(d),
            RhoOutcome::Cycle => c += 1,
            RhoOutcome::OutOfBudget => return None,
        }
    }
    None
}

/// Factors `n >= 1` completely.
///
/// Trial division removes every prime below 10^6; each composite cofactor that remains is
/// split by Brent-Pollard rho with at most `budget` iterations per split. Exhausting the
/// budget returns [`Error::BudgetExhausted`] rather than a partial answer.
pub fn factorize<T: Natural>(n: &T, budget: u64) -> Result<Factorization<T>> {
    factorize_with(n, budget, 0)
}

/// [`factorize`], but a cofactor that exhausts the rho budget gets up to `ecm_curves`
/// elliptic curves before the attempt is declared a failure.
pub fn factorize_with<T: Natural>(n: &T, budget: u64, ecm_curves: u32) -> Result<Factorization<T>> {
    if n.is_zero() {
        return Err(Error::Config("cannot factor 0".into()));
    }
    let mut rest = n.to_biguint();
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();

    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let p64 = p as u64;
        if rest.bits() <= 64 {
            let r = rest.to_u64().expect("checked width");
            if p64.saturating_mul(p64) > r {
                break;
            }
        }
        let mut e = 0u32;
        while rest.rem_u64(p64) == 0 {
            rest /= p64;
            e += 1;
        }
        if e > 0 {
            found.insert(BigUint::from(p64), e);
        }
    }

    let mut pending = Vec::new();
    if !rest.is_one() {
        pending.push(rest);
    }
    while let Some(m) = pending.pop() {
        if is_prime(&m) {
            *found.entry(m).or_default() += 1;
            continue;
        }
        let d = split(&m, budget)
            .or_else(|| ecm_split(&m, ecm_curves))
            .ok_or_else(|| Error::BudgetExhausted {
                n: m.to_string(),
                budget,
                ecm_curves,
            })?;
        let other = &m / &d;
        pending.push(d);
        pending.push(other);
    }

    let factors = found
        .into_iter()
        .map(|(p, e)| {
            (
                T::from_biguint(&p).expect("factor of n fits the type of n"),
                e,
            )
        })
        .collect();
    Ok(Factorization { factors })
}
