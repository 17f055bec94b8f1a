//! Lenstra's elliptic curve method on Montgomery curves, x-only arithmetic.
//!
//! Used only after rho has spent its budget: it finds the 15-20 digit factors that show up
//! when `p - 1` has two large prime factors, which rho cannot reach in reasonable time.
//! Curves use Suyama's parametrization with `sigma = 6, 7, 8, ...`, so runs are
//! deterministic. Stage 2 is the standard continuation with step 2310.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::montgomery::{from_limbs, Monty};
use super::primality::sieve;

/// Stage-1 bound; suited to factors up to about 20 digits.
pub const ECM_B1: u64 = 11_000;
/// Stage-2 bound.
pub const ECM_B2: u64 = 1_100_000;
/// Curves tried before giving up.
pub const DEFAULT_ECM_CURVES: u32 = 300;

const STEP: u64 = 2310;

#[derive(Clone, Copy)]
struct Point<const N: usize> {
    x: [u64; N],
    z: [u64; N],
}

struct Curve<'a, const N: usize> {
    m: &'a Monty<N>,
    /// `(A + 2) / 4` in Montgomery form.
    a24: [u64; N],
}

impl<const N: usize> Curve<'_, N> {
    fn dbl(&self, p: &Point<N>) -> Point<N> {
        let m = self.m;
        let s = m.add(&p.x, &p.z);
        let d = m.sub(&p.x, &p.z);
        let t1 = m.mul(&s, &s);
        let t2 = m.mul(&d, &d);
        let t3 = m.sub(&t1, &t2);
        Point {
            x: m.mul(&t1, &t2),
            z: m.mul(&t3, &m.add(&t2, &m.mul(&self.a24, &t3))),
        }
    }

    /// `p + q` given `diff = p - q`.
    fn add(&self, p: &Point<N>, q: &Point<N>, diff: &Point<N>) -> Point<N> {
        let m = self.m;
        let u = m.mul(&m.sub(&p.x, &p.z), &m.add(&q.x, &q.z));
        let v = m.mul(&m.add(&p.x, &p.z), &m.sub(&q.x, &q.z));
        let s = m.add(&u, &v);
        let d = m.sub(&u, &v);
        Point {
            x: m.mul(&diff.z, &m.mul(&s, &s)),
            z: m.mul(&diff.x, &m.mul(&d, &d)),
        }
    }

    /// Montgomery ladder, `k >= 1`.
    fn mul(&self, p: &Point<N>, k: u64) -> Point<N> {
        if k == 1 {
            return *p;
        }
        let mut r0 = *p;
        let mut r1 = self.dbl(p);
        for bit in (0..63 - k.leading_zeros()).rev() {
            if k >> bit & 1 == 1 {
                r0 = self.add(&r1, &r0, p);
                r1 = self.dbl(&r1);
            } else {
                r1 = self.add(&r0, &r1, p);
                r0 = self.dbl(&r0);
            }
        }
        r0
    }
}

enum CurveOutcome {
    Factor(BigUint),
    Nothing,
}

fn nontrivial(g: BigUint, n: &BigUint) -> CurveOutcome {
    if !g.is_one() && g != *n && !g.is_zero() {
        CurveOutcome::Factor(g)
    } else {
        CurveOutcome::Nothing
    }
}

fn one_curve<const N: usize>(
    m: &Monty<N>,
    n: &BigUint,
    sigma: u64,
    primes: &[u32],
) -> CurveOutcome {
    // Suyama: u = sigma^2 - 5, v = 4 sigma, x0 = u^3, z0 = v^3,
    // (A + 2) / 4 = (v - u)^3 (3u + v) / (16 u^3 v).
    let sigma = BigUint::from(sigma);
    let u = (&sigma * &sigma + n - 5u32) % n;
    let v = (&sigma * 4u32) % n;
    let u3 = u.modpow(&BigUint::from(3u8), n);
    let v3 = v.modpow(&BigUint::from(3u8), n);
    let vmu = (&v + n - &u) % n;
    let num = vmu.modpow(&BigUint::from(3u8), n) * ((&u * 3u32 + &v) % n) % n;
    let den = (&u3 * &v * 16u32) % n;
    let Some(inv) = den.modinv(n) else {
        return nontrivial(den.gcd(n), n);
    };
    let a24 = num * inv % n;
    let curve = Curve {
        m,
        a24: m.to_monty(&a24),
    };
    let mut q = Point {
        x: m.to_monty(&u3),
        z: m.to_monty(&v3),
    };

    // stage 1
    for &p in primes.iter().take_while(|&&p| p as u64 <= ECM_B1) {
        let p = p as u64;
        let mut pe = p;
        while pe * p <= ECM_B1 {
            pe *= p;
        }
        q = curve.mul(&q, pe);
    }
    let g = from_limbs(&q.z).gcd(n);
    if !g.is_one() {
        return nontrivial(g, n);
    }

    // stage 2: every prime in (B1, B2] is m * STEP +- j with j odd, j < STEP / 2,
    // gcd(j, STEP) = 1; [m STEP]Q = +-[j]Q makes X_m Z_j - X_j Z_m vanish mod the factor.
    let q2 = curve.dbl(&q);
    let mut babies: Vec<(u64, Point<N>)> = Vec::new();
    let mut prev = q; // [j - 2]Q, starting with [-1]Q = [1]Q
    let mut cur = q;
    let mut j = 1u64;
    while j < STEP / 2 {
        if j.gcd(&STEP) == 1 {
            babies.push((j, cur));
        }
        let next = curve.add(&cur, &q2, &prev);
        prev = cur;
        cur = next;
        j += 2;
    }
    let giant = curve.mul(&q, STEP);
    let m_lo = ECM_B1 / STEP;
    let m_hi = ECM_B2.div_ceil(STEP);
    let mut r_prev = curve.mul(&q, m_lo * STEP);
    let mut r = curve.mul(&q, (m_lo + 1) * STEP);
    let mut acc = m.to_monty(&BigUint::one());
    for _ in (m_lo + 1)..=m_hi {
        for (_, b) in &babies {
            let t = m.sub(&m.mul(&r.x, &b.z), &m.mul(&b.x, &r.z));
            acc = m.mul(&acc, &t);
        }
        let next = curve.add(&r, &giant, &r_prev);
        r_prev = r;
        r = next;
    }
    nontrivial(from_limbs(&acc).gcd(n), n)
}

fn ecm_limbs<const N: usize>(n: &BigUint, curves: u32) -> Option<BigUint> {
    let m = Monty::<N>::new(n)?;
    let primes = sieve(ECM_B1 as usize + 1);
    (0..curves as u64).find_map(|i| match one_curve(&m, n, 6 + i, &primes) {
        CurveOutcome::Factor(d) => Some(d),
        CurveOutcome::Nothing => None,
    })
}

/// Tries up to `curves` curves to find a nontrivial factor of the odd composite `n`.
pub(crate) fn ecm_split(n: &BigUint, curves: u32) -> Option<BigUint> {
    if curves == 0 || !n.bit(0) {
        return None;
    }
    match n.to_u64_digits().len() {
        0 | 1 => ecm_limbs::<1>(n, curves),
        2 => ecm_limbs::<2>(n, curves),
        3 => ecm_limbs::<3>(n, curves),
        4 => ecm_limbs::<4>(n, curves),
        5..=8 => ecm_limbs::<8>(n, curves),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::next_prime;

    #[test]
    fn splits_two_large_primes() {
        // Two ~60-bit primes: beyond a practical rho budget.
        let p = next_prime(&BigUint::from(1_000_000_000_000_000_003u64));
        let q = next_prime(&BigUint::from(3_000_000_000_000_000_017u64));
        let n = &p * &q;
        let d = ecm_split(&n, DEFAULT_ECM_CURVES).expect("ECM finds a factor");
        assert!(d == p || d == q);
    }

    #[test]
    fn refuses_even_and_zero_curves() {
        assert!(ecm_split(&BigUint::from(10u8), 5).is_none());
        assert!(ecm_split(&BigUint::from(15u8 * 7), 0).is_none());
    }
}
