//! Fixed-width Montgomery arithmetic for the inner loop of Pollard rho.
//!
//! `BigUint` allocates on every product, which dominates the cost of splitting 40-bit and
//! larger cofactors. `Monty<N>` keeps residues in `[u64; N]` limbs (little-endian) and
//! multiplies with the CIOS method.

use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub(crate) struct Monty<const N: usize> {
    n: [u64; N],
    /// `-n^{-1} mod 2^64`
    n0inv: u64,
    r2: [u64; N],
}

pub(crate) type Limbs<const N: usize> = [u64; N];

fn to_limbs<const N: usize>(v: &BigUint) -> Option<Limbs<N>> {
    let digits = v.to_u64_digits();
    if digits.len() > N {
        return None;
    }
    let mut out = [0u64; N];
    out[..digits.len()].copy_from_slice(&digits);
    Some(out)
}

pub(crate) fn from_limbs<const N: usize>(v: &Limbs<N>) -> BigUint {
    let mut bytes = Vec::with_capacity(N * 8);
    for limb in v {
        bytes.extend_from_slice(&limb.to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes)
}

#[inline]
fn geq<const N: usize>(a: &Limbs<N>, b: &Limbs<N>) -> bool {
    for i in (0..N).rev() {
        if a[i] != b[i] {
            return a[i] > b[i];
        }
    }
    true
}

#[inline]
fn sub_in_place<const N: usize>(a: &mut Limbs<N>, b: &Limbs<N>) {
    let mut borrow = false;
    for i in 0..N {
        let (d1, b1) = a[i].overflowing_sub(b[i]);
        let (d2, b2) = d1.overflowing_sub(borrow as u64);
        a[i] = d2;
        borrow = b1 | b2;
    }
}

impl<const N: usize> Monty<N> {
    /// `None` unless `n` is odd, greater than 1, and fits in `N` limbs.
    pub(crate) fn new(n: &BigUint) -> Option<Self> {
        if n.is_zero() || !n.bit(0) || *n == BigUint::from(1u8) {
            return None;
        }
        let limbs = to_limbs::<N>(n)?;
        // Newton iteration for the inverse of n[0] modulo 2^64.
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(limbs[0].wrapping_mul(inv)));
        }
        let r2 = (BigUint::from(1u8) << (128 * N)) % n;
        Some(Self {
            n: limbs,
            n0inv: inv.wrapping_neg(),
            r2: to_limbs::<N>(&r2)?,
        })
    }

    #[inline]
    pub(crate) fn mul(&self, a: &Limbs<N>, b: &Limbs<N>) -> Limbs<N> {
        // t has N + 2 limbs; const generic arithmetic in array lengths is unstable, so
        // the top two limbs live in scalars.
        let mut t = [0u64; N];
        let mut t_hi = 0u64;
        for &bi in b.iter() {
            let mut carry = 0u64;
            for j in 0..N {
                let s = t[j] as u128 + a[j] as u128 * bi as u128 + carry as u128;
                t[j] = s as u64;
                carry = (s >> 64) as u64;
            }
            let s = t_hi as u128 + carry as u128;
            t_hi = s as u64;
            let t_top = (s >> 64) as u64;

            let m = t[0].wrapping_mul(self.n0inv);
            let s = t[0] as u128 + m as u128 * self.n[0] as u128;
            let mut carry = (s >> 64) as u64;
            for j in 1..N {
                let s = t[j] as u128 + m as u128 * self.n[j] as u128 + carry as u128;
                t[j - 1] = s as u64;
                carry = (s >> 64) as u64;
            }
            let s = t_hi as u128 + carry as u128;
            t[N - 1] = s as u64;
            t_hi = t_top + (s >> 64) as u64;
        }
        if t_hi != 0 || geq(&t, &self.n) {
            sub_in_place(&mut t, &self.n);
        }
        t
    }

    #[inline]
    pub(crate) fn add(&self, a: &Limbs<N>, b: &Limbs<N>) -> Limbs<N> {
        let mut out = [0u64; N];
        let mut carry = false;
        for i in 0..N {
            let (s1, c1) = a[i].overflowing_add(b[i]);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            out[i] = s2;
            carry = c1 | c2;
        }
        if carry || geq(&out, &self.n) {
            sub_in_place(&mut out, &self.n);
        }
        out
    }

    /// `a - b mod n` for reduced operands.
    #[inline]
    pub(crate) fn sub(&self, a: &Limbs<N>, b: &Limbs<N>) -> Limbs<N> {
        let mut out = *a;
        if geq(a, b) {
            sub_in_place(&mut out, b);
        } else {
            // a + (n - b)
            let mut nb = self.n;
            sub_in_place(&mut nb, b);
            out = self.add(a, &nb);
        }
        out
    }

    pub(crate) fn to_monty(&self, v: &BigUint) -> Limbs<N> {
        let reduced = v % from_limbs(&self.n);
        let limbs = to_limbs::<N>(&reduced).expect("reduced value fits the modulus width");
        self.mul(&limbs, &self.r2)
    }

    #[cfg(test)]
    pub(crate) fn decode(&self, v: &Limbs<N>) -> BigUint {
        let mut one = [0u64; N];
        one[0] = 1;
        from_limbs(&self.mul(v, &one))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check<const N: usize>(n: &BigUint, a: &BigUint, b: &BigUint) {
        let m = Monty::<N>::new(n).unwrap();
        let (am, bm) = (m.to_monty(a), m.to_monty(b));
        assert_eq!(m.decode(&m.mul(&am, &bm)), (a * b) % n);
        assert_eq!(m.decode(&m.add(&am, &bm)), (a + b) % n);
        let expect_sub = ((a % n) + n - (b % n)) % n;
        assert_eq!(m.decode(&m.sub(&am, &bm)), expect_sub);
    }

    proptest! {
        #[test]
        fn matches_biguint(
            n in proptest::collection::vec(any::<u64>(), 3),
            a in proptest::collection::vec(any::<u64>(), 3),
            b in proptest::collection::vec(any::<u64>(), 3),
        ) {
            let mut n = BigUint::new(n.iter().flat_map(|x| [*x as u32, (*x >> 32) as u32]).collect());
            n |= BigUint::from(1u8);
            if n > BigUint::from(1u8) {
                let a = BigUint::new(a.iter().flat_map(|x| [*x as u32, (*x >> 32) as u32]).collect());
                let b = BigUint::new(b.iter().flat_map(|x| [*x as u32, (*x >> 32) as u32]).collect());
                check::<3>(&n, &a, &b);
                check::<4>(&n, &a, &b);
            }
        }
    }

    #[test]
    fn single_limb_edges() {
        let n = BigUint::from(u64::MAX);
        check::<1>(
            &n,
            &BigUint::from(u64::MAX - 1),
            &BigUint::from(u64::MAX - 2),
        );
        check::<1>(
            &BigUint::from(3u8),
            &BigUint::from(2u8),
            &BigUint::from(2u8),
        );
        assert!(Monty::<1>::new(&BigUint::from(10u8)).is_none());
        assert!(Monty::<1>::new(&(BigUint::from(1u8) << 64u32)).is_none());
    }
}
