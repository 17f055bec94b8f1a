//! Bit-packed Berlekamp-Massey over GF(2).
//!
//! The discrepancy at step `n` is the parity of `C & window(s, n)`; storing the sequence
//! reversed turns that window into a contiguous bit range, so each step costs `O(L / 64)`
//! word operations instead of `O(L)` field operations.

#[derive(Clone, Debug)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64) + 1],
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// 64 bits starting at bit `offset`; bits past the end read as zero.
    #[inline]
    fn window(&self, offset: usize) -> u64 {
        let (w, s) = (offset / 64, offset % 64);
        let lo = self.words.get(w).copied().unwrap_or(0);
        if s == 0 {
            return lo;
        }
        let hi = self.words.get(w + 1).copied().unwrap_or(0);
        lo >> s | hi << (64 - s)
    }

    /// `self ^= other << shift`, touching only the first `other_bits` bits of `other`.
    fn xor_shifted(&mut self, other: &Bits, shift: usize, other_bits: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        let n = other_bits.div_ceil(64);
        for i in 0..n {
            let w = other.words[i];
            if w == 0 {
                continue;
            }
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
    }
}

/// Runs Berlekamp-Massey on a binary sequence (entries 0/1). Returns the linear complexity
/// and the recurrence coefficients `c_1..c_L` with `s_n = c_1 s_{n-1} + ... + c_L s_{n-L}`.
pub fn berlekamp_massey_gf2(s: &[u8]) -> (usize, Vec<u8>) {
    let n_total = s.len();
    // reversed: r[j] = s[n_total - 1 - j]
    let mut rev = Bits::zeros(n_total);
    for (i, &b) in s.iter().enumerate() {
        if b & 1 == 1 {
            rev.set(n_total - 1 - i);
        }
    }
    // Room for shifts up to n_total plus one spill word.
    let cap = 2 * n_total + 130;
    let mut c = Bits::zeros(cap);
    let mut b = Bits::zeros(cap);
    c.set(0);
    b.set(0);
    let mut c_bits = 1usize; // bits of C in use
    let mut b_bits = 1usize;
    let mut l = 0usize;
    let mut m = 1usize;

    for n in 0..n_total {
        // d = sum_{i=0..=l} C[i] * s[n - i] = sum C[i] * rev[(n_total - 1 - n) + i]
        let base = n_total - 1 - n;
        let mut acc = 0u64;
        let words = (l + 1).div_ceil(64);
        for w in 0..words {
            let mut cw = c.words[w];
            if w == words - 1 && !(l + 1).is_multiple_of(64) {
                cw &= (1u64 << ((l + 1) % 64)) - 1;
            }
            acc ^= cw & rev.window(base + 64 * w);
        }
        let d = acc.count_ones() & 1;
        if d == 0 {
            m += 1;
        } else if 2 * l <= n {
            let saved = c.clone();
            let saved_bits = c_bits;
            c.xor_shifted(&b, m, b_bits);
            c_bits = c_bits.max(b_bits + m);
            l = n + 1 - l;
            b = saved;
            b_bits = saved_bits;
            m = 1;
        } else {
            c.xor_shifted(&b, m, b_bits);
            c_bits = c_bits.max(b_bits + m);
            m += 1;
        }
    }
    let coeffs = (1..=l).map(|i| c.get(i) as u8).collect();
    (l, coeffs)
}
