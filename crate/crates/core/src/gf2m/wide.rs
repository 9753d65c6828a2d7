//! Fixed-width GF(2)[x] polynomials large enough to hold a degree-512 modulus.

pub(crate) const WIDE_WORDS: usize = 9;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub(crate) struct Wide(pub [u64; WIDE_WORDS]);

impl Wide {
    pub const ZERO: Wide = Wide([0; WIDE_WORDS]);

    pub fn one() -> Self {
        let mut w = Self::ZERO;
        w.0[0] = 1;
        w
    }

    pub fn from_words(words: &[u64]) -> Self {
        let mut w = Self::ZERO;
        w.0[..words.len()].copy_from_slice(words);
        w
    }

    pub fn set_bit(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.0[0] == 1 && self.0[1..].iter().all(|&w| w == 0)
    }

    pub fn degree(&self) -> Option<usize> {
        (0..WIDE_WORDS)
            .rev()
            .find(|&i| self.0[i] != 0)
            .map(|i| i * 64 + 63 - self.0[i].leading_zeros() as usize)
    }

    /// `self ^= other << shift`, dropping bits past the fixed width.
    pub fn xor_shl(&mut self, other: &Wide, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        for i in (ws..WIDE_WORDS).rev() {
            let src = i - ws;
            let mut v = other.0[src] << bs;
            if bs != 0 && src > 0 {
                v |= other.0[src - 1] >> (64 - bs);
            }
            self.0[i] ^= v;
        }
    }

    /// Remainder of `self` modulo `modulus`.
    pub fn rem(mut self, modulus: &Wide) -> Wide {
        let dm = modulus.degree().expect("division by zero polynomial");
        while let Some(d) = self.degree() {
            if d < dm {
                break;
            }
            self.xor_shl(modulus, d - dm);
        }
        self
    }

    pub fn gcd(mut a: Wide, mut b: Wide) -> Wide {
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}
