//! Arithmetic in GF(2^m) in a polynomial basis.
//!
//! Elements are plain bit vectors ([`FieldElement`]) and every operation goes
//! through the [`FieldCtx`] that owns the reduction polynomial. Degrees up to
//! 512 are supported; products are reduced with the sparse modulus taps.

mod clmul;
mod modulus;
mod wide;

use std::fmt;

use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use clmul::PRODUCT_WORDS;
pub use modulus::{find_sparse_irreducible, is_irreducible, standard_taps};
use wide::Wide;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 512;
pub(crate) const MAX_WORDS: usize = MAX_DEGREE / 64;

/// Draws allowed in [`FieldCtx::find_normal_element`] before giving up.
pub const NORMAL_SEARCH_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside 2..=512")]
    InvalidDegree(usize),
    #[error("modulus tap {tap} is not below the degree {m}")]
    InvalidTap { m: usize, tap: usize },
    #[error("modulus of degree {m} with taps {taps:?} is reducible over GF(2)")]
    Reducible { m: usize, taps: Vec<usize> },
    #[error("field contexts differ (GF(2^{left}) vs GF(2^{right}))")]
    ContextMismatch { left: usize, right: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element has bits set at or above degree {0}")]
    NonCanonical(usize),
    #[error("expected {expected} bytes for a field element, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("no normal element found after {0} draws")]
    NormalSearchExhausted(usize),
}

/// An element of GF(2^m): coefficient `i` of the polynomial basis is bit `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement([u64; MAX_WORDS]);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement([0; MAX_WORDS]);
    pub const ONE: FieldElement = {
        let mut w = [0; MAX_WORDS];
        w[0] = 1;
        FieldElement(w)
    };

    /// Element whose low coefficients are the bits of `v`. Not reduced.
    pub const fn from_u64(v: u64) -> Self {
        let mut w = [0; MAX_WORDS];
        w[0] = v;
        FieldElement(w)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn words(&self) -> &[u64; MAX_WORDS] {
        &self.0
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64; MAX_WORDS] {
        &mut self.0
    }

    /// Index of the highest set coefficient.
    pub fn degree(&self) -> Option<usize> {
        (0..MAX_WORDS)
            .rev()
            .find(|&i| self.0[i] != 0)
            .map(|i| i * 64 + 63 - self.0[i].leading_zeros() as usize)
    }

    /// Low 64 coefficients.
    pub fn low_u64(&self) -> u64 {
        self.0[0]
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn add(mut self, rhs: FieldElement) -> FieldElement {
        self += rhs;
        self
    }
}

impl std::ops::AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.degree().map_or(0, |d| d / 64);
        write!(f, "0x")?;
        write!(f, "{:x}", self.0[top])?;
        for i in (0..top).rev() {
            write!(f, "{:016x}", self.0[i])?;
        }
        Ok(())
    }
}

/// GF(2^m) defined by the irreducible polynomial `x^m + sum(x^tap)`.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    m: usize,
    words: usize,
    taps: Vec<usize>,
    modulus: Wide,
    hw: bool,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.taps == other.taps
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Field with modulus `x^m + sum_{e in taps} x^e`; the modulus must be irreducible.
    pub fn new(m: usize, taps: &[usize]) -> Result<Self, FieldError> {
        let ctx = Self::new_unchecked(m, taps)?;
        if !modulus::is_irreducible_ctx(&ctx) {
            return Err(FieldError::Reducible { m, taps: ctx.taps });
        }
        Ok(ctx)
    }

    /// Field over the registry modulus for degree `m`.
    pub fn standard(m: usize) -> Result<Self, FieldError> {
        let taps = standard_taps(m)?;
        Self::new(m, &taps)
    }

    pub(crate) fn new_unchecked(m: usize, taps: &[usize]) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::InvalidDegree(m));
        }
        let mut taps = taps.to_vec();
        taps.sort_unstable_by(|a, b| b.cmp(a));
        taps.dedup();
        if let Some(&tap) = taps.iter().find(|&&t| t >= m) {
            return Err(FieldError::InvalidTap { m, tap });
        }
        let mut modulus = Wide::ZERO;
        modulus.set_bit(m);
        for &t in &taps {
            modulus.set_bit(t);
        }
        Ok(FieldCtx {
            m,
            words: m.div_ceil(64),
            taps,
            modulus,
            hw: clmul::has_hw_clmul(),
        })
    }

    /// Extension degree.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Exponents of the non-leading modulus terms, highest first.
    pub fn taps(&self) -> &[usize] {
        &self.taps
    }

    /// Modulus coefficients, index `i` holding the coefficient of `x^i` (length m+1).
    pub fn modulus_coefficients(&self) -> Vec<bool> {
        (0..=self.m).map(|i| self.modulus.0[i / 64] >> (i % 64) & 1 == 1).collect()
    }

    /// Bytes in the serialized form of one element.
    pub fn byte_len(&self) -> usize {
        self.m.div_ceil(8)
    }

    pub(crate) fn word_len(&self) -> usize {
        self.words
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checks that `a` is in reduced form for this field.
    pub fn check(&self, a: &FieldElement) -> Result<(), FieldError> {
        match a.degree() {
            Some(d) if d >= self.m => Err(FieldError::NonCanonical(self.m)),
            _ => Ok(()),
        }
    }

    /// Reduced element from the low bits of `v`.
    pub fn from_u64(&self, v: u64) -> Result<FieldElement, FieldError> {
        let e = FieldElement::from_u64(v);
        self.check(&e)?;
        Ok(e)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let w = self.words;
        let mut prod = [0u64; PRODUCT_WORDS];
        clmul::mul_words(self.hw, &a.0[..w], &b.0[..w], &mut prod);
        self.reduce(&mut prod)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `a + b*c`, the inner step of every elimination and product loop.
    #[inline]
    pub fn mul_add(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        a + self.mul(b, c)
    }

    /// Folds every coefficient at or above `m` back down using the sparse taps,
    /// highest words first.
    fn reduce(&self, p: &mut [u64; PRODUCT_WORDS]) -> FieldElement {
        let total = 2 * self.words;
        let (ws, bs) = (self.m / 64, self.m % 64);
        let first_full = self.m.div_ceil(64);
        let xor_at = |p: &mut [u64; PRODUCT_WORDS], d: usize, h: u64| {
            let (w, b) = (d / 64, d % 64);
            p[w] ^= h << b;
            if b != 0 && w + 1 < PRODUCT_WORDS {
                p[w + 1] ^= h >> (64 - b);
            }
        };
        loop {
            for i in (first_full..total).rev() {
                let h = std::mem::take(&mut p[i]);
                if h != 0 {
                    for &e in &self.taps {
                        xor_at(p, 64 * i - self.m + e, h);
                    }
                }
            }
            if bs != 0 {
                let h = p[ws] >> bs;
                if h != 0 {
                    p[ws] &= (1u64 << bs) - 1;
                    for &e in &self.taps {
                        xor_at(p, e, h);
                    }
                }
            }
            let clean = p[first_full..total].iter().all(|&w| w == 0) && (bs == 0 || p[ws] >> bs == 0);
            if clean {
                break;
            }
        }
        let mut out = FieldElement::ZERO;
        out.0[..self.words].copy_from_slice(&p[..self.words]);
        out
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on polynomials.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut u = Wide::from_words(&a.0);
        let mut v = self.modulus;
        let mut g1 = Wide::one();
        let mut g2 = Wide::ZERO;
        while !u.is_one() {
            let du = u.degree().ok_or(FieldError::DivisionByZero)?;
            let dv = v.degree().ok_or(FieldError::DivisionByZero)?;
            if du < dv {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut g1, &mut g2);
                u.xor_shl(&v, dv - du);
                g1.xor_shl(&g2, dv - du);
            } else {
                u.xor_shl(&v, du - dv);
                g1.xor_shl(&g2, du - dv);
            }
        }
        let mut out = FieldElement::ZERO;
        out.0.copy_from_slice(&g1.0[..MAX_WORDS]);
        Ok(out)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^i)`; the exponent is taken mod m.
    pub fn frobenius(&self, a: FieldElement, i: usize) -> FieldElement {
        (0..i % self.m).fold(a, |x, _| self.square(x))
    }

    /// Inverse Frobenius power `a^(2^(-i))`.
    pub fn frobenius_inv(&self, a: FieldElement, i: usize) -> FieldElement {
        let i = i % self.m;
        self.frobenius(a, (self.m - i) % self.m)
    }

    /// Frobenius orbit `(a, a^[1], ..., a^[len-1])`.
    pub fn frobenius_orbit(&self, a: FieldElement, len: usize) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(len);
        let mut x = a;
        for _ in 0..len {
            out.push(x);
            x = self.square(x);
        }
        out
    }

    /// True iff the Frobenius orbit of `a` is a GF(2)-basis of GF(2^m).
    pub fn is_normal(&self, a: FieldElement) -> bool {
        !a.is_zero() && gf2_rank(self.frobenius_orbit(a, self.m)) == self.m
    }

    /// Uniformly random element from `rng`, filling whole words and masking to m bits.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut e = FieldElement::ZERO;
        for w in e.0.iter_mut().take(self.words) {
            *w = rng.next_u64();
        }
        let rem = self.m % 64;
        if rem != 0 {
            e.0[self.words - 1] &= (1u64 << rem) - 1;
        }
        e
    }

    /// Uniformly random nonzero element.
    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// First normal element drawn from `rng`.
    pub fn find_normal_element<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<FieldElement, FieldError> {
        for _ in 0..NORMAL_SEARCH_CAP {
            let c = self.random(rng);
            if self.is_normal(c) {
                return Ok(c);
            }
        }
        Err(FieldError::NormalSearchExhausted(NORMAL_SEARCH_CAP))
    }

    /// Normal element derived deterministically from a byte seed.
    pub fn find_normal_element_seeded(&self, seed: &[u8]) -> Result<FieldElement, FieldError> {
        let mut rng = SplitMix64::seed_from_u64(fold_seed(seed));
        self.find_normal_element(&mut rng)
    }

    /// Little-endian bit encoding in `byte_len()` bytes.
    pub fn to_bytes(&self, a: &FieldElement) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.byte_len());
        self.write_bytes(a, &mut out);
        out
    }

    pub fn write_bytes(&self, a: &FieldElement, out: &mut Vec<u8>) {
        let n = self.byte_len();
        out.extend((0..n).map(|i| (a.0[i / 8] >> (8 * (i % 8))) as u8));
    }

    pub fn from_bytes(&self, bytes: &[u8]) -> Result<FieldElement, FieldError> {
        if bytes.len() != self.byte_len() {
            return Err(FieldError::WrongLength {
                expected: self.byte_len(),
                got: bytes.len(),
            });
        }
        let mut e = FieldElement::ZERO;
        for (i, &b) in bytes.iter().enumerate() {
            e.0[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        self.check(&e)?;
        Ok(e)
    }
}

/// Mixes an arbitrary byte seed down to a 64-bit generator seed.
pub(crate) fn fold_seed(seed: &[u8]) -> u64 {
    let mut state = seed.len() as u64;
    for chunk in seed.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        state = splitmix_mix(state ^ u64::from_le_bytes(buf));
    }
    state
}

pub(crate) fn splitmix_mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// GF(2)-rank of a set of elements viewed as bit vectors.
pub fn gf2_rank<I: IntoIterator<Item = FieldElement>>(elems: I) -> usize {
    let mut basis = Gf2Basis::default();
    elems.into_iter().filter(|&e| basis.insert(e)).count()
}

/// Incremental GF(2) basis keyed by leading bit.
#[derive(Default, Clone)]
pub(crate) struct Gf2Basis {
    rows: Vec<(usize, FieldElement)>,
}

impl Gf2Basis {
    /// Reduces `e` against the basis; returns true and keeps it if independent.
    pub fn insert(&mut self, e: FieldElement) -> bool {
        let r = self.reduce(e);
        match r.degree() {
            Some(d) => {
                let pos = self.rows.partition_point(|&(p, _)| p > d);
                self.rows.insert(pos, (d, r));
                true
            }
            None => false,
        }
    }

    pub fn reduce(&self, mut e: FieldElement) -> FieldElement {
        for &(lead, row) in &self.rows {
            if e.bit(lead) {
                e += row;
            }
        }
        e
    }
}
