//! Carry-less multiplication of multi-word GF(2)[x] polynomials.

use super::MAX_WORDS;

pub(crate) const PRODUCT_WORDS: usize = 2 * MAX_WORDS;

/// Portable 64x64 -> 128 carry-less product with a 4-bit window.
pub(crate) fn clmul64_soft(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut tab = [0u128; 16];
    for i in 1..16 {
        tab[i] = if i & 1 == 0 { tab[i >> 1] << 1 } else { tab[i ^ 1] ^ a };
    }
    let mut r = 0u128;
    for s in (0..16).rev() {
        r = (r << 4) ^ tab[((b >> (4 * s)) & 0xF) as usize];
    }
    r
}

pub(crate) fn has_hw_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

fn mul_words_soft(a: &[u64], b: &[u64], out: &mut [u64; PRODUCT_WORDS]) {
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let p = clmul64_soft(ai, bj);
            out[i + j] ^= p as u64;
            out[i + j + 1] ^= (p >> 64) as u64;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn mul_words_hw(a: &[u64], b: &[u64], out: &mut [u64; PRODUCT_WORDS]) {
    use std::arch::x86_64::*;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let va = _mm_set_epi64x(0, ai as i64);
        for (j, &bj) in b.iter().enumerate() {
            let r = _mm_clmulepi64_si128(va, _mm_set_epi64x(0, bj as i64), 0x00);
            out[i + j] ^= _mm_cvtsi128_si64(r) as u64;
            out[i + j + 1] ^= _mm_cvtsi128_si64(_mm_srli_si128(r, 8)) as u64;
        }
    }
}

/// Full product of two `a.len()`-word polynomials into `out` (which must be zeroed).
#[inline]
pub(crate) fn mul_words(hw: bool, a: &[u64], b: &[u64], out: &mut [u64; PRODUCT_WORDS]) {
    #[cfg(target_arch = "x86_64")]
    if hw {
        // SAFETY: `hw` is only true when pclmulqdq was detected at runtime.
        unsafe { mul_words_hw(a, b, out) };
        return;
    }
    let _ = hw;
    mul_words_soft(a, b, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn clmul_bitwise(a: u64, b: u64) -> u128 {
        (0..64).filter(|i| b >> i & 1 == 1).fold(0u128, |acc, i| acc ^ ((a as u128) << i))
    }

    #[test]
    fn small_products() {
        assert_eq!(clmul64_soft(0b11, 0b11), 0b101);
        assert_eq!(clmul64_soft(u64::MAX, 1), u64::MAX as u128);
        assert_eq!(clmul64_soft(1 << 63, 1 << 63), 1u128 << 126);
    }

    proptest! {
        #[test]
        fn soft_matches_bitwise(a: u64, b: u64) {
            prop_assert_eq!(clmul64_soft(a, b), clmul_bitwise(a, b));
        }

        #[test]
        fn hw_matches_soft(a in proptest::collection::vec(any::<u64>(), 3), b in proptest::collection::vec(any::<u64>(), 3)) {
            let mut hw = [0u64; PRODUCT_WORDS];
            let mut soft = [0u64; PRODUCT_WORDS];
            mul_words(has_hw_clmul(), &a, &b, &mut hw);
            mul_words(false, &a, &b, &mut soft);
            prop_assert_eq!(hw, soft);
        }
    }
}
