//! Irreducibility testing and the deterministic choice of modulus per degree.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::wide::Wide;
use super::{FieldCtx, FieldElement, FieldError};

/// Precomputed sparse moduli (non-leading exponents) for the degrees used by
/// the named parameter sets. Each entry equals `find_sparse_irreducible(m)`.
const REGISTRY: &[(usize, &[usize])] = &[
    (2, &[1, 0]),
    (3, &[1, 0]),
    (4, &[1, 0]),
    (6, &[1, 0]),
    (8, &[4, 3, 1, 0]),
    (12, &[3, 0]),
    (24, &[4, 3, 1, 0]),
    (48, &[5, 3, 2, 0]),
    (76, &[21, 0]),
    (90, &[27, 0]),
    (104, &[4, 3, 1, 0]),
    (120, &[4, 3, 1, 0]),
    (128, &[7, 2, 1, 0]),
    (211, &[11, 10, 8, 0]),
    (307, &[8, 4, 2, 0]),
    (331, &[10, 6, 2, 0]),
];

/// Ben-Or test: `f` of degree m is irreducible iff gcd(f, x^(2^i) - x) = 1 for all i <= m/2.
pub(crate) fn is_irreducible_ctx(ctx: &FieldCtx) -> bool {
    if !ctx.taps.contains(&0) {
        return false;
    }
    let x = FieldElement::from_u64(2);
    let mut h = x;
    for _ in 1..=ctx.m / 2 {
        h = ctx.square(h);
        let g = Wide::gcd(ctx.modulus, Wide::from_words(&(h + x).0));
        if !g.is_one() {
            return false;
        }
    }
    true
}

/// Whether `x^m + sum(x^tap)` is irreducible over GF(2).
pub fn is_irreducible(m: usize, taps: &[usize]) -> Result<bool, FieldError> {
    Ok(is_irreducible_ctx(&FieldCtx::new_unchecked(m, taps)?))
}

/// Lexicographically smallest irreducible trinomial of degree m, or failing
/// that the smallest pentanomial. Returns the non-leading exponents, highest first.
pub fn find_sparse_irreducible(m: usize) -> Result<Vec<usize>, FieldError> {
    for a in 1..m {
        if is_irreducible(m, &[a, 0])? {
            return Ok(vec![a, 0]);
        }
    }
    for a in 3..m {
        for b in 2..a {
            for c in 1..b {
                if is_irreducible(m, &[a, b, c, 0])? {
                    return Ok(vec![a, b, c, 0]);
                }
            }
        }
    }
    // m = 2, 3 always have trinomials; every larger degree has a pentanomial in practice.
    Err(FieldError::Reducible { m, taps: Vec::new() })
}

/// Registry modulus for degree m; degrees outside the table are searched once and cached.
pub fn standard_taps(m: usize) -> Result<Vec<usize>, FieldError> {
    if let Some((_, taps)) = REGISTRY.iter().find(|(d, _)| *d == m) {
        return Ok(taps.to_vec());
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<usize>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("modulus cache poisoned").get(&m) {
        return Ok(t.clone());
    }
    let taps = find_sparse_irreducible(m)?;
    cache.lock().expect("modulus cache poisoned").insert(m, taps.clone());
    Ok(taps)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division by every polynomial of degree <= m/2; only viable for small m.
    fn irreducible_by_trial_division(m: usize, taps: &[usize]) -> bool {
        let f: u64 = taps.iter().fold(1u64 << m, |acc, &t| acc | 1 << t);
        (2u64..(1 << (m / 2 + 1))).all(|d| {
            let dd = 63 - d.leading_zeros();
            let mut r = f;
            while r != 0 && 63 - r.leading_zeros() >= dd {
                r ^= d << (63 - r.leading_zeros() - dd);
            }
            r != 0
        })
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for m in 2..=16 {
            for mask in 0u64..(1 << m) {
                let taps: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                assert_eq!(
                    is_irreducible(m, &taps).unwrap(),
                    irreducible_by_trial_division(m, &taps),
                    "m={m} taps={taps:?}"
                );
            }
        }
    }

    #[test]
    fn registry_matches_search() {
        for &(m, taps) in REGISTRY {
            assert_eq!(find_sparse_irreducible(m).unwrap(), taps, "degree {m}");
        }
    }

    #[test]
    fn known_standard_polynomials() {
        assert!(is_irreducible(8, &[4, 3, 1, 0]).unwrap());
        assert!(is_irreducible(128, &[7, 2, 1, 0]).unwrap());
        // x^6 + x^3 + 1 is the 9th cyclotomic polynomial; 2 has order 6 mod 9
        assert!(is_irreducible(6, &[3, 0]).unwrap());
        // x^8 + 1 = (x + 1)^8
        assert!(!is_irreducible(8, &[0]).unwrap());
    }
}
