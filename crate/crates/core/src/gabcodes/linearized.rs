//! Linearized (q-)polynomials over GF(2^m): coefficient `i` multiplies `x^(2^i)`.

use crate::gf2m::{FieldCtx, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LinPoly {
    coeffs: Vec<FieldElement>,
}

impl LinPoly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        LinPoly { coeffs }
    }

    #[cfg(test)]
    pub fn zero() -> Self {
        LinPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// q-degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    #[cfg(test)]
    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut p = x;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                p = ctx.square(p);
            }
            acc += ctx.mul(c, p);
        }
        acc
    }

    /// Symbolic composition `self ∘ other`, i.e. `x -> self(other(x))`.
    #[cfg(test)]
    pub fn compose(&self, ctx: &FieldCtx, other: &LinPoly) -> LinPoly {
        if self.is_zero() || other.is_zero() {
            return LinPoly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (j, &b) in other.coeffs.iter().enumerate() {
            let mut bp = b;
            for (i, &a) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    bp = ctx.square(bp);
                }
                out[i + j] += ctx.mul(a, bp);
            }
        }
        LinPoly::new(out)
    }

    /// Left division: `(q, r)` with `self = divisor ∘ q + r` and `deg r < deg divisor`.
    pub fn left_divide(&self, ctx: &FieldCtx, divisor: &LinPoly) -> Option<(LinPoly, LinPoly)> {
        let d = divisor.degree()?;
        let lead_inv = ctx.inv(divisor.coeffs[d]).ok()?;
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(d);
        let mut quot = vec![FieldElement::ZERO; qlen];
        for s in (d..rem.len()).rev() {
            if rem[s].is_zero() {
                continue;
            }
            // divisor_d * q^[d] = rem_s
            let term = ctx.frobenius_inv(ctx.mul(rem[s], lead_inv), d);
            quot[s - d] = term;
            let mut tp = term;
            for (i, &v) in divisor.coeffs.iter().enumerate() {
                if i > 0 {
                    tp = ctx.square(tp);
                }
                rem[s - d + i] += ctx.mul(v, tp);
            }
        }
        Some((LinPoly::new(quot), LinPoly::new(rem)))
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    use super::*;

    fn random_poly(ctx: &FieldCtx, len: usize, rng: &mut SplitMix64) -> LinPoly {
        LinPoly::new((0..len).map(|_| ctx.random_nonzero(rng)).collect())
    }

    #[test]
    fn composition_agrees_with_evaluation() {
        let ctx = FieldCtx::standard(12).unwrap();
        let mut rng = SplitMix64::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_poly(&ctx, 3, &mut rng);
            let b = random_poly(&ctx, 4, &mut rng);
            let ab = a.compose(&ctx, &b);
            let x = ctx.random(&mut rng);
            assert_eq!(ab.eval(&ctx, x), a.eval(&ctx, b.eval(&ctx, x)));
        }
    }

    #[test]
    fn evaluation_is_additive() {
        let ctx = FieldCtx::standard(8).unwrap();
        let mut rng = SplitMix64::seed_from_u64(2);
        let p = random_poly(&ctx, 5, &mut rng);
        let (x, y) = (ctx.random(&mut rng), ctx.random(&mut rng));
        assert_eq!(p.eval(&ctx, x + y), p.eval(&ctx, x) + p.eval(&ctx, y));
    }

    #[test]
    fn left_division_recovers_factor() {
        let ctx = FieldCtx::standard(48).unwrap();
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..50 {
            let v = random_poly(&ctx, 4, &mut rng);
            let f = random_poly(&ctx, 6, &mut rng);
            let r = random_poly(&ctx, 3, &mut rng);
            let (q, rem) = v.compose(&ctx, &f).left_divide(&ctx, &v).unwrap();
            assert_eq!(q, f);
            assert!(rem.is_zero());
            // with a low-degree remainder added, division returns it
            let n = LinPoly::new(
                (0..9).map(|i| v.compose(&ctx, &f).coeff(i) + r.coeff(i)).collect(),
            );
            let (q2, rem2) = n.left_divide(&ctx, &v).unwrap();
            assert_eq!(q2, f);
            assert_eq!(rem2, r);
        }
    }
}
