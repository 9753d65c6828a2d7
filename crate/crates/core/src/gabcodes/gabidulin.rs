use std::sync::Arc;

use super::linearized::LinPoly;
use super::{CodeError, DecodeFailure};
use crate::gf2m::{FieldCtx, FieldElement};
use crate::ranklinalg::elim_kernel_vector;
use crate::ranklinalg::{RankMatrix, RankVector};

/// Gabidulin code with Moore generator `G[i][j] = g_j^[i]`.
#[derive(Clone, Debug)]
pub struct GabidulinCode {
    g: RankVector,
    k: usize,
    generator: RankMatrix,
    parity_check: RankMatrix,
    /// `g_j^[i]` for `i < k + radius`, used by the interpolation step.
    g_powers: Vec<Vec<FieldElement>>,
}

pub fn gab_new(g: RankVector, k: usize) -> Result<GabidulinCode, CodeError> {
    GabidulinCode::new(g, k)
}

pub fn gab_encode(code: &GabidulinCode, u: &RankVector) -> Result<RankVector, CodeError> {
    code.encode(u)
}

pub fn gab_decode(code: &GabidulinCode, y: &RankVector) -> Result<(RankVector, RankVector), DecodeFailure> {
    code.decode(y)
}

impl GabidulinCode {
    pub fn new(g: RankVector, k: usize) -> Result<Self, CodeError> {
        let ctx = g.ctx().clone();
        let n = g.len();
        if n == 0 || k == 0 || k > n || n > ctx.m() {
            return Err(CodeError::Dimensions(format!(
                "need 0 < k <= n <= m, got k = {k}, n = {n}, m = {}",
                ctx.m()
            )));
        }
        let rank = g.rank_weight();
        if rank != n {
            return Err(CodeError::DeficientEvaluationPoints { rank, needed: n });
        }
        let radius = (n - k) / 2;
        let depth = k + radius;
        let orbits: Vec<Vec<FieldElement>> =
            g.entries().iter().map(|&x| ctx.frobenius_orbit(x, depth)).collect();
        let g_powers: Vec<Vec<FieldElement>> =
            (0..depth).map(|i| orbits.iter().map(|o| o[i]).collect()).collect();
        let generator = RankMatrix::from_fn(ctx.clone(), k, n, |i, j| g_powers[i][j]);
        let kernel = generator.nullspace();
        let parity_check = if kernel.is_empty() {
            RankMatrix::zeros(ctx, 0, n)
        } else {
            RankMatrix::from_row_vectors(&kernel)?
        };
        Ok(GabidulinCode { g, k, generator, parity_check, g_powers })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.g.ctx()
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn radius(&self) -> usize {
        (self.len() - self.k) / 2
    }

    pub fn evaluation_points(&self) -> &RankVector {
        &self.g
    }

    pub fn generator(&self) -> &RankMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &RankMatrix {
        &self.parity_check
    }

    pub fn encode(&self, u: &RankVector) -> Result<RankVector, CodeError> {
        if u.len() != self.k {
            return Err(CodeError::Dimensions(format!("message length {} != {}", u.len(), self.k)));
        }
        Ok(u.mul_matrix(&self.generator)?)
    }

    /// Unique decoding up to the radius `⌊(n-k)/2⌋`.
    pub fn decode(&self, y: &RankVector) -> Result<(RankVector, RankVector), DecodeFailure> {
        let ctx = self.ctx().clone();
        crate::ranklinalg::same_ctx(&ctx, y.ctx())?;
        let n = self.len();
        if y.len() != n {
            return Err(DecodeFailure::Length { got: y.len(), expected: n });
        }
        let (k, t) = (self.k, self.radius());

        // Unknowns: V_0..V_t, then N_0..N_{k+t-1}; equations V(y_j) = N(g_j).
        let cols = (t + 1) + (k + t);
        let mut sys = Vec::with_capacity(n * cols);
        for j in 0..n {
            sys.extend(ctx.frobenius_orbit(y[j], t + 1));
            sys.extend((0..k + t).map(|i| self.g_powers[i][j]));
        }
        let x = elim_kernel_vector(&ctx, &mut sys, n, cols).ok_or(DecodeFailure::NoInterpolant)?;
        let v = LinPoly::new(x[..=t].to_vec());
        let num = LinPoly::new(x[t + 1..].to_vec());
        if v.is_zero() {
            return Err(DecodeFailure::NoInterpolant);
        }
        let (f, rem) = num.left_divide(&ctx, &v).ok_or(DecodeFailure::NoInterpolant)?;
        if !rem.is_zero() || f.degree().is_some_and(|d| d >= k) {
            return Err(DecodeFailure::InexactDivision);
        }
        let u = RankVector::new(ctx.clone(), (0..k).map(|i| f.coeff(i)).collect())?;
        let c = u.mul_matrix(&self.generator)?;
        let e = y.add(&c)?;
        let rank = e.rank_weight();
        if rank > t {
            return Err(DecodeFailure::BeyondRadius { rank, radius: t });
        }
        Ok((u, e))
    }

    /// Whether `c` is a codeword, via the parity check.
    pub fn contains(&self, c: &RankVector) -> bool {
        if c.len() != self.len() {
            return false;
        }
        let ctx = self.ctx();
        (0..self.parity_check.rows()).all(|i| {
            self.parity_check
                .row(i)
                .iter()
                .zip(c.entries())
                .fold(FieldElement::ZERO, |acc, (&h, &x)| acc + ctx.mul(h, x))
                .is_zero()
        })
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    use super::*;
    use crate::ranklinalg::BaseMatrix;

    fn ctx(m: usize) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::standard(m).unwrap())
    }

    fn random_points(ctx: &Arc<FieldCtx>, n: usize, rng: &mut SplitMix64) -> RankVector {
        loop {
            let g = RankVector::random(ctx.clone(), n, rng);
            if g.rank_weight() == n {
                return g;
            }
        }
    }

    fn rank_error(ctx: &Arc<FieldCtx>, n: usize, r: usize, rng: &mut SplitMix64) -> RankVector {
        loop {
            let beta = RankVector::random(ctx.clone(), r, rng);
            let b = BaseMatrix::random(r, n, rng);
            let e = beta.mul_base(&b).unwrap();
            if e.rank_weight() == r {
                return e;
            }
        }
    }

    #[test]
    fn moore_structure_and_parity_check() {
        let c = ctx(12);
        let mut rng = SplitMix64::seed_from_u64(5);
        let g = random_points(&c, 10, &mut rng);
        let code = gab_new(g.clone(), 4).unwrap();
        for i in 0..4 {
            assert_eq!(code.generator().row_vector(i), g.frobenius(i));
        }
        assert_eq!(code.parity_check().rows(), 6);
        let prod = code.parity_check().mul(&code.generator().transpose()).unwrap();
        assert!(prod.is_zero());
        assert_eq!(code.radius(), 3);
    }

    #[test]
    fn full_length_code_has_zero_radius() {
        let c = ctx(6);
        let mut rng = SplitMix64::seed_from_u64(6);
        let g = random_points(&c, 6, &mut rng);
        let code = gab_new(g, 6).unwrap();
        assert_eq!(code.radius(), 0);
        assert_eq!(code.generator().rank(), 6);
        assert_eq!(code.parity_check().rows(), 0);
    }

    #[test]
    fn rejects_dependent_points() {
        let c = ctx(8);
        let one = c.one();
        let g = RankVector::new(c.clone(), vec![one, c.from_u64(2).unwrap(), c.from_u64(3).unwrap()]).unwrap();
        assert!(matches!(gab_new(g, 1), Err(CodeError::DeficientEvaluationPoints { rank: 2, needed: 3 })));
    }

    #[test]
    fn encode_basics() {
        let c = ctx(8);
        let mut rng = SplitMix64::seed_from_u64(7);
        let g = random_points(&c, 6, &mut rng);
        let code = gab_new(g.clone(), 3).unwrap();
        assert!(gab_encode(&code, &RankVector::zeros(c.clone(), 3)).unwrap().is_zero());
        assert_eq!(gab_encode(&code, &RankVector::unit(c.clone(), 3, 0)).unwrap(), g);
        let u = RankVector::random(c.clone(), 3, &mut rng);
        let v = RankVector::random(c.clone(), 3, &mut rng);
        let lhs = gab_encode(&code, &u.add(&v).unwrap()).unwrap();
        let rhs = gab_encode(&code, &u).unwrap().add(&gab_encode(&code, &v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(gab_encode(&code, &RankVector::zeros(c, 2)).is_err());
    }

    #[test]
    fn decodes_up_to_radius() {
        for (m, n, k, trials) in [(6, 6, 2, 500), (8, 8, 2, 500), (12, 12, 4, 500), (48, 24, 12, 60), (90, 90, 18, 6)] {
            let c = ctx(m);
            let mut rng = SplitMix64::seed_from_u64(m as u64 * 31 + k as u64);
            let code = gab_new(random_points(&c, n, &mut rng), k).unwrap();
            let t = code.radius();
            for trial in 0..trials {
                let u = RankVector::random(c.clone(), k, &mut rng);
                let r = trial % (t + 1);
                let e = if r == 0 { RankVector::zeros(c.clone(), n) } else { rank_error(&c, n, r, &mut rng) };
                let y = code.encode(&u).unwrap().add(&e).unwrap();
                let (du, de) = gab_decode(&code, &y).unwrap();
                assert_eq!((du, de), (u, e), "m={m} n={n} k={k} r={r}");
            }
        }
    }

    #[test]
    fn beyond_radius_never_returns_far_codeword() {
        let c = ctx(12);
        let mut rng = SplitMix64::seed_from_u64(8);
        let code = gab_new(random_points(&c, 12, &mut rng), 4).unwrap();
        let t = code.radius();
        let mut failures = 0;
        for _ in 0..100 {
            let u = RankVector::random(c.clone(), 4, &mut rng);
            let e = rank_error(&c, 12, t + 2, &mut rng);
            let y = code.encode(&u).unwrap().add(&e).unwrap();
            match gab_decode(&code, &y) {
                Ok((du, de)) => {
                    assert!(de.rank_weight() <= t);
                    assert_eq!(code.encode(&du).unwrap().add(&de).unwrap(), y);
                }
                Err(_) => failures += 1,
            }
        }
        assert!(failures > 90);
    }

    #[test]
    fn context_and_length_checks() {
        let c = ctx(8);
        let mut rng = SplitMix64::seed_from_u64(9);
        let code = gab_new(random_points(&c, 6, &mut rng), 2).unwrap();
        assert!(matches!(
            gab_decode(&code, &RankVector::zeros(c.clone(), 5)),
            Err(DecodeFailure::Length { got: 5, expected: 6 })
        ));
        let other = ctx(12);
        assert!(gab_decode(&code, &RankVector::zeros(other, 6)).is_err());
    }
}
