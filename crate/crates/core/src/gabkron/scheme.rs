//! KeyGen, Encrypt and Decrypt for both variants.

use std::sync::Arc;

use rand::RngCore;

use super::construct::{construct_p, construct_x, sample_rank_error, PMatrix, SubspaceSpec, XWitness};
use super::params::{ParamSet, Variant};
use super::SchemeError;
use crate::gabcodes::{gab_new, kron_product, KroneckerCode};
use crate::gf2m::{FieldCtx, FieldElement};
use crate::ranklinalg::{circulant, is_partial_circulant_block, RankMatrix, RankVector};

const KEYGEN_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub params: ParamSet,
    /// Improved: `(G+X)P⁻¹`. Repaired: the systematic `[I_k | N]`.
    pub g_pub: RankMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecretKey {
    Improved {
        params: ParamSet,
        alpha: FieldElement,
        p: RankMatrix,
        g1: RankMatrix,
    },
    Repaired {
        params: ParamSet,
        alpha: FieldElement,
        g1: RankMatrix,
        b: RankVector,
        s: RankMatrix,
    },
}

impl SecretKey {
    pub fn params(&self) -> &ParamSet {
        match self {
            SecretKey::Improved { params, .. } | SecretKey::Repaired { params, .. } => params,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

/// Everything drawn during key generation; useful for auditing.
#[derive(Clone, Debug)]
pub struct KeyWitness {
    pub code: KroneckerCode,
    pub x: XWitness,
    pub subspaces: SubspaceSpec,
    pub p: PMatrix,
}

pub fn field_for(p: &ParamSet) -> Result<Arc<FieldCtx>, SchemeError> {
    Ok(Arc::new(FieldCtx::new(p.m, &p.taps).map_err(crate::ranklinalg::LinalgError::from)?))
}

/// `(α^[n2-1], …, α^[1], α)`.
pub fn inner_support(ctx: &FieldCtx, alpha: FieldElement, n2: usize) -> Vec<FieldElement> {
    let mut orbit = ctx.frobenius_orbit(alpha, n2);
    orbit.reverse();
    orbit
}

/// The Kronecker code determined by `α` and `G1`.
pub fn secret_code(p: &ParamSet, ctx: &Arc<FieldCtx>, alpha: FieldElement, g1: &RankMatrix) -> Result<KroneckerCode, SchemeError> {
    let g2 = RankVector::new(ctx.clone(), inner_support(ctx, alpha, p.n2))?;
    Ok(kron_product(g1.clone(), gab_new(g2, p.k2)?)?)
}

fn random_full_rank<R: RngCore + ?Sized>(ctx: &Arc<FieldCtx>, rows: usize, cols: usize, rng: &mut R) -> Result<RankMatrix, SchemeError> {
    for _ in 0..KEYGEN_ATTEMPTS {
        let m = RankMatrix::random(ctx.clone(), rows, cols, rng);
        if m.rank() == rows {
            return Ok(m);
        }
    }
    Err(SchemeError::RetryExhausted("full-rank G1"))
}

pub fn keygen<R: RngCore + ?Sized>(p: &ParamSet, rng: &mut R) -> Result<KeyPair, SchemeError> {
    keygen_with_witness(p, rng).map(|(kp, _)| kp)
}

pub fn keygen_with_witness<R: RngCore + ?Sized>(p: &ParamSet, rng: &mut R) -> Result<(KeyPair, KeyWitness), SchemeError> {
    let ctx = field_for(p)?;
    for _ in 0..KEYGEN_ATTEMPTS {
        let g1 = random_full_rank(&ctx, p.k1, p.n1, rng)?;
        let alpha = ctx.find_normal_element(rng).map_err(crate::ranklinalg::LinalgError::from)?;
        let code = secret_code(p, &ctx, alpha, &g1)?;
        let info = code.information_set().to_vec();
        let x = construct_x(p, &ctx, &info, rng)?;
        let masked = code.generator().add(&x.x)?;
        match p.variant {
            Variant::Improved => {
                let subspaces = SubspaceSpec::random(&ctx, p.lambda, p.lambda_prime, &info, rng)?;
                let pm = construct_p(p, &ctx, &subspaces, rng)?;
                let g_pub = masked.mul(&pm.inverse)?;
                if !is_partial_circulant_block(&g_pub, p.k2, p.n2) {
                    return Err(SchemeError::Structure("public key is not partial-circulant-block".into()));
                }
                let kp = KeyPair {
                    pk: PublicKey { params: p.clone(), g_pub },
                    sk: SecretKey::Improved { params: p.clone(), alpha, p: pm.p.clone(), g1 },
                };
                return Ok((kp, KeyWitness { code, x, subspaces, p: pm }));
            }
            Variant::Repaired => {
                let subspaces = SubspaceSpec::random(&ctx, p.lambda, p.lambda, &[], rng)?;
                let pm = construct_p(p, &ctx, &subspaces, rng)?;
                let m = masked.mul(&pm.inverse)?;
                let Ok(s) = m.submatrix(0, 0, p.k, p.k).invert() else {
                    continue;
                };
                let g_pub = s.mul(&m)?;
                if !g_pub.submatrix(0, 0, p.k, p.k).is_identity() {
                    return Err(SchemeError::Structure("public key is not systematic".into()));
                }
                let kp = KeyPair {
                    pk: PublicKey { params: p.clone(), g_pub },
                    sk: SecretKey::Repaired { params: p.clone(), alpha, g1, b: pm.first_rows[0].clone(), s },
                };
                return Ok((kp, KeyWitness { code, x, subspaces, p: pm }));
            }
        }
    }
    Err(SchemeError::RetryExhausted("systematic public key"))
}

/// `c = m · G_pub + e` with a fresh rank-t error.
pub fn encrypt<R: RngCore + ?Sized>(pk: &PublicKey, m: &RankVector, rng: &mut R) -> Result<RankVector, SchemeError> {
    let e = sample_rank_error(pk.g_pub.ctx(), pk.params.n, pk.params.t, rng)?;
    encrypt_with_error(pk, m, &e)
}

/// Encryption with a caller-chosen error vector.
pub fn encrypt_with_error(pk: &PublicKey, m: &RankVector, e: &RankVector) -> Result<RankVector, SchemeError> {
    let p = &pk.params;
    if m.len() != p.k {
        return Err(SchemeError::Length { what: "message", got: m.len(), expected: p.k });
    }
    if e.len() != p.n {
        return Err(SchemeError::Length { what: "error", got: e.len(), expected: p.n });
    }
    Ok(m.mul_matrix(&pk.g_pub)?.add(e)?)
}

/// Recovers the message from the secret key alone.
pub fn decrypt(sk: &SecretKey, c: &RankVector) -> Result<RankVector, SchemeError> {
    let p = sk.params();
    if c.len() != p.n {
        return Err(SchemeError::Length { what: "ciphertext", got: c.len(), expected: p.n });
    }
    match sk {
        SecretKey::Improved { alpha, p: pmat, g1, .. } => {
            let code = secret_code(p, pmat.ctx(), *alpha, g1)?;
            let shifted = c.mul_matrix(pmat)?;
            Ok(code.decode(&shifted, Some(code.information_set()))?)
        }
        SecretKey::Repaired { alpha, g1, b, s, .. } => {
            let code = secret_code(p, b.ctx(), *alpha, g1)?;
            let shifted = c.mul_matrix(&circulant(b)?)?;
            let mu = code.decode(&shifted, Some(code.information_set()))?;
            Ok(mu.mul_matrix(&s.invert()?)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    use super::*;
    use crate::gabkron::params::setup_named;

    #[test]
    fn improved_toy_round_trip() {
        let p = setup_named("toy-improved").unwrap();
        let mut rng = SplitMix64::seed_from_u64(11);
        let (kp, w) = keygen_with_witness(&p, &mut rng).unwrap();
        let SecretKey::Improved { p: pm, .. } = &kp.sk else { panic!() };
        let gx = w.code.generator().add(&w.x.x).unwrap();
        assert_eq!(kp.pk.g_pub.mul(pm).unwrap(), gx);
        let ctx = kp.pk.g_pub.ctx().clone();
        for _ in 0..1000 {
            let m = RankVector::random(ctx.clone(), p.k, &mut rng);
            let c = encrypt(&kp.pk, &m, &mut rng).unwrap();
            assert_eq!(decrypt(&kp.sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn repaired_toy_round_trip() {
        let p = setup_named("toy-repaired").unwrap();
        let mut rng = SplitMix64::seed_from_u64(12);
        let kp = keygen(&p, &mut rng).unwrap();
        assert!(kp.pk.g_pub.submatrix(0, 0, p.k, p.k).is_identity());
        let ctx = kp.pk.g_pub.ctx().clone();
        for _ in 0..200 {
            let m = RankVector::random(ctx.clone(), p.k, &mut rng);
            let c = encrypt(&kp.pk, &m, &mut rng).unwrap();
            assert_eq!(decrypt(&kp.sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn noiseless_and_deterministic() {
        let p = setup_named("toy-improved").unwrap();
        let a = keygen(&p, &mut SplitMix64::seed_from_u64(13)).unwrap();
        let b = keygen(&p, &mut SplitMix64::seed_from_u64(13)).unwrap();
        assert_eq!(a, b);
        let ctx = a.pk.g_pub.ctx().clone();
        let m = RankVector::random(ctx.clone(), p.k, &mut SplitMix64::seed_from_u64(1));
        let c = encrypt_with_error(&a.pk, &m, &RankVector::zeros(ctx, p.n)).unwrap();
        assert_eq!(decrypt(&a.sk, &c).unwrap(), m);
        let c1 = encrypt(&a.pk, &m, &mut SplitMix64::seed_from_u64(2)).unwrap();
        let c2 = encrypt(&a.pk, &m, &mut SplitMix64::seed_from_u64(2)).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn length_checks() {
        let p = setup_named("toy-improved").unwrap();
        let kp = keygen(&p, &mut SplitMix64::seed_from_u64(14)).unwrap();
        let ctx = kp.pk.g_pub.ctx().clone();
        let mut rng = SplitMix64::seed_from_u64(3);
        assert!(matches!(
            encrypt(&kp.pk, &RankVector::zeros(ctx.clone(), p.k - 1), &mut rng),
            Err(SchemeError::Length { .. })
        ));
        assert!(matches!(decrypt(&kp.sk, &RankVector::zeros(ctx, p.n + 1)), Err(SchemeError::Length { .. })));
    }
}
