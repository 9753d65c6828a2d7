//! Constructions of the distortion matrix X, the subspace-valued matrix P and
//! low-rank errors.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, RngCore};

use super::params::{ParamSet, Variant};
use super::SchemeError;
use crate::gf2m::{gf2_rank, FieldCtx, FieldElement};
use crate::ranklinalg::{circulant, partial_circulant_from_first_row, BaseMatrix, RankMatrix, RankVector};

const T_DRAWS: usize = 1024;
const P_ATTEMPTS: usize = 64;

/// GF(2)-basis of V together with the λ′-subsets spanning each `U_i`, `i ∈ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSpec {
    pub basis: Vec<FieldElement>,
    /// `(i, indices into basis)` for each block `i` of the information set.
    pub selections: Vec<(usize, Vec<usize>)>,
}

impl SubspaceSpec {
    pub fn random<R: RngCore + ?Sized>(
        ctx: &FieldCtx,
        lambda: usize,
        lambda_prime: usize,
        info_set: &[usize],
        rng: &mut R,
    ) -> Result<SubspaceSpec, SchemeError> {
        if lambda > ctx.m() || lambda_prime > lambda {
            return Err(SchemeError::Construction(format!(
                "subspace dimensions lambda = {lambda}, lambda' = {lambda_prime} in GF(2^{})",
                ctx.m()
            )));
        }
        let basis = loop {
            let b: Vec<FieldElement> = (0..lambda).map(|_| ctx.random(rng)).collect();
            if gf2_rank(b.iter().copied()) == lambda {
                break b;
            }
        };
        let selections = info_set
            .iter()
            .map(|&i| {
                let mut idx = sample(rng, lambda, lambda_prime).into_vec();
                idx.sort_unstable();
                (i, idx)
            })
            .collect();
        Ok(SubspaceSpec { basis, selections })
    }

    /// Generators of `U_i` for `i` in the information set, otherwise of V.
    pub fn generators(&self, block: usize) -> Vec<FieldElement> {
        match self.selections.iter().find(|(i, _)| *i == block) {
            Some((_, idx)) => idx.iter().map(|&j| self.basis[j]).collect(),
            None => self.basis.clone(),
        }
    }
}

/// Uniform element of the GF(2)-span of `gens`.
pub(crate) fn random_in_span<R: RngCore + ?Sized>(gens: &[FieldElement], rng: &mut R) -> FieldElement {
    gens.iter().fold(FieldElement::ZERO, |acc, &g| if rng.gen::<bool>() { acc + g } else { acc })
}

/// X together with the data it was built from.
#[derive(Clone, Debug)]
pub struct XWitness {
    pub x: RankMatrix,
    /// The base block T and its one-step cyclic column shift T′.
    pub t_base: BaseMatrix,
    pub t_shift: BaseMatrix,
    /// `W = [T | T | … | T]`, shared by every structured block.
    pub w: BaseMatrix,
    /// `((row block, column block), Y)` with `X_ij = Y · W` for structured blocks.
    pub y: Vec<((usize, usize), RankMatrix)>,
}

fn draw_t<R: RngCore + ?Sized>(t1: usize, rng: &mut R) -> Result<(BaseMatrix, BaseMatrix, BaseMatrix), SchemeError> {
    for _ in 0..T_DRAWS {
        let t = BaseMatrix::random(t1, t1, rng);
        let Some(t_inv) = t.invert() else { continue };
        let shifted = t.shift_columns_right();
        if !shifted.is_invertible() {
            continue;
        }
        let r = shifted.mul(&t_inv);
        return Ok((t, shifted, r));
    }
    Err(SchemeError::RetryExhausted("invertible T"))
}

/// `rows x t1` matrix Y with random first row and `y_{r+1} = y_r R`.
fn recursive_rows<R: RngCore + ?Sized>(
    ctx: &Arc<FieldCtx>,
    rows: usize,
    recursion: &BaseMatrix,
    rng: &mut R,
) -> Result<RankMatrix, SchemeError> {
    let mut y = vec![RankVector::random(ctx.clone(), recursion.rows(), rng)];
    for _ in 1..rows {
        let next = y.last().expect("nonempty").mul_base(recursion)?;
        y.push(next);
    }
    Ok(RankMatrix::from_row_vectors(&y)?)
}

/// Builds X. Improved: column blocks in `info_set` get partial-circulant blocks of
/// column rank at most t1 sharing one W; other blocks are random partial circulants.
/// Repaired: one k-partial circulant of full width and column rank at most t1.
pub fn construct_x<R: RngCore + ?Sized>(
    p: &ParamSet,
    ctx: &Arc<FieldCtx>,
    info_set: &[usize],
    rng: &mut R,
) -> Result<XWitness, SchemeError> {
    let width = match p.variant {
        Variant::Improved => p.n2,
        Variant::Repaired => p.n,
    };
    if p.t1 == 0 {
        let z = BaseMatrix::zeros(0, 0);
        let mut x = RankMatrix::zeros(ctx.clone(), p.k, p.n);
        if p.variant == Variant::Improved {
            fill_random_blocks(p, ctx, info_set, &mut x, rng)?;
        }
        return Ok(XWitness { x, t_base: z.clone(), t_shift: z, w: BaseMatrix::zeros(0, width), y: vec![] });
    }
    if width % p.t1 != 0 {
        return Err(SchemeError::Construction(format!("t1 = {} does not divide {width}", p.t1)));
    }
    let (t_base, t_shift, recursion) = draw_t(p.t1, rng)?;
    let w = t_base.tile_horizontal(width / p.t1);
    let mut witness = XWitness {
        x: RankMatrix::zeros(ctx.clone(), p.k, p.n),
        t_base,
        t_shift,
        w,
        y: Vec::new(),
    };
    match p.variant {
        Variant::Repaired => {
            let y = recursive_rows(ctx, p.k, &recursion, rng)?;
            witness.x = y.mul_base(&witness.w)?;
            witness.y.push(((0, 0), y));
        }
        Variant::Improved => {
            for &j in info_set {
                for i in 0..p.k1 {
                    let y = recursive_rows(ctx, p.k2, &recursion, rng)?;
                    let block = y.mul_base(&witness.w)?;
                    witness.x.set_submatrix(i * p.k2, j * p.n2, &block);
                    witness.y.push(((i, j), y));
                }
            }
            fill_random_blocks(p, ctx, info_set, &mut witness.x, rng)?;
        }
    }
    Ok(witness)
}

fn fill_random_blocks<R: RngCore + ?Sized>(
    p: &ParamSet,
    ctx: &Arc<FieldCtx>,
    info_set: &[usize],
    x: &mut RankMatrix,
    rng: &mut R,
) -> Result<(), SchemeError> {
    for j in (0..p.n1).filter(|j| !info_set.contains(j)) {
        for i in 0..p.k1 {
            let row = RankVector::random(ctx.clone(), p.n2, rng);
            x.set_submatrix(i * p.k2, j * p.n2, &partial_circulant_from_first_row(&row, p.k2)?);
        }
    }
    Ok(())
}

/// P and its inverse.
#[derive(Clone, Debug)]
pub struct PMatrix {
    pub p: RankMatrix,
    pub inverse: RankMatrix,
    /// Improved: the `n1²` block first rows (row-major). Repaired: the single vector b.
    pub first_rows: Vec<RankVector>,
}

/// Builds an invertible P. Improved: circulant-block, column block `j` drawing
/// entries from `U_j` for `j` in the information set and from V otherwise.
/// Repaired: `Cir_n(b)` with entries of b in V.
pub fn construct_p<R: RngCore + ?Sized>(
    p: &ParamSet,
    ctx: &Arc<FieldCtx>,
    spec: &SubspaceSpec,
    rng: &mut R,
) -> Result<PMatrix, SchemeError> {
    for _ in 0..P_ATTEMPTS {
        let (mat, first_rows) = match p.variant {
            Variant::Improved => {
                let mut rows = Vec::with_capacity(p.n1 * p.n1);
                for _i in 0..p.n1 {
                    for j in 0..p.n1 {
                        let gens = spec.generators(j);
                        let entries = (0..p.n2).map(|_| random_in_span(&gens, rng)).collect();
                        rows.push(RankVector::new(ctx.clone(), entries)?);
                    }
                }
                let m = crate::ranklinalg::circulant_block_from_first_rows(ctx.clone(), p.n1, &rows)?;
                (m, rows)
            }
            Variant::Repaired => {
                let entries = (0..p.n).map(|_| random_in_span(&spec.basis, rng)).collect();
                let b = RankVector::new(ctx.clone(), entries)?;
                (circulant(&b)?, vec![b])
            }
        };
        if let Ok(inverse) = mat.invert() {
            return Ok(PMatrix { p: mat, inverse, first_rows });
        }
    }
    Err(SchemeError::RetryExhausted("invertible P"))
}

/// `e = (β_1..β_t) · M` with independent β and a full-rank binary `t x n` matrix M,
/// so `rank_weight(e) = t`.
pub fn sample_rank_error<R: RngCore + ?Sized>(
    ctx: &Arc<FieldCtx>,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<RankVector, SchemeError> {
    if t > ctx.m() || t > n {
        return Err(SchemeError::Construction(format!(
            "error rank {t} exceeds min(m, n) = {}",
            ctx.m().min(n)
        )));
    }
    if t == 0 {
        return Ok(RankVector::zeros(ctx.clone(), n));
    }
    let beta = loop {
        let b = RankVector::random(ctx.clone(), t, rng);
        if b.rank_weight() == t {
            break b;
        }
    };
    let mbin = loop {
        let m = BaseMatrix::random(t, n, rng);
        if m.rank() == t {
            break m;
        }
    };
    Ok(beta.mul_base(&mbin)?)
}
