use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use super::trial_seed;
use crate::gabcodes::{gab_new, kron_product, subcode_membership};
use crate::gf2m::FieldCtx;
use crate::par;
use crate::ranklinalg::{
    circulant, circulant_block_compose, circulant_block_from_first_rows, circulant_block_invert,
    circulant_mul_closure, partial_circulant, partial_circulant_block_from_first_rows, RankMatrix, RankVector,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub passes: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub trials: usize,
    pub results: Vec<LemmaResult>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.failures == 0 && r.passes == self.trials)
    }
}

const M: usize = 6;

fn independent(ctx: &Arc<FieldCtx>, n: usize, rng: &mut SplitMix64) -> RankVector {
    loop {
        let g = RankVector::random(ctx.clone(), n, rng);
        if g.rank_weight() == n {
            return g;
        }
    }
}

fn full_rank(ctx: &Arc<FieldCtx>, rows: usize, cols: usize, rng: &mut SplitMix64) -> RankMatrix {
    loop {
        let g = RankMatrix::random(ctx.clone(), rows, cols, rng);
        if g.rank() == rows {
            return g;
        }
    }
}

fn lemma1(ctx: &Arc<FieldCtx>, rng: &mut SplitMix64) -> bool {
    let (k1, n1) = (rng.gen_range(1..=3), 3);
    let g1 = full_rank(ctx, k1, n1, rng);
    let code = gab_new(independent(ctx, 6, rng), 2).expect("valid inner code");
    kron_product(g1, code).is_ok_and(|k| k.g1_bar().rank() == k1 * 2 && k.g1_bar().mul(k.g2_bar()).ok().as_ref() == Some(k.generator()))
}

fn corollary(ctx: &Arc<FieldCtx>, rng: &mut SplitMix64) -> bool {
    let g1 = full_rank(ctx, 2, 3, rng);
    let code = gab_new(independent(ctx, 6, rng), 2).expect("valid inner code");
    let Ok(k) = kron_product(g1, code) else { return false };
    let m = RankVector::random(ctx.clone(), k.dimension(), rng);
    subcode_membership(&k, &k.encode(&m).expect("dimension"))
}

fn invertible_circulant_block(ctx: &Arc<FieldCtx>, blocks: usize, n2: usize, rng: &mut SplitMix64) -> RankMatrix {
    loop {
        let rows: Vec<_> = (0..blocks * blocks).map(|_| RankVector::random(ctx.clone(), n2, rng)).collect();
        let a = circulant_block_from_first_rows(ctx.clone(), blocks, &rows).expect("shapes");
        if a.rank() == a.rows() {
            return a;
        }
    }
}

fn lemma3(ctx: &Arc<FieldCtx>, rng: &mut SplitMix64) -> bool {
    let a = invertible_circulant_block(ctx, 2, 4, rng);
    circulant_block_invert(&a, 4).is_ok_and(|inv| a.mul(&inv).is_ok_and(|p| p.is_identity()))
}

fn lemma4(ctx: &Arc<FieldCtx>, rng: &mut SplitMix64) -> bool {
    let p = partial_circulant(&RankVector::random(ctx.clone(), 6, rng), 3).expect("k <= n");
    let q = circulant(&RankVector::random(ctx.clone(), 6, rng)).expect("square");
    circulant_mul_closure(&p, &q).is_ok()
}

fn lemma5(ctx: &Arc<FieldCtx>, rng: &mut SplitMix64) -> bool {
    let rows: Vec<_> = (0..4).map(|_| RankVector::random(ctx.clone(), 4, rng)).collect();
    let b = partial_circulant_block_from_first_rows(ctx.clone(), 2, 2, 2, &rows).expect("shapes");
    let a = invertible_circulant_block(ctx, 2, 4, rng);
    circulant_block_compose(&b, &a, 2, 4).is_ok()
}

type Check = fn(&Arc<FieldCtx>, &mut SplitMix64) -> bool;

const SUITES: [(&str, &str, Check); 5] = [
    ("lemma1", "rank of expanded G1 equals k and G = G1bar * G2bar", lemma1),
    ("corollary", "Kronecker codewords lie in the Gabidulin-block code", corollary),
    ("lemma3", "inverse of a circulant-block matrix is circulant-block", lemma3),
    ("lemma4", "partial circulant times circulant is partial circulant", lemma4),
    ("lemma5", "partial-circulant-block times circulant-block keeps the structure", lemma5),
];

/// Randomized structure checks at toy scale over GF(2^6).
pub fn verify_structure_lemmas(seed: u64, trials: usize) -> LemmaReport {
    let ctx = Arc::new(FieldCtx::standard(M).expect("registry modulus"));
    let results = SUITES
        .iter()
        .enumerate()
        .map(|(s, &(name, statement, check))| {
            let outcomes = par::map_range(trials, |i| {
                let mut rng = SplitMix64::seed_from_u64(trial_seed(seed ^ (s as u64) << 48, i as u64));
                check(&ctx, &mut rng)
            });
            let passes = outcomes.iter().filter(|&&b| b).count();
            LemmaResult { name, statement, passes, failures: trials - passes }
        })
        .collect();
    LemmaReport { trials, results }
}
