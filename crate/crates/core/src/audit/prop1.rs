use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use super::trial_seed;
use crate::gabcodes::gab_new;
use crate::gabkron::{construct_p, construct_x, field_for, ParamSet, SchemeError, SubspaceSpec, Variant};
use crate::par;
use crate::ranklinalg::{is_circulant, partial_circulant, RankMatrix, RankVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystematicOutcome {
    /// Circulant `S` with `S·M = [I_k | S·M2]`.
    Found { s: RankMatrix, sm: RankMatrix },
    Impossible(String),
}

impl SystematicOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SystematicOutcome::Found { .. })
    }
}

/// A circulant `S` bringing `M` to systematic form exists iff the leading
/// `k x k` block is an invertible circulant; then `S` is its inverse.
pub fn systematic_via_circulant(m: &RankMatrix) -> SystematicOutcome {
    let k = m.rows();
    if k > m.cols() {
        return SystematicOutcome::Impossible(format!("{k} rows exceed {} columns", m.cols()));
    }
    let m1 = m.submatrix(0, 0, k, k);
    if !is_circulant(&m1) {
        return SystematicOutcome::Impossible("leading block is not circulant".into());
    }
    let s = match m1.invert() {
        Ok(s) => s,
        Err(e) => return SystematicOutcome::Impossible(format!("leading block is singular: {e}")),
    };
    let sm = s.mul(m).expect("shapes agree");
    SystematicOutcome::Found { s, sm }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlawReport {
    pub parameter_set: String,
    pub trials: usize,
    pub circulant_s_found: usize,
    pub formula_id: &'static str,
}

impl FlawReport {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.circulant_s_found as f64 / self.trials as f64
        }
    }
}

pub fn count_circulant_successes(ms: &[RankMatrix]) -> usize {
    ms.iter().filter(|m| systematic_via_circulant(m).is_found()).count()
}

/// `(G+X)P⁻¹` from the original key generation: `G1 = Cir_{k1}` of a normal-element
/// orbit, a Gabidulin `G2`, structured X and `P = Cir_n(b)` with b over V.
pub fn original_pipeline_matrix<R: RngCore + ?Sized>(p: &ParamSet, rng: &mut R) -> Result<RankMatrix, SchemeError> {
    if p.variant != Variant::Repaired {
        return Err(SchemeError::Construction("original pipeline uses the full-width layout".into()));
    }
    let ctx = field_for(p)?;
    let alpha = ctx.find_normal_element(rng).map_err(crate::ranklinalg::LinalgError::from)?;
    let g1 = partial_circulant(&RankVector::new(ctx.clone(), ctx.frobenius_orbit(alpha, p.n1))?, p.k1)?;
    let g2 = loop {
        let g = RankVector::random(ctx.clone(), p.n2, rng);
        if g.rank_weight() == p.n2 {
            break g;
        }
    };
    let code = crate::gabcodes::kron_product(g1, gab_new(g2, p.k2)?)?;
    let x = construct_x(p, &ctx, code.information_set(), rng)?;
    let spec = SubspaceSpec::random(&ctx, p.lambda, p.lambda, &[], rng)?;
    let pm = construct_p(p, &ctx, &spec, rng)?;
    Ok(code.generator().add(&x.x)?.mul(&pm.inverse)?)
}

pub fn demonstrate_original_flaw(p: &ParamSet, seed: u64, trials: usize) -> Result<FlawReport, SchemeError> {
    let results = par::map_range(trials, |i| {
        let mut rng = SplitMix64::seed_from_u64(trial_seed(seed, i as u64));
        original_pipeline_matrix(p, &mut rng).map(|m| systematic_via_circulant(&m).is_found())
    });
    let mut found = 0;
    for r in results {
        found += usize::from(r?);
    }
    Ok(FlawReport {
        parameter_set: p.name.clone(),
        trials,
        circulant_s_found: found,
        formula_id: "circulant S exists iff M1 circulant",
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gabkron::setup_named;
    use crate::gf2m::FieldCtx;
    use crate::ranklinalg::circulant;

    #[test]
    fn planted_and_identity() {
        let ctx = Arc::new(FieldCtx::standard(8).unwrap());
        let mut rng = SplitMix64::seed_from_u64(1);
        let c = loop {
            let c = circulant(&RankVector::random(ctx.clone(), 4, &mut rng)).unwrap();
            if c.invert().is_ok() {
                break c;
            }
        };
        let b = RankMatrix::random(ctx.clone(), 4, 5, &mut rng);
        let m = c.hstack(&b).unwrap();
        let SystematicOutcome::Found { s, sm } = systematic_via_circulant(&m) else { panic!() };
        assert!(is_circulant(&s));
        assert!(sm.submatrix(0, 0, 4, 4).is_identity());
        let id = RankMatrix::identity(ctx.clone(), 4).hstack(&b).unwrap();
        let SystematicOutcome::Found { s, .. } = systematic_via_circulant(&id) else { panic!() };
        assert!(s.is_identity());
        let mut nc = c.clone();
        nc.set(0, 1, nc.get(0, 1) + ctx.one());
        if nc.invert().is_ok() {
            assert!(!systematic_via_circulant(&nc.hstack(&b).unwrap()).is_found());
        }
    }

    #[test]
    fn original_flaw_toy() {
        let p = setup_named("toy-repaired").unwrap();
        let r = demonstrate_original_flaw(&p, 7, 20).unwrap();
        assert_eq!(r.trials, 20);
        assert_eq!(r.circulant_s_found, 0);
        assert_eq!(demonstrate_original_flaw(&p, 7, 0).unwrap().circulant_s_found, 0);
    }
}
