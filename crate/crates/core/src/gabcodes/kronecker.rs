use std::sync::Arc;

use itertools::Itertools;

use super::{CodeError, DecodeFailure, GabidulinCode};
use crate::gf2m::{FieldCtx, FieldElement};
use crate::par;
use crate::ranklinalg::{RankMatrix, RankVector};

/// Kronecker product code `G = G1 ⊗ G2` with `G2` a Gabidulin generator.
#[derive(Clone, Debug)]
pub struct KroneckerCode {
    g1: RankMatrix,
    inner: GabidulinCode,
    generator: RankMatrix,
    g1_bar: RankMatrix,
    g2_bar: RankMatrix,
    info_set: Vec<usize>,
}

pub fn kron_product(g1: RankMatrix, inner: GabidulinCode) -> Result<KroneckerCode, CodeError> {
    KroneckerCode::new(g1, inner)
}

pub fn subcode_membership(code: &KroneckerCode, c: &RankVector) -> bool {
    code.in_block_code(c)
}

pub fn kron_block_decode(code: &KroneckerCode, y: &RankVector) -> Result<RankVector, DecodeFailure> {
    code.decode(y, None)
}

impl KroneckerCode {
    pub fn new(g1: RankMatrix, inner: GabidulinCode) -> Result<Self, CodeError> {
        crate::ranklinalg::same_ctx(g1.ctx(), inner.ctx())?;
        let ctx = g1.ctx().clone();
        let (k1, n1) = g1.shape();
        if k1 == 0 || k1 > n1 {
            return Err(CodeError::Dimensions(format!("G1 is {k1} x {n1}")));
        }
        let rank = g1.rank();
        if rank < k1 {
            return Err(CodeError::RankDeficientG1 { rank, needed: k1 });
        }
        let g2 = inner.generator();
        let (k2, n2) = g2.shape();
        let (k, n) = (k1 * k2, n1 * n2);
        let generator = RankMatrix::from_fn(ctx.clone(), k, n, |r, c| {
            ctx.mul(g1.get(r / k2, c / n2), g2.get(r % k2, c % n2))
        });
        let g1_bar = RankMatrix::from_fn(ctx.clone(), k, n1 * k2, |r, c| {
            if r % k2 == c % k2 {
                g1.get(r / k2, c / k2)
            } else {
                FieldElement::ZERO
            }
        });
        let g2_bar = RankMatrix::from_fn(ctx.clone(), n1 * k2, n, |r, c| {
            if r / k2 == c / n2 {
                g2.get(r % k2, c % n2)
            } else {
                FieldElement::ZERO
            }
        });
        let bar_rank = g1_bar.rank();
        if bar_rank != k {
            return Err(CodeError::ExpandedRank { rank: bar_rank, expected: k });
        }
        let info_set = g1.information_set()?;
        Ok(KroneckerCode { g1, inner, generator, g1_bar, g2_bar, info_set })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.g1.ctx()
    }

    pub fn g1(&self) -> &RankMatrix {
        &self.g1
    }

    pub fn inner(&self) -> &GabidulinCode {
        &self.inner
    }

    pub fn generator(&self) -> &RankMatrix {
        &self.generator
    }

    pub fn g1_bar(&self) -> &RankMatrix {
        &self.g1_bar
    }

    pub fn g2_bar(&self) -> &RankMatrix {
        &self.g2_bar
    }

    pub fn information_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn n1(&self) -> usize {
        self.g1.cols()
    }

    pub fn k1(&self) -> usize {
        self.g1.rows()
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.generator.cols() == 0
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn encode(&self, m: &RankVector) -> Result<RankVector, CodeError> {
        if m.len() != self.dimension() {
            return Err(CodeError::Dimensions(format!(
                "message length {} != {}",
                m.len(),
                self.dimension()
            )));
        }
        Ok(m.mul_matrix(&self.generator)?)
    }

    /// Whether `c` lies in the row space of the block-diagonal `Ḡ2`.
    pub fn in_block_code(&self, c: &RankVector) -> bool {
        c.len() == self.len() && self.g2_bar.solve_left(c).is_ok()
    }

    /// Block messages `u_j = Σ_i m_i g1_ij`, one per outer coordinate.
    pub fn block_messages(&self, m: &RankVector) -> Vec<RankVector> {
        let ctx = self.ctx();
        let k2 = self.inner.dimension();
        (0..self.n1())
            .map(|j| {
                let mut u = vec![FieldElement::ZERO; k2];
                for i in 0..self.k1() {
                    let g = self.g1.get(i, j);
                    for (a, x) in u.iter_mut().enumerate() {
                        *x += ctx.mul(g, m[i * k2 + a]);
                    }
                }
                RankVector::new(ctx.clone(), u).expect("same context")
            })
            .collect()
    }

    /// Decodes each block, then recovers `m` from an information set of decoded blocks.
    ///
    /// `preferred` is tried first; remaining candidates follow in lexicographic order.
    /// Among candidates, the one whose message agrees with the most decoded blocks wins.
    pub fn decode(&self, y: &RankVector, preferred: Option<&[usize]>) -> Result<RankVector, DecodeFailure> {
        crate::ranklinalg::same_ctx(self.ctx(), y.ctx())?;
        if y.len() != self.len() {
            return Err(DecodeFailure::Length { got: y.len(), expected: self.len() });
        }
        let n2 = self.inner.len();
        let decoded: Vec<Option<RankVector>> = par::map_range(self.n1(), |j| {
            self.inner.decode(&y.slice(j * n2..(j + 1) * n2)).ok().map(|(u, _)| u)
        });
        self.recover(&decoded, preferred)
    }

    pub(crate) fn recover(
        &self,
        decoded: &[Option<RankVector>],
        preferred: Option<&[usize]>,
    ) -> Result<RankVector, DecodeFailure> {
        let ok: Vec<usize> = (0..self.n1()).filter(|&j| decoded[j].is_some()).collect();
        let failed_blocks: Vec<usize> = (0..self.n1()).filter(|&j| decoded[j].is_none()).collect();
        let preferred = preferred.filter(|p| p.iter().all(|j| decoded.get(*j).is_some_and(Option::is_some)));
        let candidates = preferred
            .map(<[usize]>::to_vec)
            .into_iter()
            .chain(ok.iter().copied().combinations(self.k1()));

        let mut best: Option<(usize, RankVector)> = None;
        for set in candidates {
            let Some(m) = self.solve_from_blocks(&set, decoded) else {
                continue;
            };
            let agree = self
                .block_messages(&m)
                .iter()
                .zip(decoded)
                .filter(|(u, d)| d.as_ref() == Some(*u))
                .count();
            if best.as_ref().is_none_or(|(a, _)| agree > *a) {
                let done = agree == ok.len();
                best = Some((agree, m));
                if done {
                    break;
                }
            }
        }
        best.map(|(_, m)| m).ok_or(DecodeFailure::NoInformationSet { failed_blocks })
    }

    fn solve_from_blocks(&self, set: &[usize], decoded: &[Option<RankVector>]) -> Option<RankVector> {
        let ctx = self.ctx();
        let k1 = self.k1();
        let k2 = self.inner.dimension();
        // U = A^T M with A = G1[:, set]
        let at_inv = self.g1.select_columns(set).transpose().invert().ok()?;
        let mut m = vec![FieldElement::ZERO; k1 * k2];
        for i in 0..k1 {
            for (t, &j) in set.iter().enumerate() {
                let coef = at_inv.get(i, t);
                let u = decoded[j].as_ref()?;
                for a in 0..k2 {
                    m[i * k2 + a] += ctx.mul(coef, u[a]);
                }
            }
        }
        RankVector::new(ctx.clone(), m).ok()
    }
}
