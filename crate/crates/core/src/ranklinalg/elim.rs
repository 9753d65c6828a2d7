//! Gauss-Jordan elimination over GF(2^m).

use super::{LinalgError, RankMatrix, RankVector};
use crate::gf2m::{FieldCtx, FieldElement};
use crate::par;

/// Below this many multiplications per pivot the update loop stays on one thread.
const PAR_THRESHOLD: usize = 8192;

/// Reduced row echelon form of a row-major `rows x cols` block in place.
/// Returns the pivot columns in order.
pub(crate) fn rref_rows(ctx: &FieldCtx, data: &mut [FieldElement], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = ctx.inv(data[r * cols + c]).expect("pivot is nonzero");
        for x in &mut data[r * cols + c..(r + 1) * cols] {
            *x = ctx.mul(*x, inv);
        }
        let pivot_row = data[r * cols + c..(r + 1) * cols].to_vec();
        let eliminate = |i: usize, row: &mut [FieldElement]| {
            if i == r {
                return;
            }
            let f = row[c];
            if f.is_zero() {
                return;
            }
            for (x, &pv) in row[c..].iter_mut().zip(&pivot_row) {
                *x += ctx.mul(f, pv);
            }
        };
        if rows * (cols - c) >= PAR_THRESHOLD {
            par::for_each_chunk_mut(data, cols, eliminate);
        } else {
            data.chunks_mut(cols).enumerate().for_each(|(i, row)| eliminate(i, row));
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// One nonzero vector of the right kernel of a row-major system, reducing it in place.
pub(crate) fn elim_kernel_vector(
    ctx: &FieldCtx,
    data: &mut [FieldElement],
    rows: usize,
    cols: usize,
) -> Option<Vec<FieldElement>> {
    let pivots = rref_rows(ctx, data, rows, cols);
    let free = (0..cols).find(|c| pivots.binary_search(c).is_err())?;
    let mut x = vec![FieldElement::ZERO; cols];
    x[free] = FieldElement::ONE;
    for (row, &p) in pivots.iter().enumerate() {
        if p < free {
            x[p] = data[row * cols + free];
        }
    }
    Some(x)
}

impl RankMatrix {
    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RankMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_rows(&self.ctx, &mut m.data, m.rows, m.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn invert(&self) -> Result<RankMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "invert",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows;
        let aug = self.hstack(&RankMatrix::identity(self.ctx.clone(), n))?;
        let (red, pivots) = aug.rref();
        let rank = pivots.iter().filter(|&&p| p < n).count();
        if rank < n {
            return Err(LinalgError::Singular { rank, size: n });
        }
        Ok(red.submatrix(0, n, n, n))
    }

    /// Some `x` with `x · self = b`.
    pub fn solve_left(&self, b: &RankVector) -> Result<RankVector, LinalgError> {
        super::same_ctx(&self.ctx, b.ctx())?;
        if b.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: (1, b.len()),
            });
        }
        let r = self.rows;
        let sys = RankMatrix::from_fn(self.ctx.clone(), self.cols, r + 1, |i, j| {
            if j < r {
                self.get(j, i)
            } else {
                b[i]
            }
        });
        let (red, pivots) = sys.rref();
        if pivots.last() == Some(&r) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = vec![FieldElement::ZERO; r];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red.get(row, r);
        }
        Ok(RankVector::from_entries(self.ctx.clone(), x))
    }

    /// Basis of the right kernel `{x : self · xᵀ = 0}`.
    pub fn nullspace(&self) -> Vec<RankVector> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![FieldElement::ZERO; self.cols];
                x[f] = FieldElement::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = red.get(row, f);
                }
                RankVector::from_entries(self.ctx.clone(), x)
            })
            .collect()
    }

    /// Lexicographically first set of `rows` column indices whose submatrix is invertible.
    pub fn information_set(&self) -> Result<Vec<usize>, LinalgError> {
        let (_, pivots) = self.rref();
        if pivots.len() < self.rows {
            return Err(LinalgError::RankDeficient { rank: pivots.len(), needed: self.rows });
        }
        Ok(pivots)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    use super::*;
    use crate::gf2m::FieldCtx;

    fn field(m: usize) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::standard(m).unwrap())
    }

    fn random_invertible(f: &Arc<FieldCtx>, n: usize, rng: &mut SplitMix64) -> RankMatrix {
        loop {
            let m = RankMatrix::random(f.clone(), n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    #[test]
    fn invert_identity_and_diagonal() {
        let f = field(8);
        let i = RankMatrix::identity(f.clone(), 5);
        assert_eq!(i.invert().unwrap(), i);
        let diag = [3u64, 7, 0x80, 1];
        let d = RankMatrix::from_fn(f.clone(), 4, 4, |r, c| {
            if r == c { FieldElement::from_u64(diag[r]) } else { FieldElement::ZERO }
        });
        let inv = d.invert().unwrap();
        for r in 0..4 {
            assert_eq!(inv.get(r, r), f.inv(FieldElement::from_u64(diag[r])).unwrap());
        }
    }

    #[test]
    fn invert_multiplies_back() {
        let f = field(48);
        let mut rng = SplitMix64::seed_from_u64(21);
        for _ in 0..10 {
            let m = random_invertible(&f, 8, &mut rng);
            let inv = m.invert().unwrap();
            assert!(m.mul(&inv).unwrap().is_identity());
            assert!(inv.mul(&m).unwrap().is_identity());
        }
    }

    #[test]
    fn singular_reports_rank() {
        let f = field(8);
        let mut rng = SplitMix64::seed_from_u64(4);
        let a = RankMatrix::random(f.clone(), 2, 4, &mut rng);
        // rows 2,3 repeat rows 0,1 so rank is 2
        let m = RankMatrix::from_fn(f, 4, 4, |i, j| a.get(i % 2, j));
        assert_eq!(m.invert(), Err(LinalgError::Singular { rank: 2, size: 4 }));
    }

    #[test]
    fn solve_and_inconsistency() {
        let f = field(12);
        let mut rng = SplitMix64::seed_from_u64(8);
        let a = RankMatrix::random(f.clone(), 3, 6, &mut rng);
        let x = RankVector::random(f.clone(), 3, &mut rng);
        let b = x.mul_matrix(&a).unwrap();
        let sol = a.solve_left(&b).unwrap();
        assert_eq!(sol.mul_matrix(&a).unwrap(), b);
        // a random target is almost never in a 3-dim row space of GF(2^12)^6
        let target = RankVector::random(f, 6, &mut rng);
        assert_eq!(a.solve_left(&target), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn nullspace_annihilates() {
        let f = field(8);
        let mut rng = SplitMix64::seed_from_u64(13);
        let a = RankMatrix::random(f.clone(), 3, 7, &mut rng);
        let ker = a.nullspace();
        assert_eq!(ker.len(), 4);
        for k in ker {
            let col = RankMatrix::from_row_vectors(&[k]).unwrap().transpose();
            assert!(a.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn information_sets() {
        let f = field(8);
        let left = RankMatrix::identity(f.clone(), 2).hstack(&RankMatrix::zeros(f.clone(), 2, 2)).unwrap();
        assert_eq!(left.information_set().unwrap(), vec![0, 1]);
        let right = RankMatrix::zeros(f.clone(), 2, 2).hstack(&RankMatrix::identity(f.clone(), 2)).unwrap();
        assert_eq!(right.information_set().unwrap(), vec![2, 3]);
        let mut rng = SplitMix64::seed_from_u64(17);
        for _ in 0..20 {
            let g = RankMatrix::random(f.clone(), 2, 4, &mut rng);
            if let Ok(set) = g.information_set() {
                assert_eq!(g.select_columns(&set).rank(), 2);
            }
        }
        let deficient = RankMatrix::zeros(f, 2, 4);
        assert!(matches!(deficient.information_set(), Err(LinalgError::RankDeficient { rank: 0, needed: 2 })));
    }
}
