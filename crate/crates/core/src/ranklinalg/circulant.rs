//! Circulant, partial-circulant and block-circulant structures.
//!
//! Row `i` of `Cir_k(a)` is `(a_i, a_{i-1}, ..., a_{i-n+1})` with indices mod n,
//! so row 0 is `(a_0, a_{n-1}, ..., a_1)` and every row is the previous one
//! cyclically shifted one place to the right.

use std::sync::Arc;

use super::{LinalgError, RankMatrix, RankVector};
use crate::gf2m::FieldCtx;

/// `Cir_k(a)`: the first k rows of the circulant generated by `a`.
pub fn partial_circulant(a: &RankVector, k: usize) -> Result<RankMatrix, LinalgError> {
    let n = a.len();
    if k == 0 || k > n {
        return Err(LinalgError::OutOfRange(format!("partial circulant with k={k}, n={n}")));
    }
    Ok(RankMatrix::from_fn(a.ctx().clone(), k, n, |i, j| a[(i + n - j) % n]))
}

/// Full n x n circulant `Cir_n(a)`.
pub fn circulant(a: &RankVector) -> Result<RankMatrix, LinalgError> {
    partial_circulant(a, a.len())
}

/// k-partial circulant whose row 0 is `row` itself.
pub fn partial_circulant_from_first_row(row: &RankVector, k: usize) -> Result<RankMatrix, LinalgError> {
    let n = row.len();
    if k == 0 || k > n {
        return Err(LinalgError::OutOfRange(format!("partial circulant with k={k}, n={n}")));
    }
    Ok(RankMatrix::from_fn(row.ctx().clone(), k, n, |i, j| row[(j + n - i % n) % n]))
}

/// Every row after the first is the right cyclic shift of its predecessor.
pub fn is_partial_circulant(m: &RankMatrix) -> bool {
    let n = m.cols();
    (1..m.rows()).all(|i| (0..n).all(|j| m.get(i, j) == m.get(i - 1, (j + n - 1) % n)))
}

pub fn is_circulant(m: &RankMatrix) -> bool {
    m.rows() == m.cols() && is_partial_circulant(m)
}

fn block_shape_ok(m: &RankMatrix, block_rows: usize, block_cols: usize) -> bool {
    block_rows > 0 && block_cols > 0 && m.rows() % block_rows == 0 && m.cols() % block_cols == 0
}

/// Every `block_rows x block_cols` block of `m` is partial circulant.
fn blocks_partial_circulant(m: &RankMatrix, block_rows: usize, block_cols: usize) -> bool {
    if !block_shape_ok(m, block_rows, block_cols) {
        return false;
    }
    let n2 = block_cols;
    (0..m.rows() / block_rows).all(|bi| {
        (0..m.cols() / block_cols).all(|bj| {
            let (r0, c0) = (bi * block_rows, bj * block_cols);
            (1..block_rows).all(|i| {
                (0..n2).all(|j| m.get(r0 + i, c0 + j) == m.get(r0 + i - 1, c0 + (j + n2 - 1) % n2))
            })
        })
    })
}

/// Square matrix whose every `n2 x n2` block is circulant.
pub fn is_circulant_block(m: &RankMatrix, n2: usize) -> bool {
    m.rows() == m.cols() && blocks_partial_circulant(m, n2, n2)
}

/// Matrix whose every `k2 x n2` block is a k2-partial circulant.
pub fn is_partial_circulant_block(m: &RankMatrix, k2: usize, n2: usize) -> bool {
    k2 <= n2 && blocks_partial_circulant(m, k2, n2)
}

/// Product of a k-partial circulant and a circulant, checked to be k-partial circulant.
pub fn circulant_mul_closure(p: &RankMatrix, q: &RankMatrix) -> Result<RankMatrix, LinalgError> {
    if !is_partial_circulant(p) {
        return Err(LinalgError::Structure("left factor is not partial circulant".into()));
    }
    if !is_circulant(q) {
        return Err(LinalgError::Structure("right factor is not circulant".into()));
    }
    let pq = p.mul(q)?;
    if !is_partial_circulant(&pq) {
        return Err(LinalgError::Structure("product lost partial-circulant structure".into()));
    }
    Ok(pq)
}

/// `B · A` for B partial-circulant-block (k2 x n2 blocks) and A circulant-block
/// (n2 x n2 blocks); the result is checked to be partial-circulant-block.
pub fn circulant_block_compose(
    b: &RankMatrix,
    a: &RankMatrix,
    k2: usize,
    n2: usize,
) -> Result<RankMatrix, LinalgError> {
    if !is_partial_circulant_block(b, k2, n2) {
        return Err(LinalgError::Structure("left factor is not partial-circulant-block".into()));
    }
    if !is_circulant_block(a, n2) {
        return Err(LinalgError::Structure("right factor is not circulant-block".into()));
    }
    let q = b.mul(a)?;
    if !is_partial_circulant_block(&q, k2, n2) {
        return Err(LinalgError::Structure("product lost partial-circulant-block structure".into()));
    }
    Ok(q)
}

/// Inverse of a circulant-block matrix, checked to be circulant-block again.
pub fn circulant_block_invert(a: &RankMatrix, n2: usize) -> Result<RankMatrix, LinalgError> {
    if !is_circulant_block(a, n2) {
        return Err(LinalgError::Structure("matrix is not circulant-block".into()));
    }
    let inv = a.invert()?;
    if !is_circulant_block(&inv, n2) {
        return Err(LinalgError::Structure("inverse lost circulant-block structure".into()));
    }
    Ok(inv)
}

/// First rows of all `block_rows x block_cols` blocks, in row-major block order.
pub fn block_first_rows(m: &RankMatrix, block_rows: usize, block_cols: usize) -> Vec<RankVector> {
    let mut out = Vec::new();
    for bi in 0..m.rows() / block_rows {
        for bj in 0..m.cols() / block_cols {
            let r = bi * block_rows;
            let c = bj * block_cols;
            out.push(RankVector::from_entries(m.ctx().clone(), m.row(r)[c..c + block_cols].to_vec()));
        }
    }
    out
}

/// Rebuilds a `(bk·k2) x (bn·n2)` partial-circulant-block matrix from its block first rows.
pub fn partial_circulant_block_from_first_rows(
    ctx: Arc<FieldCtx>,
    block_rows: usize,
    block_cols: usize,
    k2: usize,
    first_rows: &[RankVector],
) -> Result<RankMatrix, LinalgError> {
    if first_rows.len() != block_rows * block_cols {
        return Err(LinalgError::OutOfRange(format!(
            "{} first rows for a {block_rows}x{block_cols} block grid",
            first_rows.len()
        )));
    }
    let n2 = first_rows.first().map_or(0, RankVector::len);
    let mut m = RankMatrix::zeros(ctx.clone(), block_rows * k2, block_cols * n2);
    for (idx, row) in first_rows.iter().enumerate() {
        super::same_ctx(&ctx, row.ctx())?;
        if row.len() != n2 {
            return Err(LinalgError::OutOfRange("block first rows differ in length".into()));
        }
        let block = partial_circulant_from_first_row(row, k2)?;
        m.set_submatrix((idx / block_cols) * k2, (idx % block_cols) * n2, &block);
    }
    Ok(m)
}

/// Rebuilds an `(nb·n2)`-square circulant-block matrix from its block first rows.
pub fn circulant_block_from_first_rows(
    ctx: Arc<FieldCtx>,
    blocks_per_side: usize,
    first_rows: &[RankVector],
) -> Result<RankMatrix, LinalgError> {
    let n2 = first_rows.first().map_or(0, RankVector::len);
    partial_circulant_block_from_first_rows(ctx, blocks_per_side, blocks_per_side, n2, first_rows)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    use super::*;
    use crate::gf2m::FieldElement;

    fn field(m: usize) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::standard(m).unwrap())
    }

    #[test]
    fn row_convention() {
        let f = field(8);
        let a = RankVector::new(f.clone(), vec![FieldElement::from_u64(10), FieldElement::from_u64(11), FieldElement::from_u64(12)]).unwrap();
        let c = partial_circulant(&a, 2).unwrap();
        let ids = |i: usize| c.row(i).iter().map(|e| e.low_u64()).collect::<Vec<_>>();
        assert_eq!(ids(0), vec![10, 12, 11]);
        assert_eq!(ids(1), vec![11, 10, 12]);
        assert_eq!(partial_circulant(&a, 1).unwrap().row(0), c.row(0));
        let e1 = RankVector::unit(f.clone(), 4, 0);
        assert!(circulant(&e1).unwrap().is_identity());
        assert!(partial_circulant(&a, 0).is_err());
        assert!(partial_circulant(&a, 4).is_err());
    }

    #[test]
    fn first_row_constructor_agrees() {
        let f = field(8);
        let mut rng = SplitMix64::seed_from_u64(3);
        let a = RankVector::random(f, 5, &mut rng);
        let c = partial_circulant(&a, 3).unwrap();
        let again = partial_circulant_from_first_row(&c.row_vector(0), 3).unwrap();
        assert_eq!(c, again);
        assert!(is_partial_circulant(&c));
    }

    #[test]
    fn partial_times_circulant() {
        let f = field(4);
        let mut rng = SplitMix64::seed_from_u64(1);
        let a = RankVector::random(f.clone(), 3, &mut rng);
        let b = RankVector::random(f.clone(), 3, &mut rng);
        let p = partial_circulant(&a, 2).unwrap();
        let q = partial_circulant(&b, 3).unwrap();
        let pq = circulant_mul_closure(&p, &q).unwrap();
        assert_eq!(pq, p.mul(&q).unwrap());
        assert!(is_partial_circulant(&pq));
        let ident = circulant(&RankVector::unit(f, 3, 0)).unwrap();
        assert_eq!(circulant_mul_closure(&p, &ident).unwrap(), p);
    }

    #[test]
    fn structure_violations_rejected() {
        let f = field(8);
        let mut rng = SplitMix64::seed_from_u64(2);
        let junk = RankMatrix::random(f.clone(), 3, 3, &mut rng);
        let ok = circulant(&RankVector::random(f, 3, &mut rng)).unwrap();
        assert!(matches!(circulant_mul_closure(&junk, &ok), Err(LinalgError::Structure(_))));
        assert!(matches!(circulant_mul_closure(&ok, &junk), Err(LinalgError::Structure(_))));
        assert!(matches!(circulant_block_invert(&junk, 3), Err(LinalgError::Structure(_))));
    }

    #[test]
    fn block_inverse_and_compose() {
        let f = field(4);
        let mut rng = SplitMix64::seed_from_u64(6);
        let (n1, n2, k1, k2) = (2, 3, 1, 2);
        let ident = circulant_block_invert(&RankMatrix::identity(f.clone(), n1 * n2), n2).unwrap();
        assert!(ident.is_identity());
        let mut inverted = 0;
        for _ in 0..20 {
            let rows: Vec<RankVector> = (0..n1 * n1).map(|_| RankVector::random(f.clone(), n2, &mut rng)).collect();
            let a = circulant_block_from_first_rows(f.clone(), n1, &rows).unwrap();
            assert!(is_circulant_block(&a, n2));
            assert_eq!(block_first_rows(&a, n2, n2), rows);
            match circulant_block_invert(&a, n2) {
                Ok(inv) => {
                    assert!(a.mul(&inv).unwrap().is_identity());
                    inverted += 1;
                }
                Err(LinalgError::Singular { .. }) => {}
                Err(e) => panic!("{e}"),
            }
            let brows: Vec<RankVector> = (0..k1 * n1).map(|_| RankVector::random(f.clone(), n2, &mut rng)).collect();
            let b = partial_circulant_block_from_first_rows(f.clone(), k1, n1, k2, &brows).unwrap();
            assert!(is_partial_circulant_block(&b, k2, n2));
            circulant_block_compose(&b, &a, k2, n2).unwrap();
        }
        assert!(inverted > 0);
    }
}
