//! Vectors and matrices over GF(2^m) with rank-metric measurements.
//!
//! Rank weight and column rank are taken over the base field GF(2) through the
//! polynomial-basis expansion of each entry. Gaussian elimination, inversion
//! and the circulant structure scans live in the submodules.

mod base;
mod circulant;
mod elim;

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use rand::RngCore;
use thiserror::Error;

use crate::gf2m::{gf2_rank, FieldCtx, FieldElement, FieldError};
use crate::par;

pub(crate) use elim::elim_kernel_vector;
pub use base::BaseMatrix;
pub(crate) use base::bitvec_rank;
pub use circulant::{
    block_first_rows, circulant, circulant_block_compose, circulant_block_from_first_rows,
    circulant_block_invert, circulant_mul_closure, is_circulant, is_circulant_block,
    is_partial_circulant, is_partial_circulant_block, partial_circulant,
    partial_circulant_block_from_first_rows, partial_circulant_from_first_row,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field contexts differ (GF(2^{left}) vs GF(2^{right}))")]
    ContextMismatch { left: usize, right: usize },
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is singular (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
    #[error("matrix has rank {rank}, needed {needed}")]
    RankDeficient { rank: usize, needed: usize },
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("structure violation: {0}")]
    Structure(String),
    #[error("malformed encoding: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub(crate) fn same_ctx(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> Result<(), LinalgError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(LinalgError::ContextMismatch { left: a.m(), right: b.m() })
    }
}

/// Row vector over GF(2^m).
#[derive(Clone, PartialEq, Eq)]
pub struct RankVector {
    ctx: Arc<FieldCtx>,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

impl Index<usize> for RankVector {
    type Output = FieldElement;

    fn index(&self, i: usize) -> &FieldElement {
        &self.entries[i]
    }
}

impl RankVector {
    pub fn new(ctx: Arc<FieldCtx>, entries: Vec<FieldElement>) -> Result<Self, LinalgError> {
        for e in &entries {
            ctx.check(e)?;
        }
        Ok(RankVector { ctx, entries })
    }

    pub(crate) fn from_entries(ctx: Arc<FieldCtx>, entries: Vec<FieldElement>) -> Self {
        RankVector { ctx, entries }
    }

    pub fn zeros(ctx: Arc<FieldCtx>, n: usize) -> Self {
        RankVector { ctx, entries: vec![FieldElement::ZERO; n] }
    }

    pub fn random<R: RngCore + ?Sized>(ctx: Arc<FieldCtx>, n: usize, rng: &mut R) -> Self {
        let entries = (0..n).map(|_| ctx.random(rng)).collect();
        RankVector { ctx, entries }
    }

    /// Unit vector `e_i` of length n.
    pub fn unit(ctx: Arc<FieldCtx>, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(ctx, n);
        v.entries[i] = FieldElement::ONE;
        v
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FieldElement> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn add(&self, other: &RankVector) -> Result<RankVector, LinalgError> {
        same_ctx(&self.ctx, &other.ctx)?;
        if self.len() != other.len() {
            return Err(LinalgError::DimensionMismatch {
                op: "vector add",
                left: (1, self.len()),
                right: (1, other.len()),
            });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| a + b).collect();
        Ok(RankVector { ctx: self.ctx.clone(), entries })
    }

    pub fn scale(&self, a: FieldElement) -> RankVector {
        let entries = self.entries.iter().map(|&x| self.ctx.mul(a, x)).collect();
        RankVector { ctx: self.ctx.clone(), entries }
    }

    /// Row-vector times matrix, `self · m`.
    pub fn mul_matrix(&self, m: &RankMatrix) -> Result<RankVector, LinalgError> {
        same_ctx(&self.ctx, &m.ctx)?;
        if self.len() != m.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "vector-matrix product",
                left: (1, self.len()),
                right: (m.rows, m.cols),
            });
        }
        let mut out = vec![FieldElement::ZERO; m.cols];
        for (i, &a) in self.entries.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(m.row(i)) {
                *o += self.ctx.mul(a, b);
            }
        }
        Ok(RankVector { ctx: self.ctx.clone(), entries: out })
    }

    /// Product with a GF(2) matrix: `self · w`.
    pub fn mul_base(&self, w: &BaseMatrix) -> Result<RankVector, LinalgError> {
        if self.len() != w.rows() {
            return Err(LinalgError::DimensionMismatch {
                op: "vector-base product",
                left: (1, self.len()),
                right: (w.rows(), w.cols()),
            });
        }
        let entries = (0..w.cols())
            .map(|j| {
                (0..w.rows())
                    .filter(|&i| w.get(i, j))
                    .fold(FieldElement::ZERO, |acc, i| acc + self.entries[i])
            })
            .collect();
        Ok(RankVector { ctx: self.ctx.clone(), entries })
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> RankVector {
        RankVector { ctx: self.ctx.clone(), entries: self.entries[range].to_vec() }
    }

    pub fn concat(parts: &[RankVector]) -> Result<RankVector, LinalgError> {
        let first = parts
            .first()
            .ok_or_else(|| LinalgError::OutOfRange("concat of zero vectors".into()))?;
        let mut entries = Vec::new();
        for p in parts {
            same_ctx(&first.ctx, &p.ctx)?;
            entries.extend_from_slice(&p.entries);
        }
        Ok(RankVector { ctx: first.ctx.clone(), entries })
    }

    /// The m x n matrix over GF(2) whose column j holds the coordinates of entry j.
    pub fn expand_over_base(&self) -> BaseMatrix {
        BaseMatrix::from_fn(self.ctx.m(), self.len(), |i, j| self.entries[j].bit(i))
    }

    /// Rank weight: GF(2)-rank of the base-field expansion.
    pub fn rank_weight(&self) -> usize {
        gf2_rank(self.entries.iter().copied())
    }

    /// Coordinatewise Frobenius power.
    pub fn frobenius(&self, i: usize) -> RankVector {
        let entries = self.entries.iter().map(|&x| self.ctx.frobenius(x, i)).collect();
        RankVector { ctx: self.ctx.clone(), entries }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() * self.ctx.byte_len());
        for e in &self.entries {
            self.ctx.write_bytes(e, &mut out);
        }
        out
    }

    pub fn from_bytes(ctx: Arc<FieldCtx>, bytes: &[u8]) -> Result<RankVector, LinalgError> {
        let bl = ctx.byte_len();
        if bytes.len() % bl != 0 {
            return Err(LinalgError::Malformed(format!(
                "{} bytes is not a whole number of {bl}-byte elements",
                bytes.len()
            )));
        }
        let entries = bytes.chunks(bl).map(|c| ctx.from_bytes(c)).collect::<Result<_, _>>()?;
        Ok(RankVector { ctx, entries })
    }
}

/// Dense row-major matrix over GF(2^m).
#[derive(Clone, PartialEq, Eq)]
pub struct RankMatrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for RankMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RankMatrix {}x{} over GF(2^{})", self.rows, self.cols, self.ctx.m())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RankMatrix {
    type Output = FieldElement;

    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl RankMatrix {
    pub fn zeros(ctx: Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        RankMatrix { ctx, rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::ONE;
        }
        m
    }

    pub fn from_fn(
        ctx: Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RankMatrix { ctx, rows, cols, data }
    }

    pub fn from_rows(ctx: Arc<FieldCtx>, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    op: "from_rows",
                    left: (r, c),
                    right: (1, row.len()),
                });
            }
            for e in &row {
                ctx.check(e)?;
            }
            data.extend(row);
        }
        Ok(RankMatrix { ctx, rows: r, cols: c, data })
    }

    /// Stacks row vectors.
    pub fn from_row_vectors(rows: &[RankVector]) -> Result<Self, LinalgError> {
        let first = rows
            .first()
            .ok_or_else(|| LinalgError::OutOfRange("matrix with zero rows".into()))?;
        let ctx = first.ctx.clone();
        let mut data = Vec::with_capacity(rows.len() * first.len());
        for r in rows {
            same_ctx(&ctx, &r.ctx)?;
            if r.len() != first.len() {
                return Err(LinalgError::DimensionMismatch {
                    op: "from_row_vectors",
                    left: (1, first.len()),
                    right: (1, r.len()),
                });
            }
            data.extend_from_slice(&r.entries);
        }
        Ok(RankMatrix { ctx, rows: rows.len(), cols: first.len(), data })
    }

    pub fn random<R: RngCore + ?Sized>(ctx: Arc<FieldCtx>, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| ctx.random(rng)).collect();
        RankMatrix { ctx, rows, cols, data }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RankVector {
        RankVector { ctx: self.ctx.clone(), entries: self.row(i).to_vec() }
    }

    pub fn column_vector(&self, j: usize) -> RankVector {
        let entries = (0..self.rows).map(|i| self.get(i, j)).collect();
        RankVector { ctx: self.ctx.clone(), entries }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { FieldElement::ONE } else { FieldElement::ZERO })
            })
    }

    pub fn add(&self, other: &RankMatrix) -> Result<RankMatrix, LinalgError> {
        same_ctx(&self.ctx, &other.ctx)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch {
                op: "matrix add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(RankMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Matrix product, rows computed in parallel when enabled.
    pub fn mul(&self, other: &RankMatrix) -> Result<RankMatrix, LinalgError> {
        same_ctx(&self.ctx, &other.ctx)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matrix product",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let ctx = &*self.ctx;
        let mut data = vec![FieldElement::ZERO; self.rows * other.cols];
        if other.cols > 0 {
            par::for_each_chunk_mut(&mut data, other.cols, |i, out| {
                for (l, &a) in self.row(i).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(other.row(l)) {
                        *o += ctx.mul(a, b);
                    }
                }
            });
        }
        Ok(RankMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: other.cols, data })
    }

    /// Product with a GF(2) matrix on the right.
    pub fn mul_base(&self, w: &BaseMatrix) -> Result<RankMatrix, LinalgError> {
        if self.cols != w.rows() {
            return Err(LinalgError::DimensionMismatch {
                op: "matrix-base product",
                left: self.shape(),
                right: (w.rows(), w.cols()),
            });
        }
        let rows = (0..self.rows)
            .map(|i| self.row_vector(i).mul_base(w).map(RankVector::into_entries))
            .collect::<Result<Vec<_>, _>>()?;
        let data = rows.into_iter().flatten().collect();
        Ok(RankMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: w.cols(), data })
    }

    pub fn scale(&self, a: FieldElement) -> RankMatrix {
        let data = self.data.iter().map(|&x| self.ctx.mul(a, x)).collect();
        RankMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> RankMatrix {
        RankMatrix::from_fn(self.ctx.clone(), self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Sub-block with top-left corner `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> RankMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of range");
        RankMatrix::from_fn(self.ctx.clone(), rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &RankMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> RankMatrix {
        RankMatrix::from_fn(self.ctx.clone(), self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn hstack(&self, other: &RankMatrix) -> Result<RankMatrix, LinalgError> {
        same_ctx(&self.ctx, &other.ctx)?;
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let c = self.cols;
        Ok(RankMatrix::from_fn(self.ctx.clone(), self.rows, c + other.cols, |i, j| {
            if j < c {
                self.get(i, j)
            } else {
                other.get(i, j - c)
            }
        }))
    }

    /// Dimension over GF(2) of the span of the columns, each expanded to r·m bits.
    pub fn column_rank_q(&self) -> usize {
        let w = self.ctx.word_len();
        let cols = (0..self.cols)
            .map(|j| {
                let mut bits = Vec::with_capacity(self.rows * w);
                for i in 0..self.rows {
                    bits.extend_from_slice(&self.get(i, j).words()[..w]);
                }
                bits
            })
            .collect();
        bitvec_rank(cols)
    }

    /// Row-major elements preceded by the two dimensions as 32-bit big-endian integers.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.data.len() * self.ctx.byte_len());
        out.extend_from_slice(&(self.rows as u32).to_be_bytes());
        out.extend_from_slice(&(self.cols as u32).to_be_bytes());
        for e in &self.data {
            self.ctx.write_bytes(e, &mut out);
        }
        out
    }

    pub fn from_bytes(ctx: Arc<FieldCtx>, bytes: &[u8]) -> Result<RankMatrix, LinalgError> {
        if bytes.len() < 8 {
            return Err(LinalgError::Malformed("missing matrix dimensions".into()));
        }
        let rows = u32::from_be_bytes(bytes[0..4].try_into().expect("4 bytes")) as usize;
        let cols = u32::from_be_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
        let bl = ctx.byte_len();
        let expected = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(bl))
            .ok_or_else(|| LinalgError::Malformed("matrix dimensions overflow".into()))?;
        if bytes.len() - 8 != expected {
            return Err(LinalgError::Malformed(format!(
                "{rows}x{cols} matrix needs {expected} payload bytes, got {}",
                bytes.len() - 8
            )));
        }
        let data = bytes[8..].chunks(bl).map(|c| ctx.from_bytes(c)).collect::<Result<_, _>>()?;
        Ok(RankMatrix { ctx, rows, cols, data })
    }
}
