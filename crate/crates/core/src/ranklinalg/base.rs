use rand::RngCore;

/// Dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BaseMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BaseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BaseMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl BaseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        BaseMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn random<R: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let tail = cols % 64;
        for i in 0..rows {
            for w in 0..m.stride {
                m.data[i * m.stride + w] = rng.next_u64();
            }
            if tail != 0 {
                m.data[i * m.stride + m.stride - 1] &= (1u64 << tail) - 1;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.stride + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &BaseMatrix) -> BaseMatrix {
        assert_eq!(self.cols, other.rows, "GF(2) product dimension mismatch");
        let mut out = BaseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self.get(i, l) {
                    for w in 0..out.stride {
                        out.data[i * out.stride + w] ^= other.data[l * other.stride + w];
                    }
                }
            }
        }
        out
    }

    /// Row echelon reduction in place; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            if p != r {
                for w in 0..self.stride {
                    self.data.swap(p * self.stride + w, r * self.stride + w);
                }
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    for w in 0..self.stride {
                        let v = self.data[r * self.stride + w];
                        self.data[i * self.stride + w] ^= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn invert(&self) -> Option<BaseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = BaseMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else {
                j - n == i
            }
        });
        let pivots = aug.reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(BaseMatrix::from_fn(n, n, |i, j| aug.get(i, n + j)))
    }

    /// Cyclic shift of the columns one step to the right: column j moves to j+1,
    /// the last column wraps to position 0.
    pub fn shift_columns_right(&self) -> BaseMatrix {
        let c = self.cols;
        BaseMatrix::from_fn(self.rows, c, |i, j| self.get(i, (j + c - 1) % c))
    }

    /// Horizontal concatenation of `copies` copies of `self`.
    pub fn tile_horizontal(&self, copies: usize) -> BaseMatrix {
        BaseMatrix::from_fn(self.rows, self.cols * copies, |i, j| self.get(i, j % self.cols))
    }
}

/// GF(2)-rank of bit vectors of equal word length.
pub(crate) fn bitvec_rank(mut vecs: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let Some(words) = vecs.first().map(Vec::len) else {
        return 0;
    };
    for bit in 0..words * 64 {
        let (w, b) = (bit / 64, bit % 64);
        let Some(p) = (rank..vecs.len()).find(|&i| vecs[i][w] >> b & 1 == 1) else {
            continue;
        };
        vecs.swap(rank, p);
        let pivot = vecs[rank].clone();
        for v in vecs.iter_mut().skip(rank + 1) {
            if v[w] >> b & 1 == 1 {
                for (x, y) in v.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == vecs.len() {
            break;
        }
    }
    rank
}
