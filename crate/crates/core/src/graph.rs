//! Circulant graphs `C_n(a_1, ..., a_m)` and their dense adjacency and
//! Laplacian matrices.
//!
//! Vertices are labelled `0..n`. Vertex `i` is adjacent to `i ± a_k (mod n)`
//! for every offset `a_k`, so row `i` of the adjacency matrix is row `0`
//! rotated `i` places to the right.

use crate::arith::gcd_all;
use crate::error::{Error, Result};

/// Validated parameters of a circulant graph.
///
/// Offsets satisfy `1 <= a_1 < ... < a_m <= n/2` and `n >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CirculantSpec {
    n: usize,
    offsets: Vec<usize>,
}

impl CirculantSpec {
    pub fn new(n: usize, offsets: impl Into<Vec<usize>>) -> Result<Self> {
        let offsets = offsets.into();
        if n < 3 {
            return Err(Error::OrderTooSmall { n: n as u64 });
        }
        if offsets.is_empty() {
            return Err(Error::NoOffsets);
        }
        if let Some(&bad) = offsets.iter().find(|&&a| a < 1 || 2 * a > n) {
            return Err(Error::OffsetOutOfRange {
                n: n as u64,
                offset: bad as u64,
            });
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotStrictlyIncreasing {
                offsets: offsets.iter().map(|&a| a as u64).collect(),
            });
        }
        Ok(Self { n, offsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Number of offsets `m`.
    pub fn m(&self) -> usize {
        self.offsets.len()
    }

    /// True when the last offset is the antipodal `n/2`, which contributes a
    /// single neighbour instead of two.
    pub fn has_antipodal_offset(&self) -> bool {
        self.offsets.last().is_some_and(|&a| 2 * a == self.n)
    }

    /// Vertex degree: `2m`, or `2m - 1` with an antipodal offset.
    pub fn degree(&self) -> usize {
        2 * self.m() - usize::from(self.has_antipodal_offset())
    }

    /// Connected iff `gcd(n, a_1, ..., a_m) = 1`.
    pub fn is_connected(&self) -> bool {
        gcd_all(
            std::iter::once(self.n)
                .chain(self.offsets.iter().copied())
                .map(|x| x as u64),
        ) == 1
    }

    /// Reduces any (possibly negative) vertex label into `0..n`.
    pub fn normalize_label(&self, label: i64) -> usize {
        label.rem_euclid(self.n as i64) as usize
    }

    /// Neighbours of vertex 0, i.e. the column indices of the ones in row 0.
    pub fn neighbours_of_zero(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.offsets.iter().flat_map(|&a| [a, self.n - a]).collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }

    /// The 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> DenseSymMatrix {
        let n = self.n;
        let mut first = vec![0.0; n];
        for c in self.neighbours_of_zero() {
            first[c] = 1.0;
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = first[(j + n - i) % n];
            }
        }
        DenseSymMatrix { order: n, entries }
    }

    /// `L = D - A`; for this regular graph `D = degree * I`.
    pub fn laplacian_matrix(&self) -> DenseSymMatrix {
        let mut l = self.adjacency_matrix();
        let n = self.n;
        let deg = self.degree() as f64;
        for (k, x) in l.entries.iter_mut().enumerate() {
            *x = if k / n == k % n { deg - *x } else { -*x };
        }
        l
    }
}

/// Square real symmetric matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl DenseSymMatrix {
    /// Builds from row-major entries; symmetry must hold exactly.
    pub fn from_row_major(order: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::DimensionMismatch {
                expected: order * order,
                got: entries.len(),
            });
        }
        for i in 0..order {
            for j in (i + 1)..order {
                if entries[i * order + j] != entries[j * order + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { order, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != order) {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: bad.len(),
            });
        }
        Self::from_row_major(order, rows.concat())
    }

    pub fn identity(order: usize) -> Self {
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            entries[i * order + i] = 1.0;
        }
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.order)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                got: v.len(),
            });
        }
        Ok((0..self.order)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }
}
