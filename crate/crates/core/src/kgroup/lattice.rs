//! Integer vectors and matrices: the invariant lattices the groups live in.

use serde::Serialize;

/// Row-style Hermite normal form of the lattice spanned by `vectors` in `ℤ^dim`.
/// Pivots are positive, entries above a pivot are reduced into `[0, pivot)`, and
/// zero rows are dropped, so the result is a canonical basis.
pub fn hermite_basis(vectors: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..dim {
        loop {
            let best = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let p = rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                let q = rows[r][col] / p;
                if q != 0 {
                    for c in 0..dim {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && rows[pivot_row][col] != 0 {
            if rows[pivot_row][col] < 0 {
                rows[pivot_row].iter_mut().for_each(|x| *x = -*x);
            }
            let p = rows[pivot_row][col];
            for r in 0..pivot_row {
                let q = rows[r][col].div_euclid(p);
                if q != 0 {
                    for c in 0..dim {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                }
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Integer matrix acting on column vectors of invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Vec<i64>>) -> Self {
        assert!(entries.len() == rows && entries.iter().all(|r| r.len() == cols));
        Self { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![vec![0; cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = 1;
        }
        m
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let entries = (0..self.rows)
            .map(|i| {
                (0..rhs.cols)
                    .map(|j| (0..self.cols).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix::new(self.rows, rhs.cols, entries)
    }

    pub fn rank(&self) -> usize {
        hermite_basis(&self.entries, self.cols).len()
    }

    /// Rank of the kernel in `ℤ^cols`.
    pub fn kernel_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Rows stacked below each other; both operands act on the same space.
    pub fn stack(&self, below: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, below.cols);
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        IntMatrix::new(self.rows + below.rows, self.cols, entries)
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
