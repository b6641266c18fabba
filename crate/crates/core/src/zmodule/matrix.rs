use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::lattice::{row_hnf, smith_form, Vector};

/// A dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.into();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows
                .iter()
                .flat_map(|r| r.iter().cloned().map(Into::into))
                .collect(),
        }
    }

    /// Builds an `n × k` matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Column-style Hermite normal form: the basis columns come first, lower
/// triangular with positive pivots and entries left of each pivot reduced
/// modulo it; the remaining columns are zero. The column span is unchanged.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let basis = row_hnf(a.columns(), a.nrows());
    let mut out = IntMatrix::zeros(a.nrows(), a.ncols());
    for (j, col) in basis.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            out[(i, j)] = x.clone();
        }
    }
    out
}

/// Elementary divisors and free rank of `ℤ^n / colspan(A)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SnfDivisors {
    /// `d_1 | d_2 | …`, one per unit of rank, including any 1s.
    pub divisors: Vec<BigInt>,
    pub free_rank: usize,
}

impl SnfDivisors {
    /// The nontrivial torsion divisors (those greater than one).
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.divisors.iter().filter(|d| **d > BigInt::from(1))
    }
}

pub fn snf_divisors(a: &IntMatrix) -> SnfDivisors {
    let n = a.nrows();
    let smith = smith_form(&a.columns(), n);
    SnfDivisors {
        free_rank: n - smith.diagonal.len(),
        divisors: smith.diagonal,
    }
}
