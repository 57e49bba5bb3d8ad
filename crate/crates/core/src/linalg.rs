//! Small exact linear algebra over the rationals: Gaussian elimination for
//! solving, rank, and inversion. Desk-scale sizes only.

use crate::error::{HopfError, Result};
use crate::ratio::Rat;
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rat>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![Rat::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = Rat::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<Rat>>) -> Self {
        let rows = data.len();
        let cols = data.first().map(|r| r.len()).unwrap_or(0);
        Matrix { rows, cols, data }
    }

    pub fn multiply(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, aik) in self.data[i].iter().enumerate() {
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.data[k][j].is_zero() {
                        out.data[i][j] += aik * &other.data[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { Rat::one() } else { Rat::zero() };
                if self.data[i][j] != want {
                    return false;
                }
            }
        }
        true
    }

    /// Row echelon rank (destructive on a copy).
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut rank = 0;
        let mut col = 0;
        while rank < self.rows && col < self.cols {
            let pivot = (rank..self.rows).find(|&r| !m[r][col].is_zero());
            match pivot {
                None => {
                    col += 1;
                }
                Some(p) => {
                    m.swap(rank, p);
                    let inv = Rat::one() / m[rank][col].clone();
                    for j in col..self.cols {
                        m[rank][j] = &m[rank][j] * &inv;
                    }
                    for r in 0..self.rows {
                        if r != rank && !m[r][col].is_zero() {
                            let factor = m[r][col].clone();
                            for j in col..self.cols {
                                let sub = &m[rank][j] * &factor;
                                m[r][j] -= sub;
                            }
                        }
                    }
                    rank += 1;
                    col += 1;
                }
            }
        }
        rank
    }
}

/// Solves A x = b for square A by Gauss-Jordan; errors if singular.
pub fn solve(a: &Matrix, b: &[Rat]) -> Result<Vec<Rat>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(HopfError::InvalidInput("solve needs a square system".into()));
    }
    let mut m = a.data.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or_else(|| {
            HopfError::InternalInconsistency("singular duality system".into())
        })?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = Rat::one() / m[col][col].clone();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..n {
                    let sub = &m[col][j] * &factor;
                    m[r][j] -= sub;
                }
                let sub = &rhs[col] * &factor;
                rhs[r] -= sub;
            }
        }
    }
    Ok(rhs)
}

/// LU-style reusable solver for repeated right-hand sides: precomputes the
/// Gauss-Jordan transform as an explicit inverse application.
pub struct Solver {
    n: usize,
    inverse: Matrix,
}

impl Solver {
    pub fn new(a: &Matrix) -> Result<Self> {
        let n = a.rows;
        if a.cols != n {
            return Err(HopfError::InvalidInput("solver needs a square matrix".into()));
        }
        // Gauss-Jordan inversion
        let mut m = a.data.clone();
        let mut inv = Matrix::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or_else(|| {
                HopfError::InternalInconsistency("singular duality system".into())
            })?;
            m.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = Rat::one() / m[col][col].clone();
            for j in 0..n {
                m[col][j] = &m[col][j] * &scale;
                inv[col][j] = &inv[col][j] * &scale;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for j in 0..n {
                        let sub = &m[col][j] * &factor;
                        m[r][j] -= sub;
                        let sub = &inv[col][j] * &factor;
                        inv[r][j] -= sub;
                    }
                }
            }
        }
        Ok(Solver { n, inverse: Matrix::from_rows(inv) })
    }

    pub fn solve(&self, b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.n];
        for (i, row) in self.inverse.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() && !b[j].is_zero() {
                    out[i] += v * &b[j];
                }
            }
        }
        out
    }
}
