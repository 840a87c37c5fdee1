//! Dense linear algebra over cyclotomic scalars and over rationals.
//!
//! Everything here is exact; sizes are tiny (matrix dimension is the rank,
//! at most 8 for the E family and a few dozen for long A chains), so plain
//! Gaussian elimination with first-nonzero pivoting is enough.

use num_traits::Zero;

use crate::cyclo::CycloNum;
use crate::error::{CoreError, Result};
use crate::rational::Rational;

/// Square matrix over Q(zeta_n), row major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    order: u32,
    n: usize,
    rows: Vec<Vec<CycloNum>>,
}

impl CMatrix {
    pub fn from_rows(order: u32, rows: Vec<Vec<CycloNum>>) -> Result<CMatrix> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(CoreError::BadInput("matrix must be square".into()));
            }
            for x in r {
                if x.order() != order {
                    return Err(CoreError::OrderMismatch(order, x.order()));
                }
            }
        }
        Ok(CMatrix { order, n, rows })
    }

    pub fn identity(order: u32, n: usize) -> CMatrix {
        let mut rows = vec![vec![CycloNum::zero(order); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = CycloNum::one(order);
        }
        CMatrix { order, n, rows }
    }

    pub fn zero(order: u32, n: usize) -> CMatrix {
        CMatrix {
            order,
            n,
            rows: vec![vec![CycloNum::zero(order); n]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> &[Vec<CycloNum>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.rows[i][j] = v;
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        CMatrix {
            order: self.order,
            n: self.n,
            rows,
        }
    }

    pub fn scale(&self, s: &CycloNum) -> CMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * s).collect())
            .collect();
        CMatrix {
            order: self.order,
            n: self.n,
            rows,
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let mut out = CMatrix::zero(self.order, self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = &other.rows[k][j];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    out.rows[i][j] = &out.rows[i][j] + &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        assert_eq!(v.len(), self.n);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = CycloNum::zero(self.order);
                for (a, x) in row.iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> CycloNum {
        let mut acc = CycloNum::zero(self.order);
        for i in 0..self.n {
            acc = &acc + &self.rows[i][i];
        }
        acc
    }

    /// Gaussian inverse; fails on singular input.
    pub fn invert(&self) -> Result<CMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = CMatrix::identity(self.order, n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| CoreError::Invariant("singular matrix".into()))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let pinv = a[col][col].inverse()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &pinv;
                inv[col][j] = &inv[col][j] * &pinv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = &factor * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &factor * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
        CMatrix::from_rows(self.order, inv)
    }

    pub fn pow(&self, e: u32) -> CMatrix {
        let mut acc = CMatrix::identity(self.order, self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Solves a (n x n) x = b over the rationals; None when singular.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let pinv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &pinv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in col..=n {
                let t = &factor * &m[col][j];
                m[r][j] = &m[r][j] - &t;
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Rational matrix inverse; None when singular.
pub fn invert_rational(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::from_integer(1.into());
        cols.push(solve_rational(a, &e)?);
    }
    // cols[j] is the j-th column of the inverse
    let mut inv = vec![vec![Rational::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            inv[i][j] = v.clone();
        }
    }
    Some(inv)
}
