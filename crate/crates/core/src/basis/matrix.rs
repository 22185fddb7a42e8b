//! Dense exact matrices: fraction-free determinant and rational solve.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::{Error, Result};

/// Row-major matrix of rationals. Zero-sized shapes are allowed so that an
/// empty basis still has a (vacuous) coefficient matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::domain("ragged rows"));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        RatMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Exact determinant by Bareiss elimination.
    ///
    /// Each row is first scaled by the lcm of its denominators so the
    /// elimination runs over integers, where every Bareiss division is exact.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::domain(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
                scale *= &l;
                row.iter().map(|a| a.numer() * (&l / a.denom())).collect()
            })
            .collect();

        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = t / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = if n == 0 { BigInt::one() } else { prev };
        let det = Rational::new(det, scale);
        Ok(if negate { -det } else { det })
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        if self.rows != self.cols || rhs.len() != self.rows {
            return Err(Error::domain(format!(
                "cannot solve a {}x{} system with {} right-hand entries",
                self.rows,
                self.cols,
                rhs.len()
            )));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(rhs[i].clone());
                r
            })
            .collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&r| !aug[r][k].is_zero())
                .ok_or_else(|| Error::Singular(format!("no pivot in column {k}")))?;
            aug.swap(k, p);
            let inv = aug[k][k].recip();
            for a in &mut aug[k][k..] {
                *a *= &inv;
            }
            let pivot_row = aug[k].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = row[k].clone();
                for (a, b) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                    *a -= &f * b;
                }
            }
        }
        Ok(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
