//! Truncated q-expansions with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::{Error, Result};

/// `a_0 + a_1 q + ... + a_{N-1} q^{N-1} + O(q^N)` tagged with a weight.
///
/// The weight is metadata: it is never inferred from the coefficients, but
/// it is checked on addition and summed on multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    weight: u32,
    coeffs: Vec<Rational>,
}

fn check_tag(weight: u32) -> Result<()> {
    if weight < 4 || weight % 2 == 1 {
        return Err(Error::domain(format!(
            "series weight must be even and at least 4, got {weight}"
        )));
    }
    Ok(())
}

impl QSeries {
    pub fn new(weight: u32, coeffs: Vec<Rational>) -> Result<Self> {
        check_tag(weight)?;
        if coeffs.is_empty() {
            return Err(Error::domain("series precision must be positive"));
        }
        Ok(QSeries { weight, coeffs })
    }

    pub fn zero(weight: u32, precision: usize) -> Result<Self> {
        Self::new(weight, vec![Rational::zero(); precision])
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Number of known coefficients `N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops every coefficient from `a_precision` on.
    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision == 0 || precision > self.precision() {
            return Err(Error::domain(format!(
                "cannot truncate a series of precision {} to {precision}",
                self.precision()
            )));
        }
        Ok(QSeries {
            weight: self.weight,
            coeffs: self.coeffs[..precision].to_vec(),
        })
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        if self.weight != other.weight {
            return Err(Error::domain(format!(
                "cannot add series of weights {} and {}",
                self.weight, other.weight
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QSeries {
            weight: self.weight,
            coeffs,
        })
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product, truncated to the smaller precision.
    ///
    /// Both operands are brought to a common denominator first so the
    /// convolution itself runs over integers.
    pub fn multiply(&self, other: &QSeries) -> QSeries {
        let n = self.precision().min(other.precision());
        let (a, da) = integer_form(&self.coeffs[..n]);
        let (b, db) = integer_form(&other.coeffs[..n]);
        let denom = da * db;
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = BigInt::zero();
                for l in 0..=k {
                    if !a[l].is_zero() && !b[k - l].is_zero() {
                        acc += &a[l] * &b[k - l];
                    }
                }
                Rational::new(acc, denom.clone())
            })
            .collect();
        QSeries {
            weight: self.weight + other.weight,
            coeffs,
        }
    }

    /// Whether the first `n` coefficients agree exactly.
    pub fn equals_to_precision(&self, other: &QSeries, n: usize) -> Result<bool> {
        if n == 0 || n > self.precision() || n > other.precision() {
            return Err(Error::domain(format!(
                "cannot compare {n} coefficients of series with precisions {} and {}",
                self.precision(),
                other.precision()
            )));
        }
        Ok(self.coeffs[..n] == other.coeffs[..n])
    }
}

// Numerators over the lcm of the denominators.
fn integer_form(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    (nums, l)
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*q")?,
                _ => write!(f, "({a})*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.precision())
    }
}
