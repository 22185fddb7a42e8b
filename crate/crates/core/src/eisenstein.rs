//! q-expansions of the Eisenstein series `G_{2n}` and their products.
//!
//! Normalization: `G_{2n} = -B_{2n}/(4n) + sum_{m>=1} sigma_{2n-1}(m) q^m`,
//! so `a_1 = 1`. No other normalization is used anywhere in the crate.

use crate::arith::{check_weight, divisor_power_sum, sigma, Rational};
use crate::qseries::QSeries;
use crate::{Error, Result};

/// Weight of a holomorphic level-one Eisenstein series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EisensteinSpec(u32);

impl EisensteinSpec {
    pub fn new(weight: u32) -> Result<Self> {
        check_weight(weight)?;
        Ok(EisensteinSpec(weight))
    }

    pub fn weight(self) -> u32 {
        self.0
    }

    /// `-B_w / (2w)`.
    pub fn constant_term(self) -> Rational {
        sigma(self.0 - 1, 0).expect("weight validated")
    }

    pub fn expansion(self, precision: usize) -> Result<QSeries> {
        if precision == 0 {
            return Err(Error::domain("precision must be positive"));
        }
        let r = self.0 - 1;
        let mut coeffs = Vec::with_capacity(precision);
        coeffs.push(self.constant_term());
        coeffs
            .extend((1..precision as u64).map(|m| Rational::from_integer(divisor_power_sum(r, m))));
        QSeries::new(self.0, coeffs)
    }
}

pub fn eisenstein(weight: u32, precision: usize) -> Result<QSeries> {
    EisensteinSpec::new(weight)?.expansion(precision)
}

/// `G_u * G_v`; coefficient `n` is `sum_{l=0}^{n} sigma_{u-1}(l) sigma_{v-1}(n-l)`.
pub fn eisenstein_product(u: u32, v: u32, precision: usize) -> Result<QSeries> {
    let a = eisenstein(u, precision)?;
    let b = eisenstein(v, precision)?;
    Ok(a.multiply(&b))
}

/// `G_4^alpha * G_6^beta`, with the empty product giving an error since
/// weight 0 is not representable.
pub fn eisenstein_monomial(alpha: u32, beta: u32, precision: usize) -> Result<QSeries> {
    let mut factors = std::iter::repeat_n(4, alpha as usize)
        .chain(std::iter::repeat_n(6, beta as usize))
        .map(|w| eisenstein(w, precision));
    let first = factors
        .next()
        .ok_or_else(|| Error::domain("empty monomial G_4^0 G_6^0"))??;
    factors.try_fold(first, |acc, g| Ok(acc.multiply(&g?)))
}
