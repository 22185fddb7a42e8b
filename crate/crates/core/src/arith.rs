//! Bernoulli numbers, divisor power sums and the dimension count of the
//! level-one spaces.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

// B_0, B_1, ... with B_1 = -1/2, filled on demand.
static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// The Bernoulli number `B_n` for even `n`.
///
/// Odd indices are rejected: nothing downstream consumes them and
/// `B_1 = -1/2` is only a convention of the recurrence.
pub fn bernoulli(n: u32) -> Result<Rational> {
    if n % 2 == 1 {
        return Err(Error::domain(format!(
            "Bernoulli number of odd index {n} requested"
        )));
    }
    let n = n as usize;
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        let b = next_bernoulli(&cache, m);
        cache.push(b);
    }
    Ok(cache[n].clone())
}

// Solves sum_{j=0}^{m} C(m+1, j) B_j = 0 for B_m given B_0..B_{m-1}.
fn next_bernoulli(prev: &[Rational], m: usize) -> Rational {
    if m == 0 {
        return Rational::one();
    }
    if m > 1 && m % 2 == 1 {
        return Rational::zero();
    }
    let mut binom = BigInt::one();
    let mut acc = Rational::zero();
    for (j, b) in prev.iter().enumerate() {
        if !b.is_zero() {
            acc += b * Rational::from_integer(binom.clone());
        }
        // C(m+1, j+1) from C(m+1, j)
        binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
    }
    -acc / Rational::from_integer(BigInt::from(m + 1))
}

/// `sum_{d | m} d^r` for `m >= 1`.
pub fn divisor_power_sum(r: u32, m: u64) -> BigInt {
    debug_assert!(m >= 1);
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            total += BigInt::from(d).pow(r);
            let e = m / d;
            if e != d {
                total += BigInt::from(e).pow(r);
            }
        }
        d += 1;
    }
    total
}

/// The divisor function `sigma_r(m)`, extended to `m = 0` by
/// `sigma_{2n-1}(0) = -B_{2n}/(4n)`.
///
/// `r` must be odd. At `m = 0` it must also be at least 3, since `r = 1`
/// would be the constant term of the quasi-modular `G_2`.
pub fn sigma(r: u32, m: u64) -> Result<Rational> {
    if r.is_multiple_of(2) {
        return Err(Error::domain(format!("sigma_r needs odd r, got {r}")));
    }
    if m >= 1 {
        return Ok(Rational::from_integer(divisor_power_sum(r, m)));
    }
    if r < 3 {
        return Err(Error::domain(
            "sigma_1(0) would define G_2, which is not modular",
        ));
    }
    let w = r + 1;
    Ok(-bernoulli(w)? / integer(2 * w))
}

/// Dimension bookkeeping for `M_{2k}` and `S_{2k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionData {
    pub weight: u32,
    /// `dim S_{2k}`.
    pub d_k: usize,
    /// `dim M_{2k} = d_k + 1`.
    pub dim_m: usize,
}

pub(crate) fn check_weight(weight: u32) -> Result<()> {
    if weight < 4 || weight % 2 == 1 {
        Err(Error::domain(format!(
            "weight must be even and at least 4, got {weight}"
        )))
    } else {
        Ok(())
    }
}

pub fn dimension_data(weight: u32) -> Result<DimensionData> {
    check_weight(weight)?;
    let k = weight / 2;
    let d_k = if weight % 12 == 2 { k / 6 - 1 } else { k / 6 } as usize;
    Ok(DimensionData {
        weight,
        d_k,
        dim_m: d_k + 1,
    })
}

/// `dim M_w` by the standard level-one formula. Kept separate from
/// [`dimension_data`] so each can check the other.
pub fn dimension_oracle(weight: u32) -> Result<usize> {
    check_weight(weight)?;
    let base = (weight / 12) as usize;
    Ok(if weight % 12 == 2 { base } else { base + 1 })
}
