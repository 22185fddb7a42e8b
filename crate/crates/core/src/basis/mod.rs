//! The Eisenstein-product bases of `M_{2k}` and `S_{2k}`, the classical
//! `G_4^a G_6^b` basis, and exact independence and change-of-basis checks.
//!
//! Forms are compared through their leading q-coefficients. A form of weight
//! `w` whose coefficients `a_0..a_{dim M_w - 1}` vanish is zero, so the
//! pairing "element against coefficient index" is non-degenerate on `M_w`
//! and a nonzero determinant of the leading coefficient block certifies a
//! basis.

mod matrix;

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

pub use matrix::RatMatrix;

use crate::arith::{bernoulli, dimension_data, integer, Rational};
use crate::eisenstein::{eisenstein, eisenstein_monomial, eisenstein_product};
use crate::qseries::QSeries;
use crate::{Error, Result};

/// Symbolic name of a basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    /// `G_w`.
    Single(u32),
    /// `G_u * G_v`.
    Product(u32, u32),
    /// `G_u * G_v + c * G_{u+v}`.
    CuspCombo { u: u32, v: u32, c: Rational },
    /// `G_4^alpha * G_6^beta`.
    Monomial { alpha: u32, beta: u32 },
}

impl Descriptor {
    pub fn weight(&self) -> u32 {
        match *self {
            Descriptor::Single(w) => w,
            Descriptor::Product(u, v) | Descriptor::CuspCombo { u, v, .. } => u + v,
            Descriptor::Monomial { alpha, beta } => 4 * alpha + 6 * beta,
        }
    }

    /// The correction constant of a cusp combination.
    pub fn correction(&self) -> Option<&Rational> {
        match self {
            Descriptor::CuspCombo { c, .. } => Some(c),
            _ => None,
        }
    }

    pub fn realize(&self, precision: usize) -> Result<QSeries> {
        match self {
            Descriptor::Single(w) => eisenstein(*w, precision),
            Descriptor::Product(u, v) => eisenstein_product(*u, *v, precision),
            Descriptor::CuspCombo { u, v, c } => {
                let g = eisenstein(u + v, precision)?;
                eisenstein_product(*u, *v, precision)?.add(&g.scale(c))
            }
            Descriptor::Monomial { alpha, beta } => eisenstein_monomial(*alpha, *beta, precision),
        }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, base: u32, exp: u32) -> fmt::Result {
    match exp {
        1 => write!(f, "G_{base}"),
        _ => write!(f, "G_{base}^{exp}"),
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Single(w) => write!(f, "G_{w}"),
            Descriptor::Product(u, v) => write!(f, "G_{u}*G_{v}"),
            Descriptor::CuspCombo { u, v, c } => {
                let sign = if c.is_negative() { '-' } else { '+' };
                write!(f, "G_{u}*G_{v} {sign} {}*G_{}", c.abs(), u + v)
            }
            Descriptor::Monomial { alpha, beta } => {
                if *alpha > 0 {
                    write_power(f, 4, *alpha)?;
                }
                if *alpha > 0 && *beta > 0 {
                    f.write_str("*")?;
                }
                if *beta > 0 {
                    write_power(f, 6, *beta)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub descriptor: Descriptor,
    pub series: QSeries,
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.descriptor.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `{G_{2k}} + {G_a G_b}` for `M_{2k}`.
    NewM,
    /// Cusp combinations spanning `S_{2k}`.
    NewS,
    /// `{G_4^a G_6^b}` for `M_{2k}`.
    ClassicalM,
}

impl BasisKind {
    pub const ALL: [BasisKind; 3] = [BasisKind::NewM, BasisKind::NewS, BasisKind::ClassicalM];

    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::NewM => "new-m",
            BasisKind::NewS => "new-s",
            BasisKind::ClassicalM => "classical",
        }
    }

    pub fn is_cuspidal(self) -> bool {
        self == BasisKind::NewS
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "new-m" => Ok(BasisKind::NewM),
            "new-s" => Ok(BasisKind::NewS),
            "classical" => Ok(BasisKind::ClassicalM),
            _ => Err(Error::domain(format!("unknown basis kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    weight: u32,
    kind: BasisKind,
    precision: usize,
    elements: Vec<BasisElement>,
}

impl Basis {
    /// Builds the basis of the given kind with every element expanded to
    /// `precision` coefficients.
    pub fn build(weight: u32, kind: BasisKind, precision: usize) -> Result<Self> {
        let dims = dimension_data(weight)?;
        if precision < dims.d_k + 2 {
            return Err(Error::domain(format!(
                "precision {precision} too small for weight {weight}; need at least {}",
                dims.d_k + 2
            )));
        }
        let descriptors = match kind {
            BasisKind::NewM => new_basis_descriptors(weight)?,
            BasisKind::NewS => cusp_descriptors(weight)?,
            BasisKind::ClassicalM => return Self::classical(weight, precision),
        };
        Self::from_descriptors(weight, kind, precision, descriptors)
    }

    // Monomials share their powers of G_4 and G_6.
    fn classical(weight: u32, precision: usize) -> Result<Self> {
        let exponents = classical_exponents(weight)?;
        let powers = |w: u32, top: u32| -> Result<Vec<Option<QSeries>>> {
            let g = eisenstein(w, precision)?;
            let mut out = vec![None, Some(g.clone())];
            for e in 2..=top as usize {
                let next = out[e - 1].as_ref().expect("filled").multiply(&g);
                out.push(Some(next));
            }
            Ok(out)
        };
        let p4 = powers(4, exponents.iter().map(|e| e.0).max().unwrap_or(0))?;
        let p6 = powers(6, exponents.iter().map(|e| e.1).max().unwrap_or(0))?;
        let elements = exponents
            .into_iter()
            .map(|(alpha, beta)| {
                let series = match (
                    &p4[alpha as usize],
                    p6.get(beta as usize).and_then(Option::as_ref),
                ) {
                    (Some(a), Some(b)) => a.multiply(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!("weight is at least 4"),
                };
                BasisElement {
                    descriptor: Descriptor::Monomial { alpha, beta },
                    series,
                }
            })
            .collect();
        Ok(Basis {
            weight,
            kind: BasisKind::ClassicalM,
            precision,
            elements,
        })
    }

    /// Realizes arbitrary descriptors; used for the named constructors and to
    /// build deliberately broken bases in tests.
    pub fn from_descriptors(
        weight: u32,
        kind: BasisKind,
        precision: usize,
        descriptors: Vec<Descriptor>,
    ) -> Result<Self> {
        let elements = descriptors
            .into_iter()
            .map(|descriptor| {
                if descriptor.weight() != weight {
                    return Err(Error::domain(format!(
                        "{descriptor} has weight {}, expected {weight}",
                        descriptor.weight()
                    )));
                }
                let series = descriptor.realize(precision)?;
                Ok(BasisElement { descriptor, series })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Basis {
            weight,
            kind,
            precision,
            elements,
        })
    }

    /// Same descriptors re-expanded to a different precision.
    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        let descriptors = self.elements.iter().map(|e| e.descriptor.clone()).collect();
        Self::from_descriptors(self.weight, self.kind, precision, descriptors)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `sum_i x_i * element_i`.
    pub fn combine(&self, coords: &[Rational]) -> Result<QSeries> {
        if coords.len() != self.len() {
            return Err(Error::domain(format!(
                "{} coordinates for a basis of {} elements",
                coords.len(),
                self.len()
            )));
        }
        self.elements.iter().zip(coords).try_fold(
            QSeries::zero(self.weight, self.precision)?,
            |acc, (e, x)| acc.add(&e.series.scale(x)),
        )
    }

    /// Coefficient indices on which the basis is solved: `a_0..a_{d_k}` for
    /// the spaces `M_{2k}`, `a_1..a_{d_k}` for `S_{2k}`.
    fn solve_window(&self) -> std::ops::Range<usize> {
        let d_k = dimension_data(self.weight).map(|d| d.d_k).unwrap_or(0);
        if self.kind.is_cuspidal() {
            1..d_k + 1
        } else {
            0..d_k + 1
        }
    }
}

/// Default expansion length: enough for the solve window plus a
/// verification margin.
pub fn default_precision(weight: u32) -> Result<usize> {
    let d_k = dimension_data(weight)?.d_k;
    Ok((d_k + 10).max(16))
}

/// Factor weights `(a, b)`, `a + b = 2k`, for `i = 1..=d_k`:
/// `(4i, 2k - 4i)` when `4 | 2k`, else `(4i + 2, 2k - 4i - 2)`.
pub fn factor_pairs(weight: u32) -> Result<Vec<(u32, u32)>> {
    let d_k = dimension_data(weight)?.d_k as u32;
    let shift = if weight.is_multiple_of(4) { 0 } else { 2 };
    Ok((1..=d_k)
        .map(|i| (4 * i + shift, weight - 4 * i - shift))
        .collect())
}

pub fn new_basis_descriptors(weight: u32) -> Result<Vec<Descriptor>> {
    let pairs = factor_pairs(weight)?;
    Ok(std::iter::once(Descriptor::Single(weight))
        .chain(pairs.into_iter().map(|(u, v)| Descriptor::Product(u, v)))
        .collect())
}

/// `c = (B_a / a) (B_b / b) (k / B_{2k})`, the multiple of `G_{2k}` that
/// cancels the constant term of `G_a G_b`.
pub fn cusp_correction(a: u32, b: u32) -> Result<Rational> {
    let w = a + b;
    let ba = bernoulli(a)? / integer(a);
    let bb = bernoulli(b)? / integer(b);
    Ok(ba * bb * integer(w / 2) / bernoulli(w)?)
}

pub fn cusp_descriptors(weight: u32) -> Result<Vec<Descriptor>> {
    factor_pairs(weight)?
        .into_iter()
        .map(|(u, v)| {
            Ok(Descriptor::CuspCombo {
                u,
                v,
                c: cusp_correction(u, v)?,
            })
        })
        .collect()
}

/// All `(alpha, beta)` with `4 alpha + 6 beta = weight`, alpha descending.
pub fn classical_exponents(weight: u32) -> Result<Vec<(u32, u32)>> {
    dimension_data(weight)?;
    Ok((0..=weight / 4)
        .rev()
        .filter(|a| (weight - 4 * a).is_multiple_of(6))
        .map(|a| (a, (weight - 4 * a) / 6))
        .collect())
}

pub fn new_basis(weight: u32, precision: usize) -> Result<Basis> {
    Basis::build(weight, BasisKind::NewM, precision)
}

pub fn cusp_basis(weight: u32, precision: usize) -> Result<Basis> {
    Basis::build(weight, BasisKind::NewS, precision)
}

pub fn classical_basis(weight: u32, precision: usize) -> Result<Basis> {
    Basis::build(weight, BasisKind::ClassicalM, precision)
}

/// Rows are basis elements, columns are `a_0..a_{n-1}`.
pub fn coefficient_matrix(basis: &Basis, n: usize) -> Result<RatMatrix> {
    coefficient_block(basis, 0..n)
}

fn coefficient_block(basis: &Basis, cols: std::ops::Range<usize>) -> Result<RatMatrix> {
    if cols.end == 0 {
        return Err(Error::domain(
            "coefficient matrix needs at least one column",
        ));
    }
    coefficient_columns(basis, &cols.collect::<Vec<_>>())
}

fn coefficient_columns(basis: &Basis, cols: &[usize]) -> Result<RatMatrix> {
    if let Some(&j) = cols.iter().find(|&&j| j >= basis.precision) {
        return Err(Error::domain(format!(
            "coefficient a_{j} requested from a basis known to precision {}",
            basis.precision
        )));
    }
    let entries = basis
        .elements
        .iter()
        .flat_map(|e| cols.iter().map(|&j| e.series.coeff(j).clone()))
        .collect();
    RatMatrix::new(basis.len(), cols.len(), entries)
}

pub fn determinant(m: &RatMatrix) -> Result<Rational> {
    m.determinant()
}

/// Outcome of checking that a basis really is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub weight: u32,
    pub kind: BasisKind,
    pub element_count: usize,
    pub expected_count: usize,
    /// `None` when the element count is wrong and the block is not square.
    pub determinant: Option<Rational>,
    /// Whether every element has `a_0 = 0`; only checked for cusp bases.
    pub constant_terms_vanish: Option<bool>,
}

impl VerificationReport {
    pub fn count_matches(&self) -> bool {
        self.element_count == self.expected_count
    }

    pub fn determinant_nonzero(&self) -> bool {
        self.determinant.as_ref().is_some_and(|d| !d.is_zero())
    }

    pub fn confirmed(&self) -> bool {
        self.count_matches()
            && self.determinant_nonzero()
            && self.constant_terms_vanish != Some(false)
    }
}

pub fn verify_basis(weight: u32, kind: BasisKind) -> Result<VerificationReport> {
    let basis = Basis::build(weight, kind, default_precision(weight)?)?;
    verify_built(&basis)
}

/// Verifies an already constructed basis against the dimension of its space.
pub fn verify_built(basis: &Basis) -> Result<VerificationReport> {
    let dims = dimension_data(basis.weight)?;
    let expected_count = if basis.kind.is_cuspidal() {
        dims.d_k
    } else {
        dims.dim_m
    };
    let window = basis.solve_window();
    let determinant = if basis.len() == window.len() {
        Some(coefficient_block(basis, window)?.determinant()?)
    } else {
        None
    };
    let constant_terms_vanish = basis
        .kind
        .is_cuspidal()
        .then(|| basis.elements.iter().all(|e| e.series.coeff(0).is_zero()));
    Ok(VerificationReport {
        weight: basis.weight,
        kind: basis.kind,
        element_count: basis.len(),
        expected_count,
        determinant,
        constant_terms_vanish,
    })
}

/// Minimum target precision accepted by [`express`]: the `d_k + 1` solve
/// coefficients plus `d_k + 9` verified ones.
pub fn express_precision(weight: u32) -> Result<usize> {
    Ok(2 * dimension_data(weight)?.dim_m + 8)
}

/// Coordinates of `target` in `basis`, checked on every available
/// coefficient of `target`.
pub fn express(target: &QSeries, basis: &Basis) -> Result<Vec<Rational>> {
    if target.weight() != basis.weight {
        return Err(Error::domain(format!(
            "target has weight {}, basis has weight {}",
            target.weight(),
            basis.weight
        )));
    }
    let needed = express_precision(basis.weight)?;
    if target.precision() < needed {
        return Err(Error::domain(format!(
            "target precision {} below the required {needed}",
            target.precision()
        )));
    }
    let basis = basis.with_precision(target.precision())?;
    let window = basis.solve_window();
    if window.len() != basis.len() {
        return Err(Error::domain(format!(
            "basis has {} elements but its space has dimension {}",
            basis.len(),
            window.len()
        )));
    }
    let indices: Vec<usize> = window.clone().collect();
    let coords = solve_on(&basis, target, &indices)?;
    let rebuilt = basis.combine(&coords)?;
    let Some(first) = first_mismatch(target, &rebuilt, None) else {
        return Ok(coords);
    };

    // A coefficient inside the solve window is absorbed by the solve and only
    // shows up as mismatches further along. If leaving one window
    // coefficient out (and taking the next one instead) explains the whole
    // target, report that coefficient.
    for skip in window.clone() {
        let alt: Vec<usize> = (window.start..=window.end).filter(|&j| j != skip).collect();
        let Ok(x) = solve_on(&basis, target, &alt) else {
            continue;
        };
        let r = basis.combine(&x)?;
        if first_mismatch(target, &r, Some(skip)).is_none() {
            return Err(inconsistency(target, &r, skip));
        }
    }
    Err(inconsistency(target, &rebuilt, first))
}

fn solve_on(basis: &Basis, target: &QSeries, indices: &[usize]) -> Result<Vec<Rational>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let system = coefficient_columns(basis, indices)?.transpose();
    let rhs: Vec<Rational> = indices.iter().map(|&j| target.coeff(j).clone()).collect();
    system.solve(&rhs)
}

fn first_mismatch(a: &QSeries, b: &QSeries, skip: Option<usize>) -> Option<usize> {
    (0..a.precision()).find(|&i| Some(i) != skip && a.coeff(i) != b.coeff(i))
}

fn inconsistency(target: &QSeries, rebuilt: &QSeries, index: usize) -> Error {
    Error::Inconsistent {
        index,
        expected: target.coeff(index).to_string(),
        actual: rebuilt.coeff(index).to_string(),
    }
}
