//! Command-line front end and the JSON/CSV/text serializations it uses.
//!
//! Exit codes: 0 success, 1 verification or consistency failure, 2 usage or
//! input error. Rationals are always written as canonical strings
//! (`"p"` or `"p/q"`, lowest terms, `q > 1`, optional leading `-`).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{dimension_data, Rational};
use crate::basis::{
    default_precision, express, verify_built, Basis, BasisKind, Descriptor, VerificationReport,
};
use crate::qseries::QSeries;
use crate::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Canonical string form of a rational.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses a canonical rational string; anything that would not be printed
/// back identically (`"+1"`, `"2/4"`, `"3/1"`, `"-0"`) is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let r: Rational = s
        .parse()
        .map_err(|e| Error::domain(format!("invalid rational {s:?}: {e}")))?;
    if r.to_string() != s {
        return Err(Error::domain(format!(
            "rational {s:?} is not in canonical form (expected {r:?})",
            r = r.to_string()
        )));
    }
    Ok(r)
}

fn format_all(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(format_rational).collect()
}

fn parse_all(ss: &[String]) -> Result<Vec<Rational>, Error> {
    ss.iter().map(|s| parse_rational(s)).collect()
}

/// `{"weight": w, "precision": N, "coefficients": ["a_0", ..., "a_{N-1}"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDocument {
    pub weight: u32,
    pub precision: usize,
    pub coefficients: Vec<String>,
}

impl SeriesDocument {
    pub fn from_series(series: &QSeries) -> Self {
        SeriesDocument {
            weight: series.weight(),
            precision: series.precision(),
            coefficients: format_all(series.coeffs()),
        }
    }

    pub fn to_series(&self) -> Result<QSeries, Error> {
        if self.coefficients.len() != self.precision {
            return Err(Error::domain(format!(
                "precision is {} but {} coefficients are given",
                self.precision,
                self.coefficients.len()
            )));
        }
        QSeries::new(self.weight, parse_all(&self.coefficients)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DescriptorDocument {
    Single { weight: u32 },
    Product { u: u32, v: u32 },
    CuspCombo { u: u32, v: u32, c: String },
    Monomial { alpha: u32, beta: u32 },
}

impl From<&Descriptor> for DescriptorDocument {
    fn from(d: &Descriptor) -> Self {
        match d {
            Descriptor::Single(weight) => DescriptorDocument::Single { weight: *weight },
            Descriptor::Product(u, v) => DescriptorDocument::Product { u: *u, v: *v },
            Descriptor::CuspCombo { u, v, c } => DescriptorDocument::CuspCombo {
                u: *u,
                v: *v,
                c: format_rational(c),
            },
            Descriptor::Monomial { alpha, beta } => DescriptorDocument::Monomial {
                alpha: *alpha,
                beta: *beta,
            },
        }
    }
}

impl DescriptorDocument {
    pub fn to_descriptor(&self) -> Result<Descriptor, Error> {
        Ok(match self {
            DescriptorDocument::Single { weight } => Descriptor::Single(*weight),
            DescriptorDocument::Product { u, v } => Descriptor::Product(*u, *v),
            DescriptorDocument::CuspCombo { u, v, c } => Descriptor::CuspCombo {
                u: *u,
                v: *v,
                c: parse_rational(c)?,
            },
            DescriptorDocument::Monomial { alpha, beta } => Descriptor::Monomial {
                alpha: *alpha,
                beta: *beta,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDocument {
    /// Human-readable form, e.g. `G_4*G_32 - 1479.../2863...*G_36`.
    pub label: String,
    pub descriptor: DescriptorDocument,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub weight: u32,
    pub kind: String,
    pub precision: usize,
    pub elements: Vec<ElementDocument>,
}

impl From<&Basis> for BasisDocument {
    fn from(b: &Basis) -> Self {
        BasisDocument {
            weight: b.weight(),
            kind: b.kind().to_string(),
            precision: b.precision(),
            elements: b
                .elements()
                .iter()
                .map(|e| ElementDocument {
                    label: e.to_string(),
                    descriptor: (&e.descriptor).into(),
                    coefficients: format_all(e.series.coeffs()),
                })
                .collect(),
        }
    }
}

impl BasisDocument {
    /// Rebuilds the basis from its descriptors and checks the stored
    /// coefficients against the recomputed ones.
    pub fn to_basis(&self) -> Result<Basis, Error> {
        let kind = self.kind.parse()?;
        let descriptors = self
            .elements
            .iter()
            .map(|e| e.descriptor.to_descriptor())
            .collect::<Result<Vec<_>, _>>()?;
        let basis = Basis::from_descriptors(self.weight, kind, self.precision, descriptors)?;
        for (doc, e) in self.elements.iter().zip(basis.elements()) {
            if parse_all(&doc.coefficients)? != e.series.coeffs() {
                return Err(Error::domain(format!(
                    "stored coefficients of {} disagree with its descriptor",
                    doc.label
                )));
            }
        }
        Ok(basis)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "eisenbasis",
    version,
    about = "Exact Eisenstein-product bases for level-one modular forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print d_k = dim S_w and dim M_w.
    Dims(DimsArgs),
    /// Print a basis with its q-expansions.
    Basis(BasisArgs),
    /// Check that every basis is one, for all even weights up to a bound.
    Verify(VerifyArgs),
    /// Express a q-expansion in a basis.
    Express(ExpressArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WeightSelection {
    #[arg(long)]
    weight: Option<u32>,
    /// All even weights from 4 up to this bound.
    #[arg(long)]
    max_weight: Option<u32>,
}

#[derive(Args, Debug)]
struct DimsArgs {
    #[command(flatten)]
    weights: WeightSelection,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    NewM,
    NewS,
    Classical,
}

impl From<Kind> for BasisKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::NewM => BasisKind::NewM,
            Kind::NewS => BasisKind::NewS,
            Kind::Classical => BasisKind::ClassicalM,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BasisFormat {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct BasisArgs {
    #[arg(long)]
    weight: u32,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of q-coefficients; defaults to max(d_k + 10, 16).
    #[arg(long)]
    prec: Option<usize>,
    #[arg(long, value_enum, default_value_t = BasisFormat::Text)]
    format: BasisFormat,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max_weight: u32,
    /// Replace the new M basis at this weight by a dependent set.
    #[arg(long, hide = true)]
    inject_fault: Option<u32>,
}

#[derive(Args, Debug)]
struct ExpressArgs {
    #[arg(long)]
    weight: u32,
    #[arg(long, value_enum)]
    kind: Kind,
    /// SeriesDocument JSON file.
    #[arg(long)]
    input: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn check(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }

    fn io(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: format!("write failed: {e}"),
        }
    }
}

type CmdResult = Result<u8, Failure>;

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Dims(a) => cmd_dims(&a, out),
        Command::Basis(a) => cmd_basis(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Express(a) => cmd_express(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn even_weights(bound: u32) -> Result<Vec<u32>, Failure> {
    dimension_data(bound).map_err(Failure::usage)?;
    Ok((4..=bound).step_by(2).collect())
}

#[derive(Serialize)]
struct DimsRow {
    weight: u32,
    d_k: usize,
    dim_m: usize,
}

fn cmd_dims(a: &DimsArgs, out: &mut dyn Write) -> CmdResult {
    let weights = match (a.weights.weight, a.weights.max_weight) {
        (Some(w), _) => vec![w],
        (None, Some(m)) => even_weights(m)?,
        (None, None) => unreachable!("clap enforces the group"),
    };
    let rows = weights
        .into_iter()
        .map(|w| {
            let d = dimension_data(w).map_err(Failure::usage)?;
            Ok(DimsRow {
                weight: w,
                d_k: d.d_k,
                dim_m: d.dim_m,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    match a.format {
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(Failure::check)?;
            writeln!(out).map_err(Failure::io)?;
        }
        TableFormat::Text => {
            writeln!(out, "{:>6} {:>5} {:>6}", "weight", "d_k", "dim_M").map_err(Failure::io)?;
            for r in rows {
                writeln!(out, "{:>6} {:>5} {:>6}", r.weight, r.d_k, r.dim_m)
                    .map_err(Failure::io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_basis(a: &BasisArgs, out: &mut dyn Write) -> CmdResult {
    let prec = match a.prec {
        Some(p) => p,
        None => default_precision(a.weight).map_err(Failure::usage)?,
    };
    let basis = Basis::build(a.weight, a.kind.into(), prec).map_err(Failure::usage)?;
    match a.format {
        BasisFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &BasisDocument::from(&basis))
                .map_err(Failure::check)?;
            writeln!(out).map_err(Failure::io)?;
        }
        BasisFormat::Csv => write_csv(&basis, out)?,
        BasisFormat::Text => {
            let space = if basis.kind().is_cuspidal() { 'S' } else { 'M' };
            writeln!(
                out,
                "{space}_{} {} basis, {} elements, precision {}",
                basis.weight(),
                basis.kind(),
                basis.len(),
                basis.precision()
            )
            .map_err(Failure::io)?;
            for e in basis.elements() {
                writeln!(out, "{e}\n    = {}", e.series).map_err(Failure::io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn write_csv(basis: &Basis, out: &mut dyn Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    let header = ["descriptor".to_string(), "c".to_string()]
        .into_iter()
        .chain((0..basis.precision()).map(|n| format!("a_{n}")));
    w.write_record(header).map_err(Failure::check)?;
    for e in basis.elements() {
        let (name, c) = match &e.descriptor {
            Descriptor::CuspCombo { u, v, c } => (format!("G_{u}*G_{v}"), format_rational(c)),
            d => (d.to_string(), String::new()),
        };
        let record = [name, c]
            .into_iter()
            .chain(e.series.coeffs().iter().map(format_rational));
        w.write_record(record).map_err(Failure::check)?;
    }
    w.flush().map_err(Failure::io)
}

fn verification_basis(weight: u32, kind: BasisKind, fault: Option<u32>) -> crate::Result<Basis> {
    let prec = default_precision(weight)?;
    let basis = Basis::build(weight, kind, prec)?;
    if kind != BasisKind::NewM || fault != Some(weight) {
        return Ok(basis);
    }
    // Duplicate the first element over the last one.
    let mut descriptors: Vec<Descriptor> = basis
        .elements()
        .iter()
        .map(|e| e.descriptor.clone())
        .collect();
    let first = descriptors[0].clone();
    if descriptors.len() > 1 {
        *descriptors.last_mut().unwrap() = first;
    } else {
        descriptors.push(first);
    }
    Basis::from_descriptors(weight, kind, prec, descriptors)
}

fn describe(r: &VerificationReport) -> String {
    let mut s = format!("{} {}/{}", r.kind, r.element_count, r.expected_count);
    if r.kind.is_cuspidal() && r.expected_count == 0 && r.element_count == 0 {
        s.push_str(" vacuous");
    } else if r.determinant.is_none() {
        s.push_str(" det n/a");
    } else if r.determinant_nonzero() {
        s.push_str(" det!=0");
    } else {
        s.push_str(" det=0");
    }
    match r.constant_terms_vanish {
        Some(true) => s.push_str(" a0=0"),
        Some(false) => s.push_str(" a0!=0"),
        None => {}
    }
    s.push_str(if r.confirmed() { " ok" } else { " FAIL" });
    s
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let weights = even_weights(a.max_weight)?;
    let reports: Vec<Vec<VerificationReport>> = weights
        .par_iter()
        .map(|&w| {
            BasisKind::ALL
                .iter()
                .map(|&kind| verify_built(&verification_basis(w, kind, a.inject_fault)?))
                .collect::<crate::Result<Vec<_>>>()
        })
        .collect::<crate::Result<_>>()
        .map_err(Failure::check)?;

    let mut failed = Vec::new();
    for (w, rs) in weights.iter().zip(&reports) {
        let ok = rs.iter().all(VerificationReport::confirmed);
        if !ok {
            failed.push(*w);
        }
        let parts: Vec<String> = rs.iter().map(describe).collect();
        writeln!(
            out,
            "weight {w}: {} | {}",
            parts.join(" | "),
            if ok { "PASS" } else { "FAIL" }
        )
        .map_err(Failure::io)?;
    }
    if failed.is_empty() {
        writeln!(out, "all {} weights pass", weights.len()).map_err(Failure::io)?;
        Ok(EXIT_OK)
    } else {
        let list: Vec<String> = failed.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "{} of {} weights FAIL: {}",
            failed.len(),
            weights.len(),
            list.join(", ")
        )
        .map_err(Failure::io)?;
        Ok(EXIT_FAILURE)
    }
}

fn cmd_express(a: &ExpressArgs, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", a.input.display())))?;
    let doc: SeriesDocument = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("malformed series document: {e}")))?;
    let target = doc.to_series().map_err(Failure::usage)?;
    if target.weight() != a.weight {
        return Err(Failure::usage(format!(
            "document has weight {}, --weight is {}",
            target.weight(),
            a.weight
        )));
    }
    let basis =
        Basis::build(a.weight, a.kind.into(), target.precision()).map_err(Failure::usage)?;
    let coords = match express(&target, &basis) {
        Ok(c) => c,
        Err(e @ Error::Domain(_)) => return Err(Failure::usage(e)),
        Err(e) => return Err(Failure::check(e)),
    };
    serde_json::to_writer(&mut *out, &format_all(&coords)).map_err(Failure::check)?;
    writeln!(out).map_err(Failure::io)?;
    Ok(EXIT_OK)
}
