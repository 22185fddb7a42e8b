//! Exact construction and verification of Eisenstein-product bases for the
//! spaces of level-one modular forms `M_{2k}` and cusp forms `S_{2k}`.
//!
//! Every quantity is an exact rational. Forms are handled as truncated
//! q-expansions; independence and spanning are decided by exact
//! determinants and linear solves on their leading coefficients, which is
//! sound because a level-one form of weight `w` vanishing in its first
//! `dim M_w` coefficients is zero.
//!
//! ```
//! use eisenbasis::basis::{cusp_basis, new_basis_descriptors};
//!
//! let names: Vec<String> = new_basis_descriptors(36)
//!     .unwrap()
//!     .iter()
//!     .map(|d| d.to_string())
//!     .collect();
//! assert_eq!(names, ["G_36", "G_4*G_32", "G_8*G_28", "G_12*G_24"]);
//!
//! let cusp = cusp_basis(12, 16).unwrap();
//! assert_eq!(cusp.elements()[0].to_string(), "G_4*G_8 - 91/110560*G_12");
//! ```

pub mod arith;
pub mod basis;
pub mod cli;
pub mod eisenstein;
mod error;
pub mod qseries;

pub use arith::Rational;
pub use error::{Error, Result};
