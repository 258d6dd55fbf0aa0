//! Exact machinery for cross-union set families.
//!
//! A tuple of families `F_0, ..., F_s` of k-subsets of `[n]` is *cross-union*
//! if no transversal choice `A_0 ∈ F_0, ..., A_s ∈ F_s` has union equal to
//! the whole ground set. This crate provides:
//!
//! * exact big-integer / rational binomial arithmetic ([`combinat`]),
//! * bitmask set families and property checkers ([`family`]),
//! * shifting / compression and nested normalization ([`compression`]),
//! * shadows and the Lovász shadow bound ([`shadow`]),
//! * circle-method averaging bounds ([`circle`]),
//! * certified exhaustive maximization of the size sum ([`search`]),
//! * exact verification of the supporting inequalities ([`verify`]).
//!
//! All inequality checks run in exact rational arithmetic; floating point is
//! used only where a real-valued binomial argument is genuinely required
//! (solving `C(x, k) = m` for real `x`).

pub mod circle;
pub mod combinat;
pub mod compression;
pub mod family;
pub mod search;
pub mod shadow;
pub mod verify;

/// Scalar used where a genuinely real-valued quantity is needed.
pub type Real = f64;
/// Exact integer used for all counts.
pub type Int = num_bigint::BigInt;
/// Exact rational used for all inequality checks.
pub type Rational = num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
