use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::freealg::{Element, Gen};

/// Every failure the library can report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Inversion or division by the zero rational function.
    DivisionByZero,
    /// An operation that needs a nonzero argument received zero.
    ZeroInput,
    /// The value has a pole at `q = 1` after the requested division.
    PoleAtOne,
    /// Arguments outside the domain of the operation.
    BadArgs(String),
    /// Index pair not valid for the operation at the given rank.
    BadIndices { i: usize, j: usize, n: usize },
    /// A generator does not exist at the rank in use.
    NotInRank { gen: Gen, n: usize },
    /// A generator was expected to lie in the eliminable set.
    NotOmega2(Gen),
    /// A substitution map lacks the image of a generator.
    MissingImage(Gen),
    /// Completion produced a relation that cannot be oriented into a
    /// quadratic rule on a disordered pair.
    OrientationFailure(String),
    /// Normalization ran out of rewrite steps; carries the partial result.
    FuelExhausted(Box<Element>),
    /// A table row could not be evaluated from earlier rows.
    UnresolvedTableEntry(String),
    /// Braid node outside `1..=n`.
    BadNode { k: usize, n: usize },
    /// The closed structure-constant formula disagrees with the matrix
    /// commutator.
    FormulaMatrixMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroInput => write!(f, "zero input"),
            Error::PoleAtOne => write!(f, "pole at q = 1"),
            Error::BadArgs(m) => write!(f, "bad arguments: {m}"),
            Error::BadIndices { i, j, n } => write!(f, "bad indices ({i},{j}) at rank {n}"),
            Error::NotInRank { gen, n } => write!(f, "generator {gen} does not exist at rank {n}"),
            Error::NotOmega2(g) => write!(f, "generator {g} is not eliminable"),
            Error::MissingImage(g) => write!(f, "no image given for {g}"),
            Error::OrientationFailure(m) => write!(f, "cannot orient relation: {m}"),
            Error::FuelExhausted(_) => write!(f, "rewrite fuel exhausted"),
            Error::UnresolvedTableEntry(m) => write!(f, "unresolved table entry: {m}"),
            Error::BadNode { k, n } => write!(f, "braid node {k} outside 1..={n}"),
            Error::FormulaMatrixMismatch(m) => write!(f, "formula/matrix mismatch: {m}"),
        }
    }
}

impl core::error::Error for Error {}
