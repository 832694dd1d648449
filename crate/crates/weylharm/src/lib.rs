//! Exact-arithmetic toolkit for rotation-invariant differential operators
//! in the second Weyl algebra and the generalized-harmonic decompositions
//! they induce: invariance testing, generator factorization, per-component
//! reduction to ordinary differential operators, Almansi and cellular
//! decompositions of polyharmonic polynomials, and expansions through
//! terminating hypergeometric series.
//!
//! All coefficients are Gaussian rationals and every identity is checked
//! bit-exactly; there is no floating point anywhere.

pub mod cli;
pub mod expr;
pub mod harmonic;
pub mod invariance;
pub mod linalg;
pub mod poly;
pub mod reduction;
pub mod scalar;
pub mod weyl;

pub use harmonic::{
    AlmansiDecomposition, BasisChangeTable, CellularDecomposition, GammaHarmonicCoefficients,
    OBasis,
};
pub use invariance::{GenExpr, Generator, GeneratorWord};
pub use poly::{BiPoly, RotPoly, UniPoly};
pub use reduction::ComponentFamily;
pub use scalar::{GaussRational, Rational};
pub use weyl::{WeylOp1, WeylOp2};

use std::fmt;

/// Domain errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A canonical term violates the invariance condition `a1 - a2 = b1 - b2`.
    NotRotationInvariant,
    /// Projector node set contains a repeated integer.
    RepeatedProjectorNode(i64),
    /// The picked projector node is not a member of the node set.
    ProjectorNodeMissing(i64),
    /// Hypergeometric series does not terminate: the first parameter is not
    /// a non-positive integer.
    NonTerminatingSeries,
    /// Hypergeometric denominator parameter hits zero before termination.
    ZeroHypergeometricDenominator,
    /// The polynomial is not annihilated by the required operator.
    NotInKernel,
    /// Coefficient support extends to both signs where one-sided support is
    /// required.
    TwoSidedSupport,
    /// The zero polynomial was passed where a non-zero one is required.
    ZeroPolynomial,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotRotationInvariant => {
                write!(f, "operator does not commute with rotations")
            }
            Error::RepeatedProjectorNode(m) => {
                write!(f, "projector node set repeats the integer {m}")
            }
            Error::ProjectorNodeMissing(m) => {
                write!(f, "projector node {m} is not in the node set")
            }
            Error::NonTerminatingSeries => {
                write!(f, "hypergeometric series does not terminate")
            }
            Error::ZeroHypergeometricDenominator => {
                write!(f, "hypergeometric denominator parameter vanishes before termination")
            }
            Error::NotInKernel => {
                write!(f, "polynomial is not annihilated by the required operator")
            }
            Error::TwoSidedSupport => {
                write!(f, "coefficient support must be one-sided")
            }
            Error::ZeroPolynomial => write!(f, "input polynomial must be non-zero"),
        }
    }
}

impl std::error::Error for Error {}
