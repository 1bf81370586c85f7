//! Left-invariant geometry of nilpotent Lie groups: curvature of the fixed
//! orthonormal metric, certification of minimal (Ricci-soliton) compatible
//! metrics for symplectic / complex / hypercomplex structures, moment-map
//! gradient flow inside the structure group orbit, and rank-one Einstein
//! solvable extensions.
//!
//! A Lie bracket is stored through its structure constants on a fixed
//! orthonormal basis; every operation is a pure function of that data.

pub mod algebra;
pub mod catalog;
pub mod curvature;
pub mod extension;
pub mod flow;
pub mod io;
pub mod linalg;
pub mod minimality;
pub mod report;
pub mod structures;

pub use algebra::{Bracket, BracketTerm, ValidationReport};
pub use curvature::{CurvatureReport, MetricSolvableAlgebra};
pub use extension::{einstein_check, rank_one_extension};
pub use flow::{FlowParams, FlowTrace};
pub use minimality::{Comparison, MinimalityCertificate};
pub use structures::{StructureClassification, StructureKind, StructureTensor};

use thiserror::Error;

/// Relative singular-value threshold used for every rank decision
/// (lower central series, derivation kernels, structure-group algebras).
pub const TAU_RANK: f64 = 1e-9;

/// Residual threshold below which a structure predicate flag is set.
pub const TAU_STRUCT: f64 = 1e-10;

/// Residual threshold below which a metric is reported minimal.
pub const TAU_MIN: f64 = 1e-9;

/// Max-norm gap above which two Ricci spectra count as distinct.
pub const TAU_SPEC: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bracket: {0}")]
    InvalidBracket(String),
    #[error("operator is singular or too ill-conditioned to invert")]
    SingularOperator,
    #[error("bracket is not two-step for the requested splitting")]
    NotTwoStepSplit,
    #[error("structure tensor has the wrong kind for this operation")]
    WrongKind,
    #[error("operator is not an almost complex structure (J^2 != -I)")]
    BadAlmostComplex,
    #[error("structure is not integrable for the starting bracket (residual {0:.3e})")]
    NotIntegrable(f64),
    #[error("certificate does not witness a minimal metric (residual {0:.3e})")]
    NotMinimal(f64),
    #[error("derivation part vanishes; the algebra is abelian and the extension degenerates")]
    AbelianDerivation,
    #[error("derivation trace is not positive")]
    NonPositiveTrace,
    #[error("zero bracket cannot be normalized")]
    ZeroBracket,
    #[error("parameter outside the constructor domain: {0}")]
    DomainError(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
