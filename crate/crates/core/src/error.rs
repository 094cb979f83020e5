//! Error and skip-reason taxonomy.
//!
//! Hard errors (`AlgebraError`, `LabError`) abort an operation. A
//! `SkipReason` is different: it marks a single pencil fiber as unusable
//! for the analysis (non-split, non-generic, ...) and is counted in the
//! run census rather than propagated as a failure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from the exact-algebra substrate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// `particular_solution` was asked for a right-hand side outside the column space.
    #[error("inconsistent linear system: rhs not in column space")]
    InconsistentSystem,
    /// Dual-number elimination found no pivot with invertible value part.
    #[error("singular value part: no invertible pivot in column {column}")]
    SingularValuePart { column: usize },
    /// Interpolation nodes are not consistent with any polynomial of the requested degree.
    #[error("degree overflow: data requires degree {needed} > max {max}")]
    DegreeOverflow { needed: usize, max: usize },
    /// `h0_twisted` supports vanishing multiplicities 1 and 2 only.
    #[error("multiplicity {0} unsupported (max 2)")]
    MultiplicityUnsupported(usize),
    /// Division that was expected to be exact left a remainder.
    #[error("inexact polynomial division")]
    InexactDivision,
}

/// Errors from curve generation, geometry construction and persistence.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("parameter range violation: {0}")]
    RangeViolation(String),
    #[error("case (g={g}, d={d}) infeasible for random node placement")]
    Infeasible { g: usize, d: usize },
    #[error("curve generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
    #[error("adjoint system has dimension {found}, expected genus {expected}")]
    CanonicalDimMismatch { found: usize, expected: usize },
    #[error("curve file schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("fiber unusable: {0:?}")]
    Skip(SkipReason),
    #[error("{0}")]
    Other(String),
}

/// Why a fiber was dropped from the analysis. Every skipped fiber is
/// counted under its reason; nothing is silently discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// Residual polynomial does not split into d distinct rational roots.
    NotSplit,
    /// Line tangent to a node branch, residual degree drop, or repeated root.
    DegenerateLine,
    /// rank(M) != d-1: the divisor is not in the expected Brill-Noether stratum.
    SpanRankUnexpected,
    /// Some entry of the span relation vector vanishes; points not in general position.
    KappaZero,
    /// dim T_{S,s} != rho+1.
    TsDimUnexpected,
    /// dim T_L W^1_d != rho.
    TangentDimUnexpected,
    /// Scroll vertex has unexpected dimension.
    VertexDimUnexpected,
    /// Hilbert signature matches neither reference.
    ClassifyDegenerate,
    /// Both Hilbert signatures matched (should be impossible for d >= 4).
    ClassifyAmbiguous,
    /// Moving system of the rank-one locus fails to have corank 1.
    ParamRankDrop,
    /// Neither side of the focal matrix has length 2; no parametrization route.
    UnsupportedShape,
    /// First-order lift of a rank-one-locus point is obstructed.
    LiftObstructed,
    /// Sampled deformation data does not fit the predicted polynomial degree.
    DegreeMismatch,
    /// The A-block could not be reduced to a rank-one (catalecticant) shape.
    NormalformFailed,
    /// Dual-number elimination hit a singular value part.
    SingularValuePart,
    /// A divisor point coincides with a vertex intersection point.
    NongenericOverlap,
    /// Reference fiber shares a point with a tested fiber.
    ReferenceOverlap,
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self)
    }
}
