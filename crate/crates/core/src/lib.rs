//! Exact-arithmetic laboratory for families of d-secant (d-2)-planes to
//! canonically embedded curves.
//!
//! Everything is computed over a prime field `F_p` (default `p = 32003`):
//! plane models with prescribed nodes, canonical embeddings via adjoint
//! systems, pencils of divisors cut by lines through a marked node, the
//! first-order focal matrix of the induced secant family, its rank-one
//! locus, and the second-order focal locus on the rational normal curves
//! that arise there. All linear algebra is exact; genericity assumptions
//! are checked per sample, never assumed.

// Index loops over matrix dimensions are the clearer idiom throughout
// this crate; field division is multiplication by the inverse.
#![allow(clippy::needless_range_loop, clippy::suspicious_arithmetic_impl)]

pub mod canonical;
pub mod curve;
pub mod dual;
pub mod error;
pub mod experiment;
pub mod field;
pub mod focal;
pub mod matrix;
pub mod poly;
pub mod second;
pub mod univariate;
pub mod zerodim;

pub use error::{AlgebraError, LabError, SkipReason};
pub use field::{Fp, Ring, DEFAULT_PRIME};
