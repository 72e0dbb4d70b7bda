//! Exact density decisions for finitely generated abelian subsemigroups of
//! ℝⁿ and of connected abelian Lie groups, constructions of minimal
//! generating tuples of commuting matrices with somewhere dense orbits, and
//! the simulation machinery to watch those orbits fill space.
//!
//! The crate is organized around five subsystems:
//!
//! * [`exactreal`] — exact arithmetic over a declared ℚ-independent symbol
//!   basis, plus exact rational linear algebra,
//! * [`density`] — the density checkers and minimal generator counts,
//! * [`construct`] — explicit generating tuples realizing those counts,
//! * [`orbit`] — orbit enumeration and coverage measurement,
//! * [`diophantine`] — constructive Kronecker approximation and heuristic
//!   integer-relation search.

pub mod construct;
pub mod density;
pub mod diophantine;
pub mod exactreal;
pub mod orbit;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mismatched symbol bases")]
    MismatchedBasis,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("ambiguous sign: float shadow {shadow:e} lies inside the ±{tol:e} dead zone")]
    AmbiguousSign { shadow: f64, tol: f64 },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{0}")]
    Input(String),

    #[error("class {class} requires {requirement}, got n = {n}")]
    Parity {
        class: String,
        requirement: String,
        n: usize,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
