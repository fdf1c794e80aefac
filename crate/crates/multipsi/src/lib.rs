//! Exact combinatorics of ψ-class intersection numbers on multicolored
//! moduli spaces of genus-zero curves.
//!
//! A *multicolored* space is indexed by a color profile `[r₁,…,r_m]`: marked
//! points of the same color may collide, points of different colors may not.
//! The crate computes integrals of ψ-class products on these spaces two
//! independent ways — by enumerating the fixed points of a sign-reversing
//! involution on decorated combinatorial objects ([`decoration`], [`hue`]),
//! and by an inclusion–exclusion multinomial oracle ([`psi`]) — and
//! cross-checks the two on demand.
//!
//! Alongside the intersection numbers, the crate evaluates alternating sums
//! over boundary strata of graphically stable spaces ([`strata`]), which
//! collapse to acyclic-orientation counts ([`graph`]), and the bipartite
//! matching bounds and positivity criterion for the integrals
//! ([`nonvanishing`]).
//!
//! Every computation is exact; where a result can be derived by more than one
//! route the routes are kept independent so they can check each other.

pub mod cli;
pub mod decoration;
pub mod graph;
pub mod hue;
pub mod nonvanishing;
pub mod osp;
pub mod psi;
pub mod strata;
pub mod verify;

pub use decoration::{Decoration, ExponentProfile, HuePartition};
pub use graph::{ColorProfile, Orientation, SimpleGraph};
pub use osp::OrderedSetPartition;
pub use psi::Method;
pub use strata::{DualTree, Millipede};

/// Errors surfaced by the library.
///
/// `InvalidInput` covers violated preconditions (out-of-range vertices,
/// malformed profiles, non-canonical exponents). `Inconsistency` is reserved
/// for disagreement between two routes that must agree — it signals a bug,
/// never bad input.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
