//! Quartic Gauss sums over the Gaussian integers.
//!
//! Layers, bottom up: exact arithmetic in `Z[i]` ([`gaussint`]), residue
//! symbols ([`symbols`]), Gauss-sum evaluation and caching ([`gauss_sums`]),
//! prime enumeration ([`sieve`]), prime-sum statistics ([`analytic`]) and
//! truncated Dirichlet series ([`dirichlet`]).

pub mod analytic;
pub mod dirichlet;
pub mod error;
pub mod gauss_sums;
pub mod gaussint;
pub mod reduce;
pub mod sieve;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use gaussint::{BetaClass, GaussInt};
