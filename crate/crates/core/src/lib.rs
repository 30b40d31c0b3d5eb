//! Mignotte-style secret sharing over the Gaussian integers.
//!
//! The scheme splits a secret `s ∈ Z[i]` into residues modulo a sequence of
//! Gaussian moduli. Coalitions whose least common multiple has large enough
//! norm recover `s` exactly through the Chinese remainder theorem; everyone
//! else is left with a strict superset of candidates. Because Euclidean
//! division over Z\[i\] does not have unique remainders, every reduction here
//! uses the principal value in the divisor's fundamental domain; the naive
//! minimal-norm convention is kept around only to demonstrate how it breaks.
//!
//! Module map:
//! - [`gint`]: exact Gaussian-integer arithmetic, principal-value division,
//!   fundamental-domain membership, gcd/lcm.
//! - [`crt`]: congruence-system solver for not-necessarily-coprime moduli.
//! - [`scheme`]: parameter validation, dealing, reconstruction.
//! - [`access`]: access-structure enumeration and realization, threshold
//!   parameter generation, weighted-threshold representation.
//! - [`counting`]: exact lattice counts for the secret space, information
//!   rate, and per-coalition leakage.

pub mod access;
pub mod counting;
pub mod crt;
pub mod gint;
pub mod scheme;

pub use gint::{DivResult, DomainKind, GaussianInt};
