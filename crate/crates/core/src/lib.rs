//! Exact and empirical Sato–Tate statistics for the quadratic twists of the
//! genus-3 hyperelliptic curve `y² = x⁸ − 14x⁴ + 1`.
//!
//! The curve's Jacobian is isogenous to a product of three elliptic curves,
//! and the normalized Frobenius classes of its twists land in a compact
//! subgroup of `USp(6)` whose component group is the octahedral group
//! (≅ `S₄`).  That structure makes three independent computations possible,
//! and this crate implements all of them so they can be played against each
//! other:
//!
//! * **exact moments** of the first three normalized L-polynomial
//!   coefficients for each of the eleven twist classes, as rational numbers
//!   ([`moments`], driven by the group theory in [`octahedral`]);
//! * **empirical statistics** from counting points on explicit twist models
//!   over `F_p` for all primes up to a bound, with the Frobenius conjugacy
//!   class of each prime resolved by congruence or resolvent-polynomial
//!   splitting data ([`curvecount`], [`frobclass`], [`sweep`]);
//! * **Monte-Carlo integration** over the twisting subgroup itself, sampling
//!   `SU(2) × (component group)` directly ([`montecarlo`]).
//!
//! [`octahedral::verify_usp_lemmas`] checks the matrix identities that tie
//! the three views together, exactly, in `ℚ(√2)` arithmetic.

pub mod curvecount;
pub mod ffield;
pub mod frobclass;
pub mod moments;
pub mod montecarlo;
pub mod octahedral;
pub mod sweep;

#[cfg(test)]
pub(crate) mod numeric;

use thiserror::Error;

/// Errors surfaced by fallible operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The modulus failed the deterministic Miller–Rabin primality test.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// Prime moduli must be odd (the curve machinery needs `char ≠ 2`).
    #[error("modulus {0} is even; only odd primes are supported")]
    EvenModulus(u64),
    /// Prime moduli must fit in 62 bits so products fit in `u128`.
    #[error("modulus {0} exceeds the 62-bit limit")]
    ModulusTooLarge(u64),
    /// The extension degree must be 1, 2, or 3.
    #[error("unsupported extension degree {0} (only 1, 2, and 3)")]
    UnsupportedDegree(usize),
    /// The curve model degenerates mod p (p divides the discriminant data,
    /// or p ∈ {2, 3}).
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    /// Counting over `F_{p^depth}` would exceed the supported budget.
    #[error("depth-{depth} count at p = {p} exceeds budget (p ≤ {limit})")]
    DepthTooExpensive { p: u64, depth: usize, limit: u64 },
    /// No twist-class catalog entry with the requested row id.
    #[error("no catalog row {0} (rows are 1..=11)")]
    NoSuchRow(u8),
    /// A mixture's weights must be nonnegative and sum to 1.
    #[error("mixture weights invalid: {0}")]
    BadMixture(String),
    /// Malformed external catalog file.
    #[error("catalog error: {0}")]
    BadCatalog(String),
    /// Invalid parameters passed to a computation entry point.
    #[error("invalid request: {0}")]
    BadRequest(String),
}
