//! Exact arithmetic for triangular-number representation counts.
//!
//! The library computes three families of quantities with arbitrary precision:
//!
//! - the generating series `Ψ(q) = Σ q^{k(k+1)/2}` and truncated power series
//!   arithmetic over big integers ([`series`]),
//! - representation counts `t_r(n)`, the divisor sum
//!   `D(n) = Σ_{d|n} (1 + 2(-1)^d)/d` and binomial coefficients ([`numbers`]),
//! - partial Bell polynomials evaluated at the derivatives of `Ψ` at zero
//!   ([`bell`]).
//!
//! [`harness`] checks the identity
//!
//! ```text
//! Σ_{d|n} (1 + 2(-1)^d)/d = Σ_{r=1}^{n} (-1)^r/r · C(n, r) · t_r(n)
//! ```
//!
//! together with every intermediate step (product formulas for `Ψ`, the
//! logarithmic expansion, the Bell-polynomial lemmas and the binomial sum)
//! up to configurable bounds, with exact rational equality throughout.

pub mod bell;
mod error;
pub mod harness;
pub mod numbers;
pub mod series;

pub use error::{Error, Result};
pub use numbers::ExactRational;
