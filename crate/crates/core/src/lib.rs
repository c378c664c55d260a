//! Discrete mean values of the Riemann zeta function over its nontrivial zeros.
//!
//! The crate has two halves. The first evaluates the closed-form main terms
//! for sums of the shape
//!
//! ```text
//!     S(α, T, X, Y)  = Σ_{0<γ≤T} ζ(ρ+α) X(ρ) Y(1−ρ)
//!     S_m(T, X, Y)   = Σ_{0<γ≤T} ζ^{(m)}(ρ) X(ρ) Y(1−ρ)
//! ```
//!
//! where `X`, `Y` are Dirichlet polynomials of length `N` ([`mainterm`]).
//! The second computes the zeros and the sums themselves at desk scale so
//! the predictions can be checked ([`zeros`], [`empirical`]).
//!
//! Supporting modules: exact arithmetic functions ([`arith`]), Laurent
//! coefficients of ζ near 1 ([`constants`]) and a double-precision zeta
//! engine ([`zeta`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arith;
pub mod constants;
pub mod empirical;
mod error;
pub mod mainterm;
pub mod numeric;
pub mod summation;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
