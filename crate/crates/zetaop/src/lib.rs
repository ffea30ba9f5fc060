//! Numerics for the Hurwitz zeta function, Dirichlet L-functions, and the
//! shift-operator series built from the coefficients p_n(s) and q_n(s).
//!
//! The crate provides:
//!
//! * a complex scalar kernel (gamma, rising factorials, real-base powers),
//! * exact Bernoulli numbers and polynomials,
//! * an adaptive Euler–Maclaurin evaluator for ζ(s,a) on ℂ∖{1} with
//!   certified error bounds, plus Cauchy-integral s-derivatives,
//! * Dirichlet character groups and two independent L(s,χ) evaluators,
//! * the shift operator G, its truncations, its convolution inverse, and
//!   series diagnostics that exhibit where the associated expansions
//!   converge or diverge,
//! * a domain-coloring renderer for complex plots of these functions.

pub mod bernoulli;
pub mod characters;
pub mod diagnostics;
pub mod error;
pub mod hurwitz;
pub mod identities;
pub mod numerics;
pub mod operators;
pub mod plots;

pub use error::Error;
pub use numerics::Complex;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
