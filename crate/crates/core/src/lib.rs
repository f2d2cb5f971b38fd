//! Exact F-pure threshold computations for polynomials over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`baseq`]: base-q digits and truncations of positive rationals.
//! * [`algebra`]: finite fields, sparse multivariate polynomials, bivariate
//!   squarefree parts and root finding.
//! * [`frobenius`]: membership in Frobenius powers of the maximal ideal and the
//!   ν invariant, with an on-disk cache.
//! * [`fpt`]: exact and truncated thresholds, certificates and hypothesis checks.
//! * [`accumulation`]: perturbations `g_e = f + α_e` whose thresholds approach
//!   `fpt(f)` strictly from above.
//! * [`counterexamples`]: end-to-end packages exhibiting accumulation points of
//!   two-dimensional thresholds that are not one-dimensional thresholds.

pub mod accumulation;
pub mod algebra;
pub mod baseq;
pub mod counterexamples;
mod error;
pub mod fpt;
pub mod frobenius;

pub use baseq::{DigitExpansion, ExactRational};
pub use error::{Error, Result};
