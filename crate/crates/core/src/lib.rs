//! Exact combinatorics of the absent-minded boarding process.
//!
//! A fully booked plane boards in order; the first `k` passengers ignore
//! their assigned seats and sit uniformly at random among the free ones,
//! everyone else takes their own seat when available and a uniformly random
//! free seat otherwise. This crate computes the law of "who ends up in a
//! wrong seat" exactly, with arbitrary-precision rational arithmetic
//! throughout:
//!
//! - [`oracle`]: ground truth by direct process-tree enumeration, plus a
//!   seeded Monte Carlo sampler;
//! - [`enumerators`]: closed-form weight enumerators and probability
//!   generating functions, with marginal and subset probabilities;
//! - [`moments`]: exact central moments, closed forms in harmonic numbers,
//!   and floating-point normality diagnostics;
//! - [`discovery`]: experimental-mathematics tooling that refits the moment
//!   closed forms from data and guesses/verifies linear recurrences;
//! - [`poly`] and [`rat`]: the exact scalar and polynomial substrate.
//!
//! All types are immutable values and all operations are pure functions, so
//! everything can be shared freely across threads.

pub mod discovery;
pub mod enumerators;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod oracle;
pub mod poly;
pub mod rat;

pub use error::{Error, Result};
pub use poly::{BivarPoly, BivarRatFun, MultilinearPoly, UniPoly};
pub use rat::Rat;
