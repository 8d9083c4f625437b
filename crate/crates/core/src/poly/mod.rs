//! Exact polynomial types: dense univariate, subset-indexed multilinear, and
//! sparse bivariate with rational-function quotients.

pub mod bivar;
pub mod multilinear;
pub mod unipoly;

pub use bivar::{BivarPoly, BivarRatFun, Exp};
pub use multilinear::{
    elementary_variant, elementary_variants, elementary_variants_scalar, MultilinearPoly, MAX_VARS,
};
pub use unipoly::{rising_product, UniPoly};
