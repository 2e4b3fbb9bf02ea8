//! Numerical right-hand sides of the CR holomorphic Morse inequalities.
//!
//! The crate is layered bottom-up:
//!
//! - [`pencil`]: Hermitian pencils `M + sL`, their signature sets and the exact
//!   integral of `|det(M + sL)|` over them.
//! - [`model`]: the Heisenberg-group model (weight `Phi_eta`, model matrix,
//!   Bergman trace, extremal value).
//! - [`geometry`]: sampled CR manifolds, condition `Y(q)`, the compact
//!   Heisenberg group and torus Grauert-tube generators, embedded-case helpers.
//! - [`bounds`]: global weak/strong Morse and Weyl coefficients.
//! - [`oracle`]: brute-force validators that share no numerical path with the above.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod pencil;
pub mod quadrature;
pub mod sum;

pub use error::{Error, Result};
