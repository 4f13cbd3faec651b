//! Exact sinc constants, central sections of the cube, and small integer
//! solutions of linear forms measured in the maximum norm.
//!
//! The crate is organised around four computational modules:
//!
//! - [`exact_sigma`]: the constants `σ_n = (2/π)∫₀^∞ (sin t / t)ⁿ dt` in exact
//!   rational arithmetic, a quadrature cross-check, and the Siegel constant
//!   bounds `c_n`.
//! - [`cube_sections`]: volumes of central hyperplane sections of `[-1, 1]ⁿ`
//!   and the distance function of the intersection body of the cube.
//! - [`kernel_lattice`]: the lattice `{x ∈ ℤⁿ : a·x = 0}`, its successive
//!   minima in the maximum norm and certified small solutions.
//! - [`sum_distinct`]: sum-distinct sets and exact comparison of the known
//!   lower bounds for their largest element.
//!
//! [`cli`] wires all of them into the `siegel` command-line tool.

pub mod cli;
pub mod cube_sections;
mod error;
pub mod exact_sigma;
pub mod kernel_lattice;
pub mod quadrature;
pub mod rational;
pub mod sum_distinct;
pub mod suites;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
