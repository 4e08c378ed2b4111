//! High-precision toolkit for Green's functions at Heegner points, theta
//! series of Hecke characters of imaginary quadratic fields, holomorphic
//! projection coefficients and Rankin-Selberg L-series.
//!
//! The library is organised bottom-up:
//!
//! - [`special`]: Jacobi polynomials and Jacobi functions of the second kind,
//!   digamma at integers, the Dedekind eta function, quadrature.
//! - [`quadfield`]: Kronecker symbols, class groups of binary quadratic forms,
//!   ideals, Heegner points and genus characters.
//! - [`heckechar`]: unramified Hecke characters of infinity type `(2t, 0)` and
//!   their partial theta coefficients.
//! - [`arithsums`]: the genus-character divisor sums.
//! - [`dirichlet`]: `L(1, eps_D)` and `L'/L(1, eps_D)`.
//! - [`fourier`]: the coefficients `a_m` and integer relations.
//! - [`green`]: lattice sums of the Green's kernel over Hecke correspondences.
//! - [`lseries`]: the Rankin-Selberg series, its completion and derivative.
//! - [`cli`]: configuration, result cache and the command implementations.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod arithsums;
pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod fourier;
pub mod green;
pub mod heckechar;
pub mod lseries;
pub mod quadfield;
pub mod special;

pub use error::{Error, Result};
pub use special::num::{Complex, Evaluation};
