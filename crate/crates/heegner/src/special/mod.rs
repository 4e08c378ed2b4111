//! Special functions at arbitrary precision.

pub mod eta;
pub mod jacobi;
pub mod kernel;
pub mod num;
pub mod poly;
pub mod quad;

pub use eta::{dedekind_eta4, log_abs_2pi_eta4};
pub use jacobi::{
    digamma_int, harmonic, jacobi_p, jacobi_poly, p_kt, p_kt_poly, p_kt_rodrigues, psi_pair, q_kt_closed, q_kt_oracle,
    w_kt, w_kt_poly, w_kt_quadrature, JacobiIndex, QKernel, QRoute,
};
pub use kernel::{cosh_distance, green_kernel, harmonicity_residual, HarmonicityReport};
pub use num::{euler_gamma, Complex};
