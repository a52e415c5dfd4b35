//! Shared numerical kernels: adaptive quadrature, the Volterra solver, special
//! functions and small Hermitian-matrix helpers.

pub mod linalg;
pub mod quad;
pub mod special;
pub mod volterra;

pub use linalg::{frobenius, hermitian_apply, hermitian_eigen, hermitian_sqrt, hermiticity_defect};
pub use quad::{
    gauss_legendre, integrate_adaptive, integrate_principal_value, integrate_principal_value_with_breaks,
    integrate_real, integrate_semi_infinite, integrate_with_breaks, QuadratureConfig,
};
pub use special::{bessel_j, csinc, laguerre, sinc, sinhc, spherical_bessel_j};
pub use volterra::{solve_volterra2, solve_volterra2_sampled, DecayTrajectory, TimeGrid};
