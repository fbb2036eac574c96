//! Energy spectra of a particle confined to a hard-walled sphere, with and
//! without a hard core at its centre.
//!
//! - [`specfun`]: spherical Bessel functions `j_l`, `y_l` and Legendre `P_l`.
//! - [`roots`]: Brent root finder and the zeros `beta_{n,l} pi` of `j_l`.
//! - [`spectra`]: shell and bare-sphere spectra under each convention.
//! - [`radial_oracle`]: finite-difference eigensolver used as an independent check.
//! - [`wavefn`]: normalized reduced radial functions `chi_l`.
//! - [`planewave`]: truncated partial-wave expansion of `exp(i k z)`.
//! - [`cli`]: the `cavityspec` command-line tool.

pub mod cli;
pub mod error;
pub mod format;
pub mod planewave;
pub mod quad;
pub mod radial_oracle;
pub mod roots;
pub mod specfun;
pub mod spectra;
pub mod wavefn;

pub use error::{Error, Result};
