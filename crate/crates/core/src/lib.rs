//! Monic orthogonal polynomials attached to the Laguerre/Hermite
//! differential operators: classical machinery, measures `w/rho`,
//! construction of the differential-orthogonality family, zero spectra,
//! strong asymptotics, and the associated stagnation-point flow model.

pub mod error;
pub mod scalar;
pub mod polycore;
pub mod measures;
pub mod construct;
pub mod spectra;
pub mod asymptotics;
pub mod hydro;

pub use error::{Error, Result};
pub use scalar::{CScalar, Prec, Scalar};
