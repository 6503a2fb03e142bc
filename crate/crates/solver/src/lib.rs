//! Semi-implicit, well-balanced finite difference WENO solver for the
//! all-Mach compressible Euler equations with a gravitational source.

pub mod boundary;
pub mod cases;
pub mod charwise;
pub mod compwise;
pub mod config;
pub mod elliptic;
pub mod eos;
pub mod error;
pub mod explicit;
pub mod field;
pub mod grid;
pub mod hydrostatic;
pub mod integrator;
pub mod operator;
pub mod output;
pub mod params;
pub mod sim;
pub mod tableau;
pub mod weno;

pub use error::{Result, SolverError};
