//! Rack bialgebras, their enveloping algebras and deformation complexes.

// structure constants are indexed by basis position throughout
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod coalgebra;
pub mod cohomology;
pub mod enveloping;
pub mod error;
pub mod examples;
pub mod hopf;
pub mod io;
pub mod linalg;
pub mod rack;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod yd;

pub use error::{Error, Result};
pub use scalar::{DualScalar, Field, Ring, Scalar};
