//! Computational convex geometry for log-concave functions in dimensions 1-3.

pub mod berwald;
pub mod error;
pub mod functionals;
pub mod geometry;
pub mod logconcave;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Body, Direction, Matrix, Vector};
pub use logconcave::{Epigraph, LogConcaveFunction};
pub use numerics::{DirectionGrid, QuadratureSpec, RngSeed};
