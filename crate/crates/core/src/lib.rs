//! Schrödinger operators with δ-interactions on planar curve networks and
//! their squeezed-potential approximations, discretized with P1 finite
//! elements.

pub mod error;
pub mod fem;
pub mod geometry;
pub mod lab;
pub mod oracles;
pub mod potentials;
pub mod quadrature;
pub mod scalar;
pub mod sparse;
pub mod spectral;

pub use error::{Error, Result};
