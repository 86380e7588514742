//! Spin factor Jordan algebra, unital norms and uncurling metrics, a dense
//! Clifford algebra kernel, and the observer-observed products of the
//! spacetime algebra, together with a seeded verification harness.

pub mod clifford;
pub mod error;
pub mod harness;
pub mod normlab;
pub mod observer;
pub mod rng;
pub mod scalar;
pub mod spinfactor;

pub use error::{Error, Result};
