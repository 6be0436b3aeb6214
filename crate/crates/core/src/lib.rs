//! Exact state-vector simulation of qudit teleportation through maximally and
//! non-maximally entangled two-qudit resources.

pub mod analysis;
pub mod bases;
pub mod cli;
pub mod error;
pub mod numfmt;
pub mod protocol;
pub mod states;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
