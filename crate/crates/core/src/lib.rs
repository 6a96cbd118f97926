//! Exact computations for the WZW modular functor at small rank and level.

pub mod error;
pub mod fock;
pub mod fusion;
pub mod kz;
pub mod liealg;
pub mod linalg;
pub mod oracle;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};

#[cfg(test)]
mod properties;
