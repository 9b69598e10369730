//! Numerics for the infinite divisibility of negative powers β_{a,b}^{-s}
//! of Beta random variables.
pub mod betapower;
pub mod classify;
pub mod error;
pub mod levy;
pub mod sim;
pub mod specfun;
pub mod verify;

pub use betapower::{ComplexPoint, Params};
pub use error::{Error, Result};
