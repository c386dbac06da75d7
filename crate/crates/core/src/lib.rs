//! Entangling power of finite-dimensional quantum channels: Kraus and Choi
//! representations, Schmidt measures, product-state witness minimization and
//! non-entangling certificates.

pub mod channels;
pub mod cli;
pub mod error;
pub mod io;
pub mod json;
pub mod linalg;
pub mod optimize;
pub mod power;
pub mod scan;
pub mod scenarios;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
