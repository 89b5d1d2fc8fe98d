//! Exact series and walk counts for lattice walks avoiding a half-line.

pub mod closedform;
pub mod error;
pub mod exactnum;
pub mod extract;
pub mod factorize;
pub mod fps;
pub mod halfline;
pub mod limitlaw;
pub mod model;
pub mod oracle;
pub mod slitgf;
pub mod verify;

pub use error::{Error, Result};
