pub mod bohr;
pub mod certarith;
pub mod cli;
pub mod construction;
pub mod dyadic;
pub mod error;
pub mod rational;

pub use error::{Error, Result};
