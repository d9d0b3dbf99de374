pub mod clifford;
pub mod error;
pub mod exactnum;
pub mod holonomy;
pub mod qside;
pub mod simplex;
pub mod topdegree;
pub mod verifier;

pub use error::{Error, Result};
