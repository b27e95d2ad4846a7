pub mod error;
pub mod matrix_poly;
pub mod poly;
pub mod rootfind;
pub mod spectral;

pub use error::{Error, Result};
pub mod modular;
pub mod offline;
pub mod problems;
pub mod diagnostics;
pub mod recover;
pub mod bench;
