pub mod algebra;
pub mod chaincx;
pub mod cli;
pub mod derived;
pub mod diag;
pub mod error;
pub mod exactlin;
pub mod gamma;
pub mod modrep;
pub mod triples;

pub use error::{Error, Result};
