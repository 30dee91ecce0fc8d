pub mod cli;
pub mod distribution;
pub mod error;
pub mod instances;
pub mod io;
pub mod isotropy;
pub mod kahler;
pub mod linalg;
pub mod suite;
pub mod tensor;

pub use error::{Error, Result};
