pub mod circuit;
pub mod cli;
pub mod depth2;
pub mod dtree;
pub mod error;
pub mod formula;
pub mod oracle;
pub mod partition_format;
pub mod reduce;
pub mod restriction;
pub mod rng;
pub mod solver;
pub mod switching;

pub use error::{Error, Result};
