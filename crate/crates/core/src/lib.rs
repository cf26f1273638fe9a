pub mod checkpoint;
pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod train;
pub mod treebank;

pub use error::{Error, Result};
