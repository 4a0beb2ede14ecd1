pub mod blocks;
pub mod corpus;
pub mod dimension;
pub mod error;
pub mod graph;
pub mod lpa;
pub mod rickart;
pub mod scalars;
pub mod structure;

pub use error::{Error, Result};
