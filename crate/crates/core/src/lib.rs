pub mod error;
pub mod groups;
pub mod auxgen;
pub mod cli;
pub mod container;
pub mod dethibe;
pub mod hibe;
pub mod hibtdf;
pub mod hpe;
pub mod lossylab;

pub use error::{Error, Result};
