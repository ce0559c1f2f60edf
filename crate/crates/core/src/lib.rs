pub mod error;
pub mod field;
pub mod geometry;
pub mod kernels;
pub mod oracle;
pub mod quadrature;
pub mod representation;
pub mod bie;
pub mod cli;
pub mod config;

pub use error::{Result, WaveError};
pub mod verify;
