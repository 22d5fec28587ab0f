pub mod commutator;
pub mod concrete_rep;
pub mod diagrams;
pub mod error;
pub mod qarith;
pub mod rd_harness;
pub mod report;
pub mod spectral;
pub mod suites;
pub mod tl_elements;

pub use error::{Error, Result};
