//! Command-line driver and file formats for [`identity_lab_core`].

pub mod cli;
pub mod format;
pub mod report;

pub use cli::{run, Outcome};
