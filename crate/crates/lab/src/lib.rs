//! Experiment runner for the ximarkov library: configuration, experiment
//! drivers and CSV/SVG output.

pub mod config;
pub mod emit;
pub mod error;
pub mod experiments;
pub mod result;

pub use config::{Experiment, ExperimentConfig};
pub use error::{LabError, Result};
pub use experiments::run;
pub use result::ExperimentResult;
