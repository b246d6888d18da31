//! Experiment harness around `tucker_sketch`: tensor and image files, sweep
//! execution and CSV reports.

pub mod bench;
pub mod error;
pub mod image;
pub mod report;
pub mod tensor_io;

pub use bench::{prepare_input, run_bench, run_on, run_on_with, BenchDescriptor, Noise, Source};
pub use error::{BenchError, Result};
pub use report::{BenchReport, BenchRow, CSV_HEADER};
