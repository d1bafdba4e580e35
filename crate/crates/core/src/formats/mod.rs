//! Readers and writers for the file formats the pipelines exchange: PWL and
//! CSV traces, binary PGM images, `key = value` parameter profiles and
//! whitespace-separated weight matrices.
//!
//! Readers reject malformed input instead of repairing it, and every error
//! names the offending line or byte offset.

pub mod csv;
pub mod matrix;
pub mod model;
pub mod num;
pub mod pgm;
pub mod profile;
pub mod pwl;
mod trace;

pub use trace::{resample, SignalTrace};
