//! Command-line front end: config loading, presets, and report rendering.
//! The binary in `main.rs` stays a thin dispatcher over these pieces.

pub mod config;
pub mod presets;
pub mod report;
